"""Command-line entry point.

    wbblood run <config> [--source hsr|centered] [--cells J] [--out DIR]
    wbblood scenarios list
    wbblood converge <scenario> --cells J1,J2,...
    wbblood plot <DIR>

Exit codes: 0 success, 2 configuration error, 3 positivity failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, load_config
from .plotscript import emit_plot_script
from .runner import NoOracleError, convergence_study, run_scenario, write_run
from .state import PositivityError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_POSITIVITY = 3
EXIT_IO = 4


def packaged_scenarios() -> dict[str, Path]:
    root = resources.files("wbblood") / "scenarios"
    return {Path(str(p)).stem: Path(str(p)) for p in root.iterdir() if str(p).endswith(".ini")}


def _resolve(name_or_path: str) -> Path:
    """A packaged scenario name or a path to a config file."""
    path = Path(name_or_path)
    if path.suffix == ".ini" or path.exists():
        return path
    known = packaged_scenarios()
    if name_or_path in known:
        return known[name_or_path]
    raise ConfigError(f"unknown scenario {name_or_path!r}; known: {', '.join(sorted(known))}")


def _cells_list(text: str) -> list[int]:
    try:
        cells = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not cells or any(J < 1 for J in cells):
        raise argparse.ArgumentTypeError("cell counts must be positive")
    return cells


def _cmd_run(args) -> int:
    cfg = load_config(_resolve(args.config)).with_overrides(source=args.source, cells=args.cells)
    result = run_scenario(cfg)
    manifest = write_run(result, args.out)
    for d in result.diagnostics:
        print(f"t={d.t:<10g} steps={d.steps:<7d} max|u|={d.max_abs_u:.3e} min A={d.min_A:.6e} "
              f"mass error={d.mass_balance_error:.2e}")
    print(f"wrote {len(result.snapshots)} snapshot(s) and {manifest}")
    if result.failure is not None:
        print(f"error: {result.failure} (partial output written)", file=sys.stderr)
        return EXIT_POSITIVITY
    return EXIT_OK


def _cmd_scenarios(args) -> int:
    for name, path in sorted(packaged_scenarios().items()):
        cfg = load_config(path)
        print(f"{name:<16} J={cfg.grid.J:<5d} L={cfg.grid.length:<6g} t_end={cfg.t_end:g}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    cfg = load_config(_resolve(args.scenario))
    rows = convergence_study(cfg, args.cells)
    print(f"{'J':>6}  {'L1 error A':>12}  {'order':>6}  {'L1 error Q':>12}  {'order':>6}")
    for r in rows:
        oa = "" if r.order_A is None else f"{r.order_A:6.3f}"
        oq = "" if r.order_Q is None else f"{r.order_Q:6.3f}"
        print(f"{r.cells:>6d}  {r.error_A:12.5e}  {oa:>6}  {r.error_Q:12.5e}  {oq:>6}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    script = emit_plot_script(args.dir)
    path = Path(args.dir) / "plot.gp"
    path.write_text(script, encoding="ascii")
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wbblood", description="Well-balanced 1D blood-flow solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config (or a packaged scenario name)")
    run.add_argument("config")
    run.add_argument("--source", choices=("hsr", "centered"), help="override the source treatment")
    run.add_argument("--cells", type=int, help="override the number of cells")
    run.add_argument("--out", default="out", help="output directory (default: out)")
    run.set_defaults(func=_cmd_run)

    scen = sub.add_parser("scenarios", help="packaged scenarios")
    scen.add_argument("action", choices=("list",))
    scen.set_defaults(func=_cmd_scenarios)

    conv = sub.add_parser("converge", help="grid convergence against the scenario's oracle")
    conv.add_argument("scenario")
    conv.add_argument("--cells", type=_cells_list, required=True, help="comma-separated cell counts")
    conv.set_defaults(func=_cmd_converge)

    plot = sub.add_parser("plot", help="write plot.gp (gnuplot) for the runs in DIR")
    plot.add_argument("dir")
    plot.set_defaults(func=_cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if args.command == "run" and args.cells is not None and args.cells < 1:
        print("error: --cells must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, NoOracleError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PositivityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POSITIVITY
    except OSError as exc:  # includes an empty plot directory
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
