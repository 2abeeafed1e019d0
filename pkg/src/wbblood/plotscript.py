"""Emit a gnuplot script for the runs found in an output directory."""

from __future__ import annotations

import json
from pathlib import Path


class EmptyRunDirectory(FileNotFoundError):
    pass


def _q(name: str) -> str:
    return "'" + name.replace("'", "''") + "'"


def _times_label(t: float) -> str:
    return f"t = {t:g} s"


def _rest(m: dict, snaps: list[tuple[float, str]]) -> list[str]:
    t_last, last = snaps[-1]
    return [
        "set multiplot layout 1,2",
        "set xlabel 'x (m)'; set ylabel 'R_0 (m)'",
        f"plot {_q(m['profile_file'])} using 1:2 with lines title 'R_0(x)'",
        "set ylabel 'u (m/s)'",
        f"plot {_q(last)} using 1:4 with lines title {_q(_times_label(t_last))}",
        "unset multiplot",
    ]


def _riemann(m: dict, snaps: list[tuple[float, str]], refs: dict[float, str]) -> list[str]:
    t_last, last = snaps[-1]
    lines = ["set multiplot layout 1,2", "set xlabel 'x (m)'"]
    for col, label in ((5, "R (m)"), (3, "Q (m^3/s)")):
        curves = [f"{_q(last)} using 1:{col} with points pt 7 ps 0.5 title 'numerical'"]
        if t_last in refs:
            curves.append(f"{_q(refs[t_last])} using 1:{col} with lines title 'exact'")
        lines += [f"set ylabel '{label}'", "plot " + ", \\\n     ".join(curves)]
    lines.append("unset multiplot")
    return lines


def _reflection(m: dict, snaps: list[tuple[float, str]]) -> list[str]:
    p = m["plot"]
    inc, k, P0 = p["incident"], p["k"], p["P0"]
    curves = [f"{_q(f)} using 1:(($6 - {P0!r}) / {k!r}) with lines title {_q(_times_label(t))}"
              for t, f in snaps]
    curves.append(f"{inc * p['R_e']!r} with lines dt 2 title 'R_e'")
    curves.append(f"{inc * p['T_r']!r} with lines dt 2 title 'T_r'")
    return ["set xlabel 'x (m)'; set ylabel 'R - R_0 (m)'", "plot " + ", \\\n     ".join(curves)]


def _pulse(m: dict, snaps: list[tuple[float, str]], refs: dict[float, str]) -> list[str]:
    p = m["plot"]
    curves = [f"{_q(f)} using 1:4 with lines title {_q(_times_label(t))}" for t, f in snaps if t > 0.0]
    if "eps_f" in p:
        curves.append(f"{p['amplitude']!r} * exp(-{p['eps_f']!r} * x / (2 * {p['Tc']!r} * {p['c0']!r}))"
                      " with lines dt 3 lc 'black' title 'envelope'")
    elif "amplitude" in p and m["scenario"].startswith("dalembert"):
        curves.append(f"{p['amplitude']!r} with lines dt 3 lc 'black' title 'Q_c / A_0'")
    if refs and m["scenario"].startswith("viscoelastic"):
        t_ref = 0.4 if 0.4 in refs else max(refs)
        curves.append(f"{_q(refs[t_ref])} using 1:4 with lines dt 3 lc 'black' "
                      f"title {_q('asymptotic, ' + _times_label(t_ref))}")
    return ["set xlabel 'x (m)'; set ylabel 'u (m/s)'", "plot " + ", \\\n     ".join(curves)]


def emit_plot_script(run_dir: str | Path) -> str:
    """Return a gnuplot script plotting every run manifest in ``run_dir``.

    Only files present in ``run_dir`` are referenced; the script is meant to
    be executed from inside that directory.
    """
    run_dir = Path(run_dir)
    manifests = sorted(run_dir.glob("*_diagnostics.json"))
    if not manifests:
        raise EmptyRunDirectory(f"no run manifests (*_diagnostics.json) in {run_dir}")
    out = ["# gnuplot script; run from this directory with: gnuplot plot.gp",
           "set terminal pngcairo size 1200,500", "set key outside right", "set grid"]
    for path in manifests:
        m = json.loads(path.read_text(encoding="ascii"))
        present = lambda name: (run_dir / name).is_file()  # noqa: E731
        snaps = [(t, f) for t, f in zip(m["snapshot_times"], m["snapshot_files"]) if present(f)]
        if not snaps:
            continue
        refs = {}
        for f in m.get("reference_files", []):
            if present(f):
                stem = f.rsplit("_t", 1)[1].removesuffix(".csv")
                refs[float(stem)] = f
        layout = m["plot"]["layout"]
        if layout == "rest" and not present(m.get("profile_file", "")):
            layout = "pulse"
        out += ["", f"# {m['scenario']} ({m['source']}, J = {m['cells']})",
                f"set output {_q(m['scenario'] + '_' + m['source'] + '.png')}",
                f"set title {_q(m['scenario'] + ' (' + m['source'] + ')')}"]
        if layout == "rest":
            out += _rest(m, snaps)
        elif layout == "riemann":
            out += _riemann(m, snaps, refs)
        elif layout == "reflection":
            out += _reflection(m, snaps)
        else:
            out += _pulse(m, snaps, refs)
        out.append("unset title")
    return "\n".join(out) + "\n"
