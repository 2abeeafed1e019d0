import json

import pytest

from wbblood.cli import EXIT_CONFIG, EXIT_IO, EXIT_OK, EXIT_POSITIVITY, main, packaged_scenarios
from wbblood.state import PositivityError


def test_scenarios_list(capsys):
    assert main(["scenarios", "list"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in packaged_scenarios():
        assert name in out


def test_run_with_overrides(tmp_path, capsys):
    code = main(["run", "tourniquet", "--source", "centered", "--cells", "40", "--out", str(tmp_path)])
    assert code == EXIT_OK
    manifest = json.loads((tmp_path / "tourniquet_diagnostics.json").read_text())
    assert manifest["source"] == "centered" and manifest["cells"] == 40
    assert (tmp_path / "tourniquet_t0.005.csv").is_file()
    assert "wrote 2 snapshot(s)" in capsys.readouterr().out


def test_run_config_path(tmp_path):
    path = packaged_scenarios()["tourniquet"]
    assert main(["run", str(path), "--out", str(tmp_path)]) == EXIT_OK


def test_plot_after_run(tmp_path):
    assert main(["run", "tourniquet", "--out", str(tmp_path)]) == EXIT_OK
    assert main(["plot", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "plot.gp").read_text().startswith("# gnuplot")


def test_converge(capsys):
    assert main(["converge", "tourniquet", "--cells", "50,100"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3 and lines[2].split()[0] == "100"


@pytest.mark.parametrize("argv", [
    ["run", "no-such-scenario"],
    ["run", "tourniquet", "--cells", "0"],
    ["run", "tourniquet", "--source", "sideways"],
    ["converge", "dead-man", "--cells", "50"],
    ["converge", "tourniquet", "--cells", "10,x"],
    ["frobnicate"],
    [],
])
def test_config_errors_exit_2(argv, tmp_path, capsys):
    assert main(argv + (["--out", str(tmp_path)] if argv[:1] == ["run"] and len(argv) == 2 else [])) == EXIT_CONFIG


def test_bad_config_file_exit_2(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[scenario]\nschema = 9\n")
    assert main(["run", str(bad), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_positivity_exit_3(monkeypatch, tmp_path, capsys):
    import wbblood.runner as runner

    def failing(*args, **kwargs):
        raise PositivityError(3, 1e-4, -1e-12)

    monkeypatch.setattr(runner, "advance", failing)
    assert main(["run", "tourniquet", "--out", str(tmp_path)]) == EXIT_POSITIVITY
    assert "partial output" in capsys.readouterr().err
    assert (tmp_path / "tourniquet_diagnostics.json").is_file()


def test_io_errors_exit_4(tmp_path):
    assert main(["plot", str(tmp_path)]) == EXIT_IO
    assert main(["plot", str(tmp_path / "absent")]) == EXIT_IO
    assert main(["run", str(tmp_path / "absent.ini")]) == EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["run", "tourniquet", "--out", str(blocker)]) == EXIT_IO


def test_help_exits_ok(capsys):
    assert main(["--help"]) == EXIT_OK
