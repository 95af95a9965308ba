import json

import pytest

from workbench.cli import main
from workbench.config import coerce, env_overrides, parse_config_text

MACHINES = __import__("conftest").DATA / "machines"
PATTERNS = __import__("conftest").DATA / "patterns"


def run_cli(capsys, *argv, environ=None):
    code = main(list(argv), environ=environ or {})
    out = capsys.readouterr()
    return code, out.out, out.err


def test_goedel_commands(capsys):
    assert run_cli(capsys, "goedel", "encode", "0=0")[:2] == (0, "2430\n")
    code, out, _ = run_cli(capsys, "goedel", "decode", "2430")
    assert code == 0 and out.strip() == "0=0"
    code, _, err = run_cli(capsys, "goedel", "decode", "7")
    assert code == 2 and "error" in err


def test_json_report_reproducible(capsys):
    a = json.loads(run_cli(capsys, "goedel", "encode", "0=0", "--format", "json")[1])
    b = json.loads(run_cli(capsys, "goedel", "encode", "0=0", "--format", "json")[1])
    a.pop("timings"), b.pop("timings")
    assert a == b
    assert int(a["result"]["number"]) == 2430
    assert a["config"]["params"]["formula"] == "0=0"
    assert "ring_size" not in a["config"]["params"]


def test_config_layering(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bound = 3\n# comment\n")
    base = ["tm", "run", str(MACHINES / "spin.tm"), "--format", "json"]
    rep = json.loads(run_cli(capsys, *base, "--config", str(cfg))[1])
    assert rep["config"]["params"]["bound"] == 3
    rep = json.loads(run_cli(capsys, *base, "--config", str(cfg), environ={"WORKBENCH_BOUND": "5"})[1])
    assert rep["config"]["params"]["bound"] == 5
    rep = json.loads(run_cli(capsys, *base, "--config", str(cfg), "--bound", "7",
                             environ={"WORKBENCH_BOUND": "5"})[1])
    assert rep["config"]["params"]["bound"] == 7


def test_config_parsing():
    assert parse_config_text("a-b = 1 # x\n\nc=hi") == {"a_b": "1", "c": "hi"}
    with pytest.raises(ValueError):
        parse_config_text("novalue")
    assert env_overrides({"WORKBENCH_STEPS": "9", "OTHER": "1"}) == {"steps": "9"}
    assert coerce("9", 1) == 9 and coerce("true", False) is True and coerce("x", None) == "x"


def test_out_writes_artifacts(tmp_path, capsys):
    code, _, _ = run_cli(capsys, "eca", "run", "90", "--steps", "4", "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["artifacts"] and all((tmp_path / p.split("/")[-1]).exists() for p in report["artifacts"])


def test_eca_commands(capsys):
    code, out, _ = run_cli(capsys, "eca", "run", "90", "--steps", "2")
    assert code == 0 and "#" in out
    code, out, _ = run_cli(capsys, "eca", "classify", "110")
    assert code == 0 and "IV" in out
    code, out, _ = run_cli(capsys, "eca", "detect", "110", "--spatial", "01101001101000", "--bound", "20")
    assert code == 0


def test_tm_commands(capsys):
    code, out, _ = run_cli(capsys, "tm", "cosim", str(MACHINES / "inc.tm"), "--input", "111")
    assert code == 0 and "agree" in out
    code, out, _ = run_cli(capsys, "tm", "run", str(MACHINES / "spin.tm"), "--bound", "0")
    assert code == 0 and "timeout" in out
    code, enc, _ = run_cli(capsys, "tm", "encode", str(MACHINES / "palindrome.tm"))
    assert code == 0 and set(enc.strip()) <= set("01c")
    code, dec, _ = run_cli(capsys, "tm", "decode", enc.strip())
    assert code == 0
    code, _, _ = run_cli(capsys, "tm", "decode", "cccc")
    assert code == 2
    code, out, _ = run_cli(capsys, "tm", "compile-ca", str(MACHINES / "binary_increment.tm"))
    assert code == 0 and "-> @0" in out


def test_tm_decode_stdin(capsys, monkeypatch):
    import io
    from workbench.turing import TuringMachine, encode_tm
    enc = encode_tm(TuringMachine.load(MACHINES / "binary_increment.tm"))
    monkeypatch.setattr("sys.stdin", io.StringIO(enc + "\n"))
    code, out, _ = run_cli(capsys, "tm", "decode", "-")
    assert code == 0
    assert encode_tm(TuringMachine.parse(out)) == enc


def test_missing_file_is_input_error(capsys):
    assert run_cli(capsys, "tm", "run", "/nonexistent.tm")[0] == 2


def test_life_diff(capsys):
    code, out, _ = run_cli(capsys, "life", "run", str(PATTERNS / "rpentomino.rle"), "--steps", "50",
                           "--engine", "naive,quad", "--diff")
    assert code == 0 and "identical" in out


def test_diag_commands(capsys):
    code, out, _ = run_cli(capsys, "diag", "refute", "--candidate", "timeout:10", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["verdict"] == "Contradiction"
    code, out, _ = run_cli(capsys, "diag", "table", "--size", "4", "--bound", "20", "--inverter", "timeout:5")
    assert code == 0 and "?" in out
    assert run_cli(capsys, "diag", "refute", "--candidate", "oracle")[0] == 2


def test_coarse_commands(capsys):
    code, out, _ = run_cli(capsys, "coarse", "verify", "--fine", "105", "--coarse", "150", "--projection", "0110")
    assert code == 0 and "valid" in out.lower()
    code, out, _ = run_cli(capsys, "coarse", "search", "--fine", "105", "--format", "csv")
    assert code == 0 and out.startswith("fine,projection,coarse")
    code, out, _ = run_cli(capsys, "coarse", "verify", "--fine", "110", "--identity")
    assert code == 0
