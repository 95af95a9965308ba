import subprocess
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run(*args):
    return subprocess.run([sys.executable, *map(str, args)], capture_output=True, text=True, timeout=300)


def test_otca_plumbing_on_synthetic_tiles(tmp_path):
    on, off = tmp_path / "on.rle", tmp_path / "off.rle"
    on.write_text("x = 8, y = 8\n" + "8o$" * 7 + "8o!\n")
    off.write_text("x = 8, y = 8\n!\n")
    proc = run(SCRIPTS / "otca_metapixel.py", on, off, "--unit", "16", "--generations", "0")
    # nothing has evolved yet, so the centre still reads OFF
    assert proc.returncode == 1 and "centre tile reads OFF" in proc.stdout
    assert "0 1 1 1 0" in proc.stdout


def test_diag_table_script():
    proc = run(SCRIPTS / "diag_table.py", "--size", "4", "--bound", "30", "-k", "5")
    assert proc.returncode == 0 and "?" in proc.stdout and "halts at step 6" in proc.stdout


def test_classify_sweep_script():
    proc = run(SCRIPTS / "classify_sweep.py", "0", "204", "--trials", "4")
    rows = proc.stdout.splitlines()
    assert rows[1].startswith("0,I") and rows[2].startswith("204,II")


def test_coarse_search_script(tmp_path):
    out = tmp_path / "c.csv"
    proc = run(SCRIPTS / "coarse_search.py", "--out", out)
    assert proc.returncode == 0 and out.read_text().startswith("fine,projection,coarse")
