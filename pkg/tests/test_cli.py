import csv
import math
import subprocess
import sys
from pathlib import Path

import pytest

from navforge.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
PRN01 = str(FIXTURES / "prn01.11n")
START = "2011-06-30T08:00:00"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run(*argv):
    return main([str(a) for a in argv])


def test_parse_rinex(tmp_path):
    out = tmp_path / "r.csv"
    assert run("parse-rinex", PRN01, "-o", out) == 0
    rows = read_csv(out)
    assert len(rows) == 2
    assert float(rows[0]["m0"]) == -1.68422434376
    assert rows[1]["epoch"] == "2011-06-30T04:00:00"


def test_parse_rinex_errors(tmp_path, capsys):
    assert run("parse-rinex", tmp_path / "missing.11n", "-o", tmp_path / "o.csv") == 3
    lines = Path(PRN01).read_text().splitlines()
    lines[9] = lines[9][:30] + "X" + lines[9][31:]
    bad = tmp_path / "bad.11n"
    bad.write_text("\n".join(lines) + "\n")
    assert run("parse-rinex", bad, "-o", tmp_path / "o.csv") == 2
    assert "line 10" in capsys.readouterr().err
    assert not (tmp_path / "o.csv").exists()


def test_extrapolate_identity(tmp_path):
    out = tmp_path / "e.csv"
    assert run("extrapolate", PRN01, "--prn", 1, "--to", "2011-06-28T00:00:00", "-o", out) == 0
    rows = read_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["raan"]) == 1.54255529548
    assert float(rows[0]["t"]) == 172800.0


def test_extrapolate_t1_to_t2_matches_formula(tmp_path):
    out = tmp_path / "e.csv"
    assert run("extrapolate", PRN01, "--prn", 1, "--to", "2011-06-30T04:00:00", "-o", out) == 0
    first, last = read_csv(out)
    # scalar evaluation of the secular-rate formulas for the t1 record
    mu, ae, j2 = 3.986005e14, 6378137.0, 108263e-8
    sqrta, e, i0, dn = 0.515370418167e4, 0.597547087818e-2, 0.958410643916, 0.452626283498e-8
    a = sqrta * sqrta
    p = a * (1 - e * e)
    n = math.sqrt(mu / a**3) + dn
    k = 1.5 * ae**2 * j2 / p**2 * n
    s2 = math.sin(i0) ** 2
    dt = 360000.0 - 172800.0
    raan = 1.54255529548 - k * math.cos(i0) * dt
    argp = 0.148394519733 - k * (2 - 2.5 * s2) * dt
    m = -1.68422434376 + (n - k * (-1 + 1.5 * s2) * (1 - e * e)) * dt
    assert float(last["t"]) == 360000.0
    assert float(last["raan"]) == pytest.approx(raan, abs=1e-12)
    assert float(last["argp"]) == pytest.approx(argp, abs=1e-12)
    assert abs(math.remainder(float(last["m"]) - m, 2 * math.pi)) < 1e-8
    assert float(last["i"]) == pytest.approx(i0 - 0.353586443225e-10 * dt, abs=1e-15)


def test_extrapolate_step_grid(tmp_path):
    out = tmp_path / "e.csv"
    assert run("extrapolate", PRN01, "--prn", 1, "--to", "2011-06-28T04:00:00",
               "--step", 300, "-o", out) == 0
    assert len(read_csv(out)) == 49


def test_extrapolate_from_second_record(tmp_path):
    out = tmp_path / "e.csv"
    assert run("extrapolate", PRN01, "--prn", 1, "--from", "2011-06-30T04:00:00",
               "--to", "2011-06-30T04:00:00", "-o", out) == 0
    assert float(read_csv(out)[0]["m"]) == 0.716100835560


def test_extrapolate_unknown_prn(tmp_path):
    assert run("extrapolate", PRN01, "--prn", 9, "--to", START, "-o", tmp_path / "e.csv") == 4


def test_gen_nav_sizes(tmp_path):
    binary = tmp_path / "nav.bin"
    assert run("gen-nav", PRN01, "--start", START, "--frames", 25, "--format", "bin", "-o", binary) == 0
    assert binary.stat().st_size == 4688
    text = tmp_path / "nav.txt"
    assert run("gen-nav", "--synthetic", "--start", START, "--frames", 1, "-o", text) == 0
    lines = text.read_text().split()
    assert len(lines) == 5 and all(len(l) == 300 and l.startswith("10001011") for l in lines)


def test_gen_nav_overflow_leaves_no_file(tmp_path, capsys):
    out = tmp_path / "nav.txt"
    code = run("gen-nav", "--synthetic", "--start", START, "--frames", 1,
               "--clock-a1", 1e-3, "--t-gps0", 0, "-o", out)
    assert code == 5
    assert "a0" in capsys.readouterr().err
    assert not out.exists()
    assert list(tmp_path.iterdir()) == []


def test_gen_nav_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("gen-nav", PRN01, "--synthetic", "--start", START, "-o", tmp_path / "x")
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run("gen-nav", "--synthetic", "--start", START, "--frames", 0, "-o", tmp_path / "x")
    assert exc.value.code == 1


def test_dop_defaults(tmp_path):
    out = tmp_path / "dop.csv"
    assert run("dop", "-o", out) == 0
    rows = read_csv(out)
    assert len(rows) == 289
    assert all(1.0 <= float(r["pdop"]) <= 6.0 for r in rows)
    assert run("dop", "--step", 0, "-o", out) == 1


def test_constellation_rows(tmp_path):
    out = tmp_path / "c.csv"
    assert run("constellation", "--duration", 600, "-o", out) == 0
    rows = read_csv(out)
    assert len(rows) == 3 * 24
    r = math.sqrt(sum(float(rows[0][k]) ** 2 for k in "xyz"))
    assert abs(r - 26560e3) < 26560e3 * 0.006


def test_outputs_deterministic(tmp_path):
    def pipeline(tag):
        d = tmp_path / tag
        d.mkdir()
        assert run("parse-rinex", PRN01, "-o", d / "r.csv") == 0
        assert run("extrapolate", PRN01, "--prn", 1, "--to", START, "--step", 600, "-o", d / "e.csv") == 0
        assert run("gen-nav", PRN01, "--start", START, "--format", "bin", "-o", d / "n.bin") == 0
        return {p.name: p.read_bytes() for p in d.iterdir()}

    assert pipeline("a") == pipeline("b")


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.csv"
    proc = subprocess.run([sys.executable, "-m", "navforge", "parse-rinex", PRN01, "-o", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(read_csv(out)) == 2
