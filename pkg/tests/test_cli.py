from __future__ import annotations

import subprocess
import sys

import pytest

from tre_match.behavior import parse_behavior
from tre_match.cli import zone_from_csv, zone_to_csv
from tre_match.offline import match
from tre_match.expr import parse_expr

SECTION_BEHAVIOR = "(3,pq);(2,q);(2,p)"
CSV_HEADER = (
    "bmin,bmin_strict,bmax,bmax_strict,emin,emin_strict,"
    "emax,emax_strict,dmin,dmin_strict,dmax,dmax_strict"
)


def run_cli(*args, stdin=""):
    return subprocess.run(
        [sys.executable, "-m", "tre_match.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=120,
    )


def test_offline_csv_golden():
    r = run_cli("-e", "p", "--format", "csv", stdin=SECTION_BEHAVIOR)
    assert r.returncode == 0
    assert r.stdout == (
        CSV_HEADER + "\n"
        "0,0,3,1,0,1,3,0,0,1,3,0\n"
        "5,0,7,1,5,1,7,0,0,1,2,0\n"
    )
    r = run_cli("-e", "q", "--format", "csv", stdin=SECTION_BEHAVIOR)
    assert r.stdout == CSV_HEADER + "\n" + "0,0,5,1,0,1,5,0,0,1,5,0\n"


def test_offline_human_golden():
    r = run_cli("-e", "q;p", stdin=SECTION_BEHAVIOR)
    assert r.returncode == 0
    assert r.stdout == (
        "0 <= t < 3, 0 < t' <= 3, 0 < t'-t <= 3\n"
        "0 <= t < 5, 5 < t' <= 7, 0 < t'-t <= 7\n"
    )


def test_zero_matches_prints_nothing():
    for fmt in ("human", "csv"):
        r = run_cli("-e", "z", "--format", fmt, stdin=SECTION_BEHAVIOR)
        assert r.returncode == 0
        assert r.stdout == ""


def test_file_argument(tmp_path):
    f = tmp_path / "b.txt"
    f.write_text(SECTION_BEHAVIOR)
    r = run_cli("-e", "p", str(f))
    assert r.returncode == 0
    assert "0 <= t < 3" in r.stdout
    missing = run_cli("-e", "p", str(tmp_path / "nope.txt"))
    assert missing.returncode == 2


def test_expression_error_exit_1():
    r = run_cli("-e", "p;;q", stdin=SECTION_BEHAVIOR)
    assert r.returncode == 1
    assert r.stdout == ""
    assert r.stderr.startswith("tre-match: expression error:")
    assert "column 3" in r.stderr


def test_behavior_error_exit_2():
    r = run_cli("-e", "p", stdin="(3,p);;(2,q)")
    assert r.returncode == 2
    assert r.stderr.startswith("tre-match: behavior error:")


def test_fixpoint_cap_exit_3():
    r = run_cli("-e", "(p%(1,1))+", "--fixpoint-cap", "3", stdin="(9,p)")
    assert r.returncode == 3
    assert r.stderr.startswith("tre-match: resource limit:")
    ok = run_cli("-e", "(p%(1,1))+", stdin="(9,p)")
    assert ok.returncode == 0
    assert len(ok.stdout.splitlines()) == 9


def test_stats_go_to_stderr():
    r = run_cli("-e", "p", "--stats", stdin=SECTION_BEHAVIOR)
    assert r.returncode == 0
    assert "segments=3 zones=2 wall=" in r.stderr
    assert "wall=" not in r.stdout


def test_sort_orders_rows():
    r = run_cli("-e", "p|q", "--format", "csv", "--sort", stdin=SECTION_BEHAVIOR)
    rows = r.stdout.splitlines()[1:]
    parsed = [tuple(int(x) for x in row.split(",")) for row in rows]
    assert parsed == sorted(parsed)


def test_csv_round_trip():
    behavior = parse_behavior(SECTION_BEHAVIOR)
    for expr in ("p", "q;p", "(p%(1,1))+", "<:p:>"):
        zones = match(behavior, parse_expr(expr)).zones
        assert tuple(zone_from_csv(zone_to_csv(z)) for z in zones) == zones


def test_online_emissions_and_sentinel():
    stdin = "(3,pq)\n(2,q)\n.\nthis line is never read\n"
    r = run_cli("-e", "p", "--online", "--format", "csv", stdin=stdin)
    assert r.returncode == 0
    assert r.stdout == CSV_HEADER + "\n" + "0,0,3,1,0,1,3,0,0,1,3,0\n"


def test_online_blank_lines_and_eof_flush():
    stdin = "(3,pq)\n\n2,q\n2,p\n"
    r = run_cli("-e", "q:>", "--online", "--format", "csv", stdin=stdin)
    assert r.returncode == 0
    assert r.stdout == CSV_HEADER + "\n" + "0,0,5,1,5,0,5,0,0,1,5,0\n"


def test_online_empty_input():
    r = run_cli("-e", "p", "--online", stdin="")
    assert r.returncode == 0
    assert r.stdout == ""


def test_online_bad_segment_line():
    r = run_cli("-e", "p", "--online", stdin="(3,p)\nnot a segment\n")
    assert r.returncode == 2
    assert r.stderr.startswith("tre-match: behavior error:")


def test_online_cumulative_equals_offline():
    behavior = parse_behavior(SECTION_BEHAVIOR)
    stdin = "(3,pq)\n(2,q)\n(2,p)\n"
    for expr in ("p;q", "q;p", "(p|q)%(3,3)"):
        r = run_cli("-e", expr, "--online", "--format", "csv", stdin=stdin)
        assert r.returncode == 0
        lines = [l for l in r.stdout.splitlines() if l and l != CSV_HEADER]
        got = {zone_from_csv(l) for l in lines}
        want = set(match(behavior, parse_expr(expr)).zones)
        # every offline zone was eventually emitted (possibly alongside
        # earlier partial zones it subsumes)
        assert want <= got


def test_missing_expression_flag():
    r = run_cli(stdin=SECTION_BEHAVIOR)
    assert r.returncode == 2
