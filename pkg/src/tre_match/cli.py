"""Command line front end.

Offline mode reads the whole behavior, matches, prints zones. Online mode
reads segments line by line, printing each emission as it happens; a line
containing only "." flushes and stops reading, as does end of input.

Exit codes: 0 success (matches or not), 1 expression error, 2 behavior or
stream error, 3 resource limit (duration-chain fixpoint cap).
"""

from __future__ import annotations

import argparse
import sys
import time

from .behavior import BehaviorSyntaxError, Segment, parse_behavior
from .expr import ExprSyntaxError, parse_expr
from .offline import FixpointCapError, match
from .online import Engine
from .zone import Bound, Zone

_CSV_HEADER = (
    "bmin,bmin_strict,bmax,bmax_strict,"
    "emin,emin_strict,emax,emax_strict,"
    "dmin,dmin_strict,dmax,dmax_strict"
)


def _bound_pair(enc_lo: int, enc_hi: int) -> tuple[int, int, int, int]:
    # encoded upper bounds: low side stored negated, bit set means inclusive
    lo = -(enc_lo >> 1)
    lo_strict = 0 if enc_lo & 1 else 1
    hi = enc_hi >> 1
    hi_strict = 0 if enc_hi & 1 else 1
    return lo, lo_strict, hi, hi_strict


def zone_to_csv(z: Zone) -> str:
    parts: list[int] = []
    parts.extend(_bound_pair(z.nl_b, z.ub_b))
    parts.extend(_bound_pair(z.nl_e, z.ub_e))
    parts.extend(_bound_pair(z.nl_d, z.ub_d))
    return ",".join(str(p) for p in parts)


def zone_from_csv(line: str) -> Zone:
    """Inverse of zone_to_csv, for round-trip checks and downstream tooling."""
    raw = [int(f) for f in line.split(",")]
    if len(raw) != 12:
        raise ValueError(f"expected 12 fields, got {len(raw)}")
    bounds = []
    for i in range(0, 12, 2):
        bounds.append(Bound(raw[i], bool(raw[i + 1])))
    return Zone.from_bounds(*bounds)


def _human_axis(name: str, enc_lo: int, enc_hi: int) -> str:
    lo, lo_strict, hi, hi_strict = _bound_pair(enc_lo, enc_hi)
    if lo == hi and not lo_strict and not hi_strict:
        return f"{name} = {lo}"
    left = "<" if lo_strict else "<="
    right = "<" if hi_strict else "<="
    return f"{lo} {left} {name} {right} {hi}"


def zone_to_human(z: Zone) -> str:
    return ", ".join(
        (
            _human_axis("t", z.nl_b, z.ub_b),
            _human_axis("t'", z.nl_e, z.ub_e),
            _human_axis("t'-t", z.nl_d, z.ub_d),
        )
    )


def _print_zones(zones: tuple[Zone, ...], fmt: str, sort: bool, header_done: list[bool]) -> None:
    if not zones:
        return
    lines = [zone_to_csv(z) for z in zones]
    if sort:
        order = sorted(range(len(lines)), key=lambda i: tuple(int(f) for f in lines[i].split(",")))
    else:
        order = list(range(len(lines)))
    if fmt == "csv":
        if not header_done[0]:
            print(_CSV_HEADER, flush=True)
            header_done[0] = True
        for i in order:
            print(lines[i], flush=True)
    else:
        for i in order:
            print(zone_to_human(zones[i]), flush=True)


def _parse_stream_line(line: str, lineno: int) -> Segment:
    text = line.strip()
    inner = text
    if inner.startswith("(") and inner.endswith(")"):
        inner = inner[1:-1]
    head, sep, tail = inner.partition(",")
    if not sep:
        raise BehaviorSyntaxError("expected 'DUR,PROPS'", lineno, 1)
    head = head.strip()
    if not head.isdigit():
        raise BehaviorSyntaxError(f"expected an integer duration, got {head!r}", lineno, 1)
    duration = int(head)
    if duration == 0:
        raise BehaviorSyntaxError("duration must be positive", lineno, 1)
    props = tail.strip()
    if not all(c.isalpha() and c.islower() for c in props):
        raise BehaviorSyntaxError(f"bad proposition letters {props!r}", lineno, 1)
    return Segment(duration, frozenset(props))


def _run_offline(args, text: str) -> int:
    behavior = parse_behavior(text)
    start = time.perf_counter()
    result = match(behavior, args.expr_parsed, fixpoint_cap=args.fixpoint_cap)
    elapsed = time.perf_counter() - start
    header_done = [False]
    _print_zones(result.zones, args.format, args.sort, header_done)
    if args.stats:
        print(
            f"segments={len(behavior)} zones={len(result.zones)} wall={elapsed:.3f}s",
            file=sys.stderr,
        )
    return 0


def _run_online(args, stream) -> int:
    engine = Engine(args.expr_parsed, fixpoint_cap=args.fixpoint_cap)
    start = time.perf_counter()
    header_done = [False]
    fed = 0
    emitted = 0
    flushed = False
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text:
            continue
        if text == ".":
            flushed = True
            emission = engine.flush()
            zs = emission.zones.zones
            emitted += len(zs)
            _print_zones(zs, args.format, args.sort, header_done)
            break
        segment = _parse_stream_line(text, lineno)
        fed += 1
        emission = engine.feed(segment)
        zs = emission.zones.zones
        emitted += len(zs)
        _print_zones(zs, args.format, args.sort, header_done)
    if not flushed:
        emission = engine.flush()
        zs = emission.zones.zones
        emitted += len(zs)
        _print_zones(zs, args.format, args.sort, header_done)
    elapsed = time.perf_counter() - start
    if args.stats:
        print(f"segments={fed} zones={emitted} wall={elapsed:.3f}s", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tre-match",
        description="Match a timed regular expression against a timed behavior.",
    )
    parser.add_argument("-e", "--expr", required=True, help="pattern to match")
    parser.add_argument("--online", action="store_true", help="stream segments line by line")
    parser.add_argument("--format", choices=("human", "csv"), default="human")
    parser.add_argument("--sort", action="store_true", help="order zones lexicographically")
    parser.add_argument("--stats", action="store_true", help="print counters to stderr")
    parser.add_argument("--fixpoint-cap", type=int, default=None, help=argparse.SUPPRESS)
    parser.add_argument("file", nargs="?", help="behavior file (default: stdin)")
    args = parser.parse_args(argv)

    try:
        args.expr_parsed = parse_expr(args.expr)
    except ExprSyntaxError as err:
        print(f"tre-match: expression error: {err}", file=sys.stderr)
        return 1

    try:
        if args.online:
            if args.file:
                with open(args.file, encoding="utf-8") as handle:
                    return _run_online(args, handle)
            return _run_online(args, sys.stdin)
        if args.file:
            with open(args.file, encoding="utf-8") as handle:
                text = handle.read()
        else:
            text = sys.stdin.read()
        return _run_offline(args, text)
    except BehaviorSyntaxError as err:
        print(f"tre-match: behavior error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"tre-match: {err}", file=sys.stderr)
        return 2
    except FixpointCapError as err:
        print(f"tre-match: resource limit: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
