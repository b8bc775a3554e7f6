"""Timed behaviors: piecewise-constant Boolean signals over integer durations.

A behavior is a finite sequence of segments ``(duration, props)``. Segment k
spans the half-open slab between boundaries T_k and T_{k+1}, with T_0 = 0 and
each duration a positive integer. Propositions are single ASCII letters; a
proposition not listed in a segment is false there.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .expr import And, BooleanExpr, Not, Or, Prop


class BehaviorSyntaxError(ValueError):
    """Malformed behavior text, with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Segment:
    duration: int
    props: frozenset[str]

    def __post_init__(self):
        if not isinstance(self.duration, int) or self.duration < 1:
            raise ValueError("segment duration must be a positive integer")
        for p in self.props:
            if not (len(p) == 1 and p.isascii() and p.isalpha()):
                raise ValueError(f"proposition must be a single letter, got {p!r}")


def segment(duration: int, props: str = "") -> Segment:
    """Convenience constructor: ``segment(3, "pq")``."""
    return Segment(duration, frozenset(props))


@dataclass(frozen=True)
class TimedBehavior:
    segments: tuple[Segment, ...]

    @cached_property
    def boundaries(self) -> tuple[int, ...]:
        acc = [0]
        for s in self.segments:
            acc.append(acc[-1] + s.duration)
        return tuple(acc)

    @property
    def horizon(self) -> int:
        """Total duration T_n."""
        return self.boundaries[-1]

    def __len__(self) -> int:
        return len(self.segments)


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    column = pos - text.rfind("\n", 0, pos)
    return line, column


def parse_behavior(text: str) -> TimedBehavior:
    """Parse ``(DUR,PROPS)`` segments separated by ';' or newlines."""

    def err(message: str, pos: int):
        line, column = _position(text, pos)
        raise BehaviorSyntaxError(message, line, column)

    segments: list[Segment] = []
    i, n = 0, len(text)
    while True:
        while i < n and (text[i].isspace()):
            i += 1
        if i >= n:
            break
        if text[i] != "(":
            err(f"expected '(' to start a segment, got {text[i]!r}", i)
        i += 1
        dur_start = i
        while i < n and text[i].isdigit():
            i += 1
        if i == dur_start:
            err("expected an integer duration", i if i < n else n - 1)
        duration = int(text[dur_start:i])
        if duration < 1:
            err("duration must be positive", dur_start)
        if i >= n or text[i] != ",":
            err("expected ',' after the duration", min(i, n - 1))
        i += 1
        props_start = i
        while i < n and text[i].isascii() and text[i].isalpha():
            i += 1
        props = frozenset(text[props_start:i])
        if i >= n or text[i] != ")":
            err("expected ')' to close the segment", min(i, n - 1))
        i += 1
        segments.append(Segment(duration, props))
        saw_newline = False
        while i < n and text[i].isspace():
            saw_newline = saw_newline or text[i] == "\n"
            i += 1
        if i < n:
            if text[i] == ";":
                i += 1
            elif not (text[i] == "(" and saw_newline):
                err(f"expected ';' or a newline between segments, got {text[i]!r}", i)
    return TimedBehavior(tuple(segments))


def serialize_behavior(behavior: TimedBehavior) -> str:
    """Inverse of parse_behavior; props are sorted inside each segment."""
    return ";".join(f"({s.duration},{''.join(sorted(s.props))})" for s in behavior.segments)


def holds(expr: BooleanExpr, props: frozenset[str]) -> bool:
    """Evaluate a Boolean expression in one segment's valuation."""
    if isinstance(expr, Prop):
        return expr.name in props
    if isinstance(expr, Not):
        return not holds(expr.operand, props)
    if isinstance(expr, And):
        return holds(expr.left, props) and holds(expr.right, props)
    if isinstance(expr, Or):
        return holds(expr.left, props) or holds(expr.right, props)
    raise TypeError(f"not a Boolean expression: {expr!r}")


def eval_boolean(behavior: TimedBehavior, expr: BooleanExpr) -> list[tuple[int, int]]:
    """Maximal intervals (as boundary pairs) on which ``expr`` holds.

    Adjacent true segments merge; the result is sorted and pairwise disjoint.
    Truth is cached per distinct valuation, so long behaviors over few distinct
    segment valuations evaluate in one pass with a handful of recursions.
    """
    cache: dict[frozenset[str], bool] = {}
    intervals: list[tuple[int, int]] = []
    start = None
    t = 0
    for seg in behavior.segments:
        truth = cache.get(seg.props)
        if truth is None:
            truth = cache[seg.props] = holds(expr, seg.props)
        if truth:
            if start is None:
                start = t
        else:
            if start is not None:
                intervals.append((start, t))
                start = None
        t += seg.duration
    if start is not None:
        intervals.append((start, t))
    return intervals
