"""Offline matching: the full zone set of a timed regex over a whole behavior.

Structural recursion over the (desugared) expression with memoization on
shared subexpressions. Atoms turn each maximal true interval into one zone;
the combinators mirror the zone algebra. Plus is a least fixpoint bounded by
an iteration cap to keep nontermination impossible by construction.
"""

from __future__ import annotations

from .behavior import TimedBehavior, eval_boolean
from .expr import (
    Atom,
    BooleanExpr,
    Choice,
    Coincide,
    Concat,
    Duration,
    Plus,
    Star,
    TimedRegex,
    desugar,
    nullable,
)
from .zone import (
    Zone,
    ZoneSet,
    _ZERO,
    _add,
    compose,
    includes,
    intersect,
    make_triangle,
    normalize_zones,
    restrict_duration,
)


class FixpointCapError(RuntimeError):
    """Internal invariant failure: the Plus fixpoint did not converge in time."""


def interval_zone(a: int, c: int, left_anchor: bool = False, right_anchor: bool = False) -> Zone:
    """Zone of all match periods of one atom interval (a, c).

    Unanchored: the whole triangle. A left anchor pins t = a (the rising
    edge), a right anchor pins t' = c (the falling edge). All four variants
    are canonical by construction.
    """
    if a >= c:
        raise ValueError(f"empty interval ({a}, {c})")
    if left_anchor and right_anchor:
        return Zone(
            ub_b=2 * a + 1,
            nl_b=-2 * a + 1,
            ub_e=2 * c + 1,
            nl_e=-2 * c + 1,
            ub_d=2 * (c - a) + 1,
            nl_d=-2 * (c - a) + 1,
        )
    if left_anchor:
        return Zone(
            ub_b=2 * a + 1,
            nl_b=-2 * a + 1,
            ub_e=2 * c + 1,
            nl_e=-2 * a,
            ub_d=2 * (c - a) + 1,
            nl_d=0,
        )
    if right_anchor:
        return Zone(
            ub_b=2 * c,
            nl_b=-2 * a + 1,
            ub_e=2 * c + 1,
            nl_e=-2 * c + 1,
            ub_d=2 * (c - a) + 1,
            nl_d=0,
        )
    return make_triangle(a, c)


def match_atom(
    behavior: TimedBehavior,
    expr: BooleanExpr,
    left_anchor: bool = False,
    right_anchor: bool = False,
) -> ZoneSet:
    """Match a single atom: one zone per maximal interval where expr holds.

    The behavior's start counts as a rising edge and its end as a falling
    edge, so maximal intervals always satisfy the anchors at their own
    endpoints. Zones of distinct maximal intervals never subsume each other.
    """
    zones = [
        interval_zone(a, c, left_anchor, right_anchor)
        for a, c in eval_boolean(behavior, expr)
    ]
    return ZoneSet(tuple(zones), False)


def plus_fixpoint(m: ZoneSet, cap: int) -> ZoneSet:
    """Least fixpoint of X -> m union (m compose X), i.e. all nonempty chains.

    Semi-naive: each round composes m only with the zones added last round;
    composing against a subsumed zone cannot add points, so skipping dominated
    zones loses nothing. Raises FixpointCapError after ``cap`` productive
    rounds without convergence.
    """
    current = list(m.zones)
    delta = list(m.zones)
    rounds = 0
    while delta:
        candidates = []
        for z1 in m.zones:
            for z2 in delta:
                if _add(z1.ub_e, z2.nl_b) < _ZERO or _add(z2.ub_b, z1.nl_e) < _ZERO:
                    continue
                c = compose(z1, z2)
                if c is not None:
                    candidates.append(c)
        delta = [
            c
            for c in normalize_zones(candidates)
            if not any(includes(x, c) for x in current)
        ]
        if delta:
            rounds += 1
            if rounds > cap:
                raise FixpointCapError(
                    f"duration-chain fixpoint still growing after {cap} rounds"
                )
        current.extend(delta)
    return ZoneSet(normalize_zones(current), m.nullable)


def _compose_sets(a: ZoneSet, b: ZoneSet, na: bool, nb: bool) -> ZoneSet:
    zones = []
    for z1 in a.zones:
        for z2 in b.zones:
            # quick reject: z1's end range and z2's begin range must meet
            if _add(z1.ub_e, z2.nl_b) < _ZERO or _add(z2.ub_b, z1.nl_e) < _ZERO:
                continue
            c = compose(z1, z2)
            if c is not None:
                zones.append(c)
    if na:
        zones.extend(b.zones)
    if nb:
        zones.extend(a.zones)
    return ZoneSet.from_zones(zones, na and nb)


def match_expr(
    behavior: TimedBehavior, expr: TimedRegex, fixpoint_cap: int | None = None
) -> ZoneSet:
    """Evaluate a desugared expression (no Star nodes) to its zone set."""
    if fixpoint_cap is None:
        # duration restriction inside a repetition can chain within one segment,
        # so the safety margin must cover elapsed time, not just segment count
        fixpoint_cap = len(behavior) + behavior.horizon + 1
    memo: dict[TimedRegex, ZoneSet] = {}

    def go(e: TimedRegex) -> ZoneSet:
        hit = memo.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Atom):
            out = match_atom(behavior, e.expr, e.left_anchor, e.right_anchor)
        elif isinstance(e, Concat):
            out = _compose_sets(go(e.left), go(e.right), nullable(e.left), nullable(e.right))
        elif isinstance(e, Choice):
            a, b = go(e.left), go(e.right)
            out = ZoneSet.from_zones(a.zones + b.zones, a.nullable or b.nullable)
        elif isinstance(e, Coincide):
            a, b = go(e.left), go(e.right)
            zones = []
            for z1 in a.zones:
                for z2 in b.zones:
                    c = intersect(z1, z2)
                    if c is not None:
                        zones.append(c)
            out = ZoneSet.from_zones(zones, a.nullable and b.nullable)
        elif isinstance(e, Duration):
            child = go(e.child)
            zones = []
            for z in child.zones:
                c = restrict_duration(z, e.low, e.high)
                if c is not None:
                    zones.append(c)
            out = ZoneSet.from_zones(zones, child.nullable and e.low == 0)
        elif isinstance(e, Plus):
            child = go(e.child)
            out = plus_fixpoint(ZoneSet(child.zones, False), fixpoint_cap)
            if e.allows_empty or child.nullable:
                out = ZoneSet(out.zones, True)
        elif isinstance(e, Star):
            raise ValueError("Star must be desugared before evaluation")
        else:
            raise TypeError(f"not a timed regex: {e!r}")
        memo[e] = out
        return out

    return go(expr)


def match(
    behavior: TimedBehavior, expr: TimedRegex, fixpoint_cap: int | None = None
) -> ZoneSet:
    """Full offline match; accepts expressions with Star."""
    return match_expr(behavior, desugar(expr), fixpoint_cap)
