"""Streaming matcher: feed segments one at a time, emit zones as they confirm.

Cumulative emissions equal the offline result; nothing is ever retracted, and
any match whose end lies at or before the frontier is out within one further
segment (the segment that reveals whether a falling edge existed).

Realization: the expression becomes a DAG of nodes (shared subexpressions
merged), each holding two zone collections. "Settled" zones have both
endpoints confirmed and are kept only where a future composition could still
use them; "extending" zones are certain matches whose end upper bound still
rides the frontier, recomputed on every feed from the open atom intervals.
New settled zones propagate semi-naively (delta against retained partner
sets), Plus keeps its settled set closed under composition, and the root's
candidates are filtered by subsumption against everything already emitted.

Retention is pruned with per-node reach bounds: a lower bound on where any
future zone of a sibling subtree can begin (or end). A settled zone whose end
falls below its partner's begin reach, begin below the partner's end reach,
can never take part in another nonempty composition and is dropped. Pruning
is amortized so feeds stay cheap.

A right-anchored atom is the one place a match can depend on the unseen
future: its zones stay unreported until a segment (or the flush, whose
boundary counts as a falling edge) confirms the edge. Everything else is
emitted the moment it becomes certain, frontier-touching or not.
"""

from __future__ import annotations

from bisect import bisect_left, insort
from dataclasses import dataclass

from .behavior import Segment, holds
from .expr import (
    Atom,
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
from .offline import FixpointCapError, interval_zone
from .zone import (
    Zone,
    ZoneSet,
    _ZERO,
    compose,
    includes,
    intersect,
    normalize_zones,
    restrict_duration,
)

_FAR = 1 << 60


class EngineClosedError(RuntimeError):
    """The stream was already flushed; no further feed or flush is allowed."""


@dataclass(frozen=True)
class Emission:
    """Zones newly confirmed by one feed or flush; treat the stream of
    emissions as a set union (overlap with earlier output is possible)."""

    zones: ZoneSet


class _Node:
    __slots__ = (
        "kind",
        "children",
        "nullable",
        "bool_expr",
        "left_anchor",
        "right_anchor",
        "low",
        "high",
        "allows_empty",
        "consumers",
        "retained",
        "retained_minb",
        "retained_mine",
        "prune_at",
        "delta",
        "x",
        "open_start",
        "reach_begin",
        "reach_end",
    )

    def __init__(self, kind: str, children: list["_Node"], is_nullable: bool):
        self.kind = kind
        self.children = children
        self.nullable = is_nullable
        self.bool_expr = None
        self.left_anchor = False
        self.right_anchor = False
        self.low = 0
        self.high = 0
        self.allows_empty = False
        self.consumers: list[tuple[str, "_Node"]] = []
        self.retained: list[Zone] | None = None
        self.retained_minb = _FAR
        self.retained_mine = _FAR
        self.prune_at = 16
        self.delta: tuple[Zone, ...] = ()
        self.x: tuple[Zone, ...] = ()
        self.open_start: int | None = None
        self.reach_begin = 0
        self.reach_end = 0


def _compose_into(acc: list[Zone], left, right) -> None:
    # reject without composing when z1's end range cannot meet z2's begin range;
    # engine zones never carry infinite bounds, so plain encoded sums suffice
    for z1 in left:
        ub_e1 = z1.ub_e
        nl_e1 = z1.nl_e
        for z2 in right:
            nl_b2 = z2.nl_b
            if ((ub_e1 >> 1) + (nl_b2 >> 1)) * 2 + (ub_e1 & nl_b2 & 1) < _ZERO:
                continue
            ub_b2 = z2.ub_b
            if ((ub_b2 >> 1) + (nl_e1 >> 1)) * 2 + (ub_b2 & nl_e1 & 1) < _ZERO:
                continue
            c = compose(z1, z2)
            if c is not None:
                acc.append(c)


def _intersect_into(acc: list[Zone], left, right) -> None:
    for z1 in left:
        for z2 in right:
            c = intersect(z1, z2)
            if c is not None:
                acc.append(c)


class Engine:
    """One engine per stream; feed and flush must be called sequentially."""

    def __init__(self, expr: TimedRegex, fixpoint_cap: int | None = None):
        if not isinstance(expr, TimedRegex):
            raise TypeError(f"not a timed regex: {expr!r}")
        self._topo: list[_Node] = []
        self._root = self._build(desugar(expr), {})
        self._frontier = 0
        self._fed = 0
        self._closed = False
        self._cap = fixpoint_cap
        self._emitted: list[Zone] = []  # sorted by encoded e_hi, for subsumption
        self._emitted_prune_at = 64

    def _build(self, e: TimedRegex, index: dict[TimedRegex, _Node]) -> _Node:
        hit = index.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Atom):
            node = _Node("atom", [], False)
            node.bool_expr = e.expr
            node.left_anchor = e.left_anchor
            node.right_anchor = e.right_anchor
        elif isinstance(e, (Concat, Choice, Coincide)):
            left = self._build(e.left, index)
            right = self._build(e.right, index)
            kind = {"Concat": "concat", "Choice": "choice", "Coincide": "coincide"}[
                type(e).__name__
            ]
            node = _Node(kind, [left, right], nullable(e))
            if kind == "concat":
                left.consumers.append(("cl", right))
                right.consumers.append(("cr", left))
            elif kind == "coincide":
                left.consumers.append(("co", right))
                right.consumers.append(("co", left))
        elif isinstance(e, Duration):
            child = self._build(e.child, index)
            node = _Node("duration", [child], nullable(e))
            node.low, node.high = e.low, e.high
        elif isinstance(e, Plus):
            child = self._build(e.child, index)
            node = _Node("plus", [child], nullable(e))
            node.allows_empty = e.allows_empty
            node.consumers.append(("ps", child))
        elif isinstance(e, Star):
            raise AssertionError("Star survived desugaring")
        else:
            raise TypeError(f"not a timed regex: {e!r}")
        for n in (node, *node.children):
            if n.consumers and n.retained is None:
                n.retained = []
        index[e] = node
        self._topo.append(node)
        return node

    @property
    def frontier(self) -> int:
        return self._frontier

    @property
    def closed(self) -> bool:
        return self._closed

    def feed(self, segment: Segment) -> Emission:
        if self._closed:
            raise EngineClosedError("stream already flushed")
        if not isinstance(segment, Segment):
            raise TypeError(f"not a segment: {segment!r}")
        self._fed += 1
        return self._step(segment.props, segment.duration)

    def flush(self) -> Emission:
        """End the stream; the frontier becomes a falling edge for every open
        atom interval, releasing whatever waited on it."""
        if self._closed:
            raise EngineClosedError("stream already flushed")
        emission = self._step(None, 0)
        self._closed = True
        return emission

    def state_size(self) -> int:
        """Retained zones plus suppression index; diagnostic only."""
        total = len(self._emitted)
        for n in self._topo:
            if n.retained:
                total += len(n.retained)
        return total

    # one synchronous advance of the whole node DAG

    def _step(self, props: frozenset | None, advance: int) -> Emission:
        t_old = self._frontier
        t_new = t_old + advance
        cap = self._cap if self._cap is not None else self._fed + t_new + 1
        for n in self._topo:
            kind = n.kind
            if kind == "atom":
                self._step_atom(n, props, t_old, t_new)
            elif kind == "choice":
                a, b = n.children
                n.delta = normalize_zones(a.delta + b.delta) if (a.delta or b.delta) else ()
                n.x = normalize_zones(a.x + b.x) if (a.x or b.x) else ()
            elif kind == "concat":
                self._step_concat(n)
            elif kind == "coincide":
                self._step_coincide(n)
            elif kind == "duration":
                (c,) = n.children
                n.delta = self._restrict_all(c.delta, n.low, n.high)
                n.x = self._restrict_all(c.x, n.low, n.high)
            else:
                self._step_plus(n, cap)
        root = self._root
        fresh: list[Zone] = []
        if root.delta or root.x:
            for z in normalize_zones(root.delta + root.x):
                if not self._already_covered(z):
                    fresh.append(z)
        for n in self._topo:
            if n.retained is not None and n.delta:
                n.retained.extend(n.delta)
                for z in n.delta:
                    blo = -(z.nl_b >> 1)
                    elo = -(z.nl_e >> 1)
                    if blo < n.retained_minb:
                        n.retained_minb = blo
                    if elo < n.retained_mine:
                        n.retained_mine = elo
        self._frontier = t_new
        self._update_reach(t_new)
        self._prune()
        for z in fresh:
            insort(self._emitted, z, key=lambda w: w.ub_e)
        return Emission(ZoneSet(tuple(fresh), False))

    def _step_atom(self, n: _Node, props, t_old: int, t_new: int) -> None:
        truth = props is not None and holds(n.bool_expr, props)
        if n.open_start is None:
            n.delta = ()
            if truth:
                n.open_start = t_old
        elif truth:
            n.delta = ()
        else:
            n.delta = (
                interval_zone(n.open_start, t_old, n.left_anchor, n.right_anchor),
            )
            n.open_start = None
        if n.open_start is not None and not n.right_anchor and t_new > n.open_start:
            n.x = (interval_zone(n.open_start, t_new, n.left_anchor, False),)
        else:
            n.x = ()

    def _step_concat(self, n: _Node) -> None:
        a, b = n.children
        sa = a.retained or ()
        sb = b.retained or ()
        out: list[Zone] = []
        if a.delta:
            _compose_into(out, a.delta, sb)
            _compose_into(out, a.delta, b.delta)
        if b.delta:
            _compose_into(out, sa, b.delta)
        if a.nullable and b.delta:
            out.extend(b.delta)
        if b.nullable and a.delta:
            out.extend(a.delta)
        n.delta = normalize_zones(out) if out else ()
        out = []
        if b.x:
            _compose_into(out, sa, b.x)
            _compose_into(out, a.delta, b.x)
            _compose_into(out, a.x, b.x)
        if a.x:
            _compose_into(out, a.x, sb)
            _compose_into(out, a.x, b.delta)
        if a.nullable and b.x:
            out.extend(b.x)
        if b.nullable and a.x:
            out.extend(a.x)
        n.x = normalize_zones(out) if out else ()

    def _step_coincide(self, n: _Node) -> None:
        a, b = n.children
        sa = a.retained or ()
        sb = b.retained or ()
        out: list[Zone] = []
        if a.delta:
            _intersect_into(out, a.delta, sb)
            _intersect_into(out, a.delta, b.delta)
        if b.delta:
            _intersect_into(out, sa, b.delta)
        n.delta = normalize_zones(out) if out else ()
        out = []
        if b.x:
            _intersect_into(out, sa, b.x)
            _intersect_into(out, a.delta, b.x)
            _intersect_into(out, a.x, b.x)
        if a.x:
            _intersect_into(out, a.x, sb)
            _intersect_into(out, a.x, b.delta)
        n.x = normalize_zones(out) if out else ()

    @staticmethod
    def _restrict_all(zones, low: int, high: int):
        if not zones:
            return ()
        out = []
        for z in zones:
            r = restrict_duration(z, low, high)
            if r is not None:
                out.append(r)
        if len(out) <= 1:
            return tuple(out)
        return normalize_zones(out)

    def _step_plus(self, n: _Node, cap: int) -> None:
        (c,) = n.children
        p = n.retained
        if c.delta:
            n.delta = self._chain_delta(p, c.delta, cap)
        else:
            n.delta = ()
        if c.x:
            n.x = self._chain_x(p, n.delta, c.x, cap)
        else:
            n.x = ()

    @staticmethod
    def _chain_delta(p: list[Zone], delta, cap: int) -> tuple[Zone, ...]:
        known = list(p)
        frontier = [z for z in normalize_zones(delta) if not any(includes(k, z) for k in known)]
        added = list(frontier)
        known.extend(frontier)
        rounds = 0
        while frontier:
            rounds += 1
            if rounds > cap:
                raise FixpointCapError(
                    f"streaming duration-chain fixpoint still growing after {cap} rounds"
                )
            cand: list[Zone] = []
            for f in frontier:
                _compose_into(cand, (f,), known)
                _compose_into(cand, known, (f,))
            frontier = [
                z for z in normalize_zones(cand) if not any(includes(k, z) for k in known)
            ]
            added.extend(frontier)
            known.extend(frontier)
        return normalize_zones(added)

    @staticmethod
    def _chain_x(p: list[Zone], new_settled, xs, cap: int) -> tuple[Zone, ...]:
        known = list(p)
        known.extend(new_settled)
        frontier = list(normalize_zones(xs))
        result = list(frontier)
        known.extend(frontier)
        rounds = 0
        while frontier:
            rounds += 1
            if rounds > cap:
                raise FixpointCapError(
                    f"streaming duration-chain fixpoint still growing after {cap} rounds"
                )
            cand: list[Zone] = []
            for f in frontier:
                _compose_into(cand, (f,), known)
                _compose_into(cand, known, (f,))
            frontier = [
                z for z in normalize_zones(cand) if not any(includes(k, z) for k in known)
            ]
            result.extend(frontier)
            known.extend(frontier)
        return normalize_zones(result)

    def _already_covered(self, z: Zone) -> bool:
        idx = bisect_left(self._emitted, z.ub_e, key=lambda w: w.ub_e)
        for w in self._emitted[idx:]:
            if includes(w, z):
                return True
        return False

    def _update_reach(self, t_new: int) -> None:
        for n in self._topo:
            kind = n.kind
            if kind == "atom":
                r = n.open_start if n.open_start is not None else t_new
                n.reach_begin = r
                n.reach_end = r
            elif kind == "choice":
                a, b = n.children
                n.reach_begin = min(a.reach_begin, b.reach_begin)
                n.reach_end = min(a.reach_end, b.reach_end)
            elif kind == "concat":
                a, b = n.children
                rb = a.reach_begin
                if a.retained:
                    rb = min(rb, a.retained_minb)
                if a.nullable:
                    rb = min(rb, b.reach_begin)
                re = b.reach_end
                if b.retained:
                    re = min(re, b.retained_mine)
                if b.nullable:
                    re = min(re, a.reach_end)
                n.reach_begin = rb
                n.reach_end = re
            elif kind == "coincide":
                a, b = n.children
                rb = min(a.reach_begin, b.reach_begin)
                re = min(a.reach_end, b.reach_end)
                if a.retained:
                    rb = min(rb, a.retained_minb)
                    re = min(re, a.retained_mine)
                if b.retained:
                    rb = min(rb, b.retained_minb)
                    re = min(re, b.retained_mine)
                n.reach_begin = rb
                n.reach_end = re
            elif kind == "duration":
                (c,) = n.children
                n.reach_begin = c.reach_begin
                n.reach_end = c.reach_end
            else:
                (c,) = n.children
                rb = c.reach_begin
                re = c.reach_end
                if n.retained:
                    rb = min(rb, n.retained_minb)
                    re = min(re, n.retained_mine)
                n.reach_begin = rb
                n.reach_end = re

    def _keep(self, n: _Node, z: Zone) -> bool:
        e_hi = z.ub_e >> 1
        b_hi = z.ub_b >> 1
        for role, other in n.consumers:
            if role == "cl":
                if e_hi >= other.reach_begin:
                    return True
            elif role == "cr":
                if b_hi >= other.reach_end:
                    return True
            elif role == "co":
                if b_hi >= other.reach_begin and e_hi >= other.reach_end:
                    return True
            else:  # plus keeps its closure while either side can still extend
                if e_hi >= other.reach_begin or b_hi >= other.reach_end:
                    return True
        return False

    def _prune(self) -> None:
        # small lists are filtered every feed so reach bounds never go stale;
        # large ones amortize the pass and renormalize on doubling
        for n in self._topo:
            r = n.retained
            if not r:
                continue
            if len(r) > n.prune_at:
                survivors = [z for z in normalize_zones(r) if self._keep(n, z)]
                n.prune_at = max(16, 2 * len(survivors))
            elif len(r) <= 96:
                survivors = [z for z in r if self._keep(n, z)]
                if len(survivors) == len(r):
                    continue
            else:
                continue
            n.retained = survivors
            n.retained_minb = min((-(z.nl_b >> 1) for z in survivors), default=_FAR)
            n.retained_mine = min((-(z.nl_e >> 1) for z in survivors), default=_FAR)
        emitted = self._emitted
        if len(emitted) > self._emitted_prune_at or (emitted and len(emitted) <= 256):
            floor = self._root.reach_end
            if emitted and (emitted[0].ub_e >> 1) < floor:
                self._emitted = [z for z in emitted if (z.ub_e >> 1) >= floor]
            self._emitted_prune_at = max(64, 2 * len(self._emitted))


def new_engine(expr: TimedRegex, fixpoint_cap: int | None = None) -> Engine:
    """Fresh engine at frontier 0 for the given (not yet desugared) expression."""
    return Engine(expr, fixpoint_cap)
