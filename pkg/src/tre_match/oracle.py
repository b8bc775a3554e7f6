"""Independent brute-force semantics for testing, plus random generators.

Decides membership of a period (t, t') in the match set of an expression by
dynamic programming over cells of the time lattice, never touching the zone
algebra. The cell decomposition: each axis splits into point cells {k} and
open cells (k, k+1); a pair of open cells additionally splits by how the
fractional parts of t and t' compare (<, =, >). Every constraint the engine
can express has integer constants, so membership is constant on each cell,
and a real-valued concatenation split exists exactly when a cell-level one
does. That makes the procedure exact at every rational point, in particular
on the quarter-integer query grid, and trivially invariant under refining the
query grid.

Matrices are Boolean arrays indexed [begin_cell, end_cell, channel] with
channels 0/1/2 for fractional order <, =, >. Cell i is the point {i//2} when
i is even and the open interval (i//2, i//2+1) when odd.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .behavior import Segment, TimedBehavior, holds
from .expr import (
    And,
    Atom,
    BooleanExpr,
    Choice,
    Coincide,
    Concat,
    Duration,
    Not,
    Or,
    Plus,
    Prop,
    Star,
    TimedRegex,
    desugar,
    nullable,
)

LT, EQ, GT = 0, 1, 2

# composition of fractional orders: channel sets reachable for frac(t) vs
# frac(t') given frac(t) r1 frac(s) and frac(s) r2 frac(t')
_COMP: dict[tuple[int, int], tuple[int, ...]] = {
    (LT, LT): (LT,),
    (LT, EQ): (LT,),
    (EQ, LT): (LT,),
    (EQ, EQ): (EQ,),
    (GT, GT): (GT,),
    (GT, EQ): (GT,),
    (EQ, GT): (GT,),
    (LT, GT): (LT, EQ, GT),
    (GT, LT): (LT, EQ, GT),
}


def _cell_count(horizon: int) -> int:
    return 2 * horizon + 1


@lru_cache(maxsize=32)
def _universe(horizon: int) -> np.ndarray:
    """Realizable (begin_cell, end_cell, channel) triples with t < t'."""
    n = _cell_count(horizon)
    idx = np.arange(n)
    base = idx // 2
    is_point = idx % 2 == 0
    u = np.zeros((n, n, 3), dtype=bool)
    bi = base[:, None]
    bj = base[None, :]
    pi = is_point[:, None]
    pj = is_point[None, :]
    u[:, :, EQ] = (pi & pj & (bi < bj)) | (~pi & ~pj & (bi < bj))
    u[:, :, LT] = (pi & ~pj & (bi <= bj)) | (~pi & ~pj & (bi <= bj))
    u[:, :, GT] = (~pi & pj & (bi < bj)) | (~pi & ~pj & (bi < bj))
    return u


def _unit_truth(behavior: TimedBehavior, expr: BooleanExpr) -> np.ndarray:
    """Truth of expr on each unit slab (k, k+1)."""
    out = np.empty(behavior.horizon, dtype=bool)
    pos = 0
    cache: dict[frozenset[str], bool] = {}
    for seg in behavior.segments:
        truth = cache.get(seg.props)
        if truth is None:
            truth = cache[seg.props] = holds(expr, seg.props)
        out[pos : pos + seg.duration] = truth
        pos += seg.duration
    return out


def _atom_matrix(behavior: TimedBehavior, atom: Atom) -> np.ndarray:
    horizon = behavior.horizon
    n = _cell_count(horizon)
    truth = _unit_truth(behavior, atom.expr)
    # next_false[u]: first unit >= u where the atom is false (horizon if none)
    next_false = np.empty(horizon + 1, dtype=np.int64)
    next_false[horizon] = horizon
    for u in range(horizon - 1, -1, -1):
        next_false[u] = u if not truth[u] else next_false[u + 1]
    idx = np.arange(n)
    first_unit = idx // 2  # first unit slab overlapped by a period starting in the cell
    last_unit = (idx - 1) // 2  # last unit slab overlapped by a period ending in the cell
    span_ok = next_false[first_unit][:, None] > last_unit[None, :]
    m = _universe(horizon) & span_ok[:, :, None]
    if atom.left_anchor:
        # begin must sit on a rising edge: an integer boundary entering truth
        rising = np.zeros(n, dtype=bool)
        for k in range(horizon):
            if truth[k] and (k == 0 or not truth[k - 1]):
                rising[2 * k] = True
        m &= rising[:, None, None]
    if atom.right_anchor:
        falling = np.zeros(n, dtype=bool)
        for k in range(1, horizon + 1):
            if truth[k - 1] and (k == horizon or not truth[k]):
                falling[2 * k] = True
        m &= falling[None, :, None]
    return m


def _join(a: np.ndarray, b: np.ndarray, universe: np.ndarray) -> np.ndarray:
    """Concatenation through a shared positive-length split cell."""
    af = a.astype(np.float32)
    bf = b.astype(np.float32)
    out = np.zeros_like(a)
    for (r1, r2), targets in _COMP.items():
        prod = (af[:, :, r1] @ bf[:, :, r2]) > 0.5
        for r in targets:
            out[:, :, r] |= prod
    return out & universe


def _duration_filter(m: np.ndarray, low: int, high: int, horizon: int) -> np.ndarray:
    # the duration of a cell pair is an integer k (EQ channel) or an open unit
    # interval (k, k+1) / (k-1, k) (LT / GT channels); integer bounds keep or
    # drop each case whole, never splitting a cell
    n = _cell_count(horizon)
    base = np.arange(n) // 2
    k = base[None, :] - base[:, None]
    keep = np.zeros((n, n, 3), dtype=bool)
    keep[:, :, EQ] = (low <= k) & (k <= high)
    keep[:, :, LT] = (low <= k) & (k + 1 <= high)
    keep[:, :, GT] = (low <= k - 1) & (k <= high)
    return m & keep


def _cell_matrix(behavior: TimedBehavior, expr: TimedRegex) -> np.ndarray:
    horizon = behavior.horizon
    universe = _universe(horizon)
    memo: dict[TimedRegex, np.ndarray] = {}

    def go(e: TimedRegex) -> np.ndarray:
        hit = memo.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Atom):
            out = _atom_matrix(behavior, e)
        elif isinstance(e, Choice):
            out = go(e.left) | go(e.right)
        elif isinstance(e, Coincide):
            out = go(e.left) & go(e.right)
        elif isinstance(e, Concat):
            a, b = go(e.left), go(e.right)
            out = _join(a, b, universe)
            if nullable(e.left):
                out = out | b
            if nullable(e.right):
                out = out | a
        elif isinstance(e, Duration):
            out = _duration_filter(go(e.child), e.low, e.high, horizon)
        elif isinstance(e, Plus):
            p = go(e.child)
            for _ in range(64):
                grown = p | _join(p, p, universe)
                if np.array_equal(grown, p):
                    break
                p = grown
            else:
                raise AssertionError("cell closure did not converge")
            out = p
        else:
            raise TypeError(f"not a desugared timed regex: {e!r}")
        memo[e] = out
        return out

    return go(desugar(expr))


@lru_cache(maxsize=32)
def oracle_cell_matrix(behavior: TimedBehavior, expr: TimedRegex) -> np.ndarray:
    """Full membership matrix over cells; read-only (test bulk comparisons)."""
    m = _cell_matrix(behavior, expr)
    m.flags.writeable = False
    return m


def _to_cell(x: Fraction) -> tuple[int, Fraction]:
    whole = x.numerator // x.denominator
    frac = x - whole
    return (2 * whole if frac == 0 else 2 * whole + 1), frac


def oracle_matches(
    behavior: TimedBehavior,
    expr: TimedRegex,
    point: tuple[float | Fraction | int, float | Fraction | int],
    denominator: int = 4,
) -> bool:
    """Membership of the period ``point`` in the match set of ``expr``.

    The point must lie on the grid of the given denominator (4 by default, 8
    for refinement checks) within the behavior's horizon. Decisions do not
    depend on the denominator; it only validates the query.
    """
    t, t_prime = Fraction(point[0]), Fraction(point[1])
    if denominator % t.denominator or denominator % t_prime.denominator:
        raise ValueError(f"point {point} is off the 1/{denominator} grid")
    if not (0 <= t < t_prime <= behavior.horizon):
        raise ValueError(f"point {point} outside the horizon")
    ci, ft = _to_cell(t)
    cj, fe = _to_cell(t_prime)
    channel = LT if ft < fe else EQ if ft == fe else GT
    return bool(oracle_cell_matrix(behavior, expr)[ci, cj, channel])


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def random_behavior(
    seed: int, max_segments: int, max_duration: int, alphabet_size: int
) -> TimedBehavior:
    """Reproducible random behavior; each proposition present with chance 1/2."""
    if min(max_segments, max_duration, alphabet_size) < 1:
        raise ValueError("parameters must be >= 1")
    rng = random.Random(seed)
    letters = _LETTERS[:alphabet_size]
    segments = []
    for _ in range(rng.randint(1, max_segments)):
        props = frozenset(c for c in letters if rng.random() < 0.5)
        segments.append(Segment(rng.randint(1, max_duration), props))
    return TimedBehavior(tuple(segments))


def _random_bool(rng: random.Random, letters: str, depth: int) -> BooleanExpr:
    if depth <= 1 or rng.random() < 0.5:
        return Prop(rng.choice(letters))
    kind = rng.randrange(3)
    if kind == 0:
        return Not(_random_bool(rng, letters, depth - 1))
    left = _random_bool(rng, letters, depth - 1)
    right = _random_bool(rng, letters, depth - 1)
    return And(left, right) if kind == 1 else Or(left, right)


def random_expr(seed: int, max_depth: int, alphabet_size: int) -> TimedRegex:
    """Reproducible random expression with node kinds drawn uniformly."""
    if max_depth < 1 or alphabet_size < 1:
        raise ValueError("parameters must be >= 1")
    rng = random.Random(seed)
    letters = _LETTERS[:alphabet_size]

    def atom() -> Atom:
        return Atom(
            _random_bool(rng, letters, 2),
            left_anchor=rng.random() < 0.25,
            right_anchor=rng.random() < 0.25,
        )

    def gen(depth: int) -> TimedRegex:
        if depth <= 1:
            return atom()
        kind = rng.randrange(7)
        if kind == 0:
            return atom()
        if kind == 1:
            return Concat(gen(depth - 1), gen(depth - 1))
        if kind == 2:
            return Choice(gen(depth - 1), gen(depth - 1))
        if kind == 3:
            return Coincide(gen(depth - 1), gen(depth - 1))
        if kind == 4:
            low = rng.randint(0, 12)
            return Duration(gen(depth - 1), low, rng.randint(low, 12))
        if kind == 5:
            return Star(gen(depth - 1))
        return Plus(gen(depth - 1))

    return gen(max_depth)
