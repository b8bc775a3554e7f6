from __future__ import annotations

import random

import numpy as np
import pytest

from tre_match import Segment, TimedBehavior
from tre_match.oracle import EQ, GT, LT, _universe, random_behavior, random_expr
from tre_match.zone import Zone

CORPUS_SIZE = 500


@pytest.fixture(scope="session")
def corpus():
    """Shared random behavior/expression pairs used by contract tests."""
    pairs = []
    for i in range(CORPUS_SIZE):
        b = random_behavior(1000 + i, 12, 5, 3)
        e = random_expr(2000 + i, 4, 3)
        pairs.append((b, e))
    return pairs


def rasterize(zones, horizon: int) -> np.ndarray:
    """Cell-level truth of a zone union, on the oracle's lattice.

    Each cell (point or open unit interval per axis, plus a fractional-order
    channel) contains a quarter-grid representative, and zone membership is
    constant across a cell, so checking the representative decides the cell.
    Representatives are evaluated in arithmetic scaled by 4 to stay integral.
    """
    n = 2 * horizon + 1
    base = np.arange(n) // 2 * 4
    odd = (np.arange(n) % 2).astype(bool)
    t4 = np.full((n, n, 3), -1, dtype=np.int64)
    e4 = np.full((n, n, 3), -1, dtype=np.int64)
    valid = np.zeros((n, n, 3), dtype=bool)
    pi = odd[:, None]
    pj = odd[None, :]
    bi = base[:, None]
    bj = base[None, :]
    combos = [
        (~pi & ~pj, EQ, 0, 0),
        (~pi & pj, LT, 0, 2),
        (pi & ~pj, GT, 2, 0),
        (pi & pj, LT, 1, 2),
        (pi & pj, EQ, 2, 2),
        (pi & pj, GT, 2, 1),
    ]
    for mask, ch, dt, de in combos:
        t4[:, :, ch] = np.where(mask, bi + dt, t4[:, :, ch])
        e4[:, :, ch] = np.where(mask, bj + de, e4[:, :, ch])
        valid[:, :, ch] |= mask
    out = np.zeros((n, n, 3), dtype=bool)
    d4 = e4 - t4
    for z in zones:
        m = valid.copy()
        for enc_hi, enc_lo, v4 in (
            (z.ub_b, z.nl_b, t4),
            (z.ub_e, z.nl_e, e4),
            (z.ub_d, z.nl_d, d4),
        ):
            hi = 4 * (enc_hi >> 1) - (0 if enc_hi & 1 else 1)
            lo = -4 * (enc_lo >> 1) + (0 if enc_lo & 1 else 1)
            m &= (v4 <= hi) & (v4 >= lo)
        out |= m
    return out & _universe(horizon)


@pytest.fixture(scope="session")
def cell_raster():
    return rasterize


def scale_zone(z: Zone, k: int) -> Zone:
    def f(enc: int) -> int:
        return (enc >> 1) * k * 2 + (enc & 1)

    return Zone(f(z.ub_b), f(z.nl_b), f(z.ub_e), f(z.nl_e), f(z.ub_d), f(z.nl_d))


def make_sprint_behavior(seed: int = 42, count: int = 5000) -> TimedBehavior:
    """Synthetic workout log: background segments over {p,q,d,e}, interleaved
    with sprint episodes (a g or f lead, then an s/r run whose total duration
    is planted below, inside, or above the pattern bounds). All durations are
    multiples of 250."""
    rng = random.Random(seed)
    segs: list[Segment] = []
    bg = "pqde"

    def bg_props(p: float = 0.4) -> frozenset[str]:
        return frozenset(c for c in bg if rng.random() < p)

    while len(segs) < count:
        if rng.random() < 0.55:
            for _ in range(rng.randint(1, 4)):
                segs.append(Segment(250 * rng.randint(1, 12), bg_props()))
        else:
            roll = rng.random()
            lead = {"g"} if roll < 0.55 else ({"f"} if roll < 0.8 else {"f", "g"})
            segs.append(Segment(250 * rng.randint(1, 12), frozenset(lead) | bg_props(0.3)))
            target = rng.choice(("short", "tight", "mid", "long"))
            lo, hi = {"short": (1, 3), "tight": (4, 8), "mid": (9, 40), "long": (41, 60)}[target]
            budget = 250 * rng.randint(lo, hi)
            while budget > 0:
                d = 250 * rng.randint(1, min(12, budget // 250))
                letter = "s" if rng.random() < 0.8 else "r"
                segs.append(Segment(d, frozenset(letter) | bg_props(0.3)))
                budget -= d
            segs.append(Segment(250 * rng.randint(1, 12), bg_props()))
    return TimedBehavior(tuple(segs[:count]))


@pytest.fixture(scope="session")
def sprint_behavior():
    return make_sprint_behavior()


@pytest.fixture(scope="session")
def sprint_excerpt(sprint_behavior):
    return TimedBehavior(sprint_behavior.segments[100:150])
