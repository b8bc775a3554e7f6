"""Zones: convex sets of match periods, and subsumption-normalized sets of them.

A match period is a pair (t, t') with t < t'. A zone constrains t, t', and the
duration d = t' - t by six one-sided bounds, each strict or non-strict. The
representation packs every bound into one integer, ``2*value + 1`` when the
bound is inclusive and ``2*value`` when strict, always read as an upper bound
(lower bounds are stored as upper bounds on the negated variable). Sums of
encoded bounds then model constraint chaining: values add, and the chain is
inclusive only when both links are. Tightening is an all-pairs shortest path
over the three nodes {0, t, t'}; composition runs the same closure over four
nodes and projects the shared midpoint away.

Canonical zones (fixed points of ``tighten``) make inclusion testable bound by
bound, which is what ZoneSet normalization relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

Number = Union[int, float]

_ZERO = 1  # encoded "<= 0", the diagonal element
_INF = 1 << 60


def _enc_upper(value: int, strict: bool) -> int:
    return 2 * value + (0 if strict else 1)


def _add(a: int, b: int) -> int:
    if a >= _INF or b >= _INF:
        return _INF
    return ((a >> 1) + (b >> 1)) * 2 + (a & b & 1)


def _satisfies_upper(x: Number, enc: int) -> bool:
    value = enc >> 1
    return x <= value if enc & 1 else x < value


@dataclass(frozen=True)
class Bound:
    """One-sided bound; ``strict`` means the endpoint itself is excluded."""

    value: int
    strict: bool


@dataclass(frozen=True, slots=True)
class Zone:
    """Six encoded bounds; ``ub_*`` caps the variable, ``nl_*`` its negation."""

    ub_b: int  # t  <= ...
    nl_b: int  # -t <= ...
    ub_e: int  # t' <= ...
    nl_e: int
    ub_d: int  # t'-t <= ...
    nl_d: int

    @staticmethod
    def from_bounds(
        b_lo: Bound, b_hi: Bound, e_lo: Bound, e_hi: Bound, d_lo: Bound, d_hi: Bound
    ) -> "Zone":
        """Raw constructor from the six public bounds; not tightened."""
        return Zone(
            ub_b=_enc_upper(b_hi.value, b_hi.strict),
            nl_b=_enc_upper(-b_lo.value, b_lo.strict),
            ub_e=_enc_upper(e_hi.value, e_hi.strict),
            nl_e=_enc_upper(-e_lo.value, e_lo.strict),
            ub_d=_enc_upper(d_hi.value, d_hi.strict),
            nl_d=_enc_upper(-d_lo.value, d_lo.strict),
        )

    @property
    def b_lo(self) -> Bound:
        return Bound(-(self.nl_b >> 1), not (self.nl_b & 1))

    @property
    def b_hi(self) -> Bound:
        return Bound(self.ub_b >> 1, not (self.ub_b & 1))

    @property
    def e_lo(self) -> Bound:
        return Bound(-(self.nl_e >> 1), not (self.nl_e & 1))

    @property
    def e_hi(self) -> Bound:
        return Bound(self.ub_e >> 1, not (self.ub_e & 1))

    @property
    def d_lo(self) -> Bound:
        return Bound(-(self.nl_d >> 1), not (self.nl_d & 1))

    @property
    def d_hi(self) -> Bound:
        return Bound(self.ub_d >> 1, not (self.ub_d & 1))

    def __repr__(self) -> str:
        def side(lo: Bound, hi: Bound, var: str) -> str:
            if lo.value == hi.value and not lo.strict and not hi.strict:
                return f"{var} = {lo.value}"
            left = "<" if lo.strict else "<="
            right = "<" if hi.strict else "<="
            return f"{lo.value} {left} {var} {right} {hi.value}"

        parts = [
            side(self.b_lo, self.b_hi, "t"),
            side(self.e_lo, self.e_hi, "t'"),
            side(self.d_lo, self.d_hi, "t'-t"),
        ]
        return f"Zone({', '.join(parts)})"


def _key(z: Zone) -> tuple[int, int, int, int, int, int]:
    # ascending begin lower bound first; a stable total order for output
    return (-z.nl_b, z.ub_b, -z.nl_e, z.ub_e, -z.nl_d, z.ub_d)


def make_triangle(a: int, b: int) -> Zone:
    """All periods inside the interval (a, b): a <= t < t' <= b.

    The strictness pattern follows from period endpoints being distinct and
    the begin (end) lying strictly before b (after a). Canonical already.
    """
    if a >= b:
        raise ValueError(f"empty interval ({a}, {b})")
    return Zone(
        ub_b=2 * b,
        nl_b=-2 * a + 1,
        ub_e=2 * b + 1,
        nl_e=-2 * a,
        ub_d=2 * (b - a) + 1,
        nl_d=0,
    )


def tighten(z: Optional[Zone]) -> Optional[Zone]:
    """Canonical form, or None when the constraints admit no period."""
    if z is None:
        return None
    m = [
        [_ZERO, z.nl_b, z.nl_e],
        [z.ub_b, _ZERO, z.nl_d],
        [z.ub_e, z.ub_d, _ZERO],
    ]
    for k in range(3):
        mk = m[k]
        for i in range(3):
            mik = m[i][k]
            if mik >= _INF:
                continue
            row = m[i]
            for j in range(3):
                c = _add(mik, mk[j])
                if c < row[j]:
                    row[j] = c
    if m[0][0] < _ZERO or m[1][1] < _ZERO or m[2][2] < _ZERO:
        return None
    return Zone(ub_b=m[1][0], nl_b=m[0][1], ub_e=m[2][0], nl_e=m[0][2], ub_d=m[2][1], nl_d=m[1][2])


def intersect(z1: Optional[Zone], z2: Optional[Zone]) -> Optional[Zone]:
    """Periods in both zones (same t, same t'); None when disjoint."""
    if z1 is None or z2 is None:
        return None
    return tighten(
        Zone(
            ub_b=min(z1.ub_b, z2.ub_b),
            nl_b=min(z1.nl_b, z2.nl_b),
            ub_e=min(z1.ub_e, z2.ub_e),
            nl_e=min(z1.nl_e, z2.nl_e),
            ub_d=min(z1.ub_d, z2.ub_d),
            nl_d=min(z1.nl_d, z2.nl_d),
        )
    )


def compose(z1: Optional[Zone], z2: Optional[Zone]) -> Optional[Zone]:
    """Concatenation step: periods (t, t') split by some s with (t, s) in z1
    and (s, t') in z2. Runs the closure over {0, t, s, t'} and projects s out.
    """
    if z1 is None or z2 is None:
        return None
    # m[i][j] caps x_i - x_j; node order 0, t, s, t'
    m = [
        [_ZERO, z1.nl_b, min(z1.nl_e, z2.nl_b), z2.nl_e],
        [z1.ub_b, _ZERO, z1.nl_d, _INF],
        [min(z1.ub_e, z2.ub_b), z1.ub_d, _ZERO, z2.nl_d],
        [z2.ub_e, _INF, z2.ub_d, _ZERO],
    ]
    for k in range(4):
        mk = m[k]
        for i in range(4):
            mik = m[i][k]
            if mik >= _INF:
                continue
            row = m[i]
            for j in range(4):
                c = _add(mik, mk[j])
                if c < row[j]:
                    row[j] = c
    if m[0][0] < _ZERO or m[1][1] < _ZERO or m[2][2] < _ZERO or m[3][3] < _ZERO:
        return None
    return Zone(ub_b=m[1][0], nl_b=m[0][1], ub_e=m[3][0], nl_e=m[0][3], ub_d=m[3][1], nl_d=m[1][3])


def restrict_duration(z: Optional[Zone], low: int, high: int) -> Optional[Zone]:
    """Keep only periods with low <= t'-t <= high (inclusive both ends)."""
    if low < 0 or low > high:
        raise ValueError("duration bounds must satisfy 0 <= low <= high")
    if z is None:
        return None
    return tighten(
        Zone(
            ub_b=z.ub_b,
            nl_b=z.nl_b,
            ub_e=z.ub_e,
            nl_e=z.nl_e,
            ub_d=min(z.ub_d, 2 * high + 1),
            nl_d=min(z.nl_d, -2 * low + 1),
        )
    )


def includes(z1: Zone, z2: Zone) -> bool:
    """Point-set inclusion z2 subset-of z1; both must be canonical nonempty."""
    return (
        z1.ub_b >= z2.ub_b
        and z1.nl_b >= z2.nl_b
        and z1.ub_e >= z2.ub_e
        and z1.nl_e >= z2.nl_e
        and z1.ub_d >= z2.ub_d
        and z1.nl_d >= z2.nl_d
    )


def contains_point(z: Zone, t: Number, t_prime: Number) -> bool:
    """Whether the period (t, t') satisfies all six bounds. Accepts fractions
    of integers as floats; comparisons stay exact for dyadic rationals."""
    return (
        _satisfies_upper(t, z.ub_b)
        and _satisfies_upper(-t, z.nl_b)
        and _satisfies_upper(t_prime, z.ub_e)
        and _satisfies_upper(-t_prime, z.nl_e)
        and _satisfies_upper(t_prime - t, z.ub_d)
        and _satisfies_upper(t - t_prime, z.nl_d)
    )


def normalize_zones(zones: Iterable[Zone]) -> tuple[Zone, ...]:
    """Drop every zone included in another; stable sorted output.

    Plane sweep along the begin axis: a zone whose begin range ends before the
    current one starts can no longer participate in an inclusion either way,
    so the active set stays small on long behaviors.
    """
    pending = sorted(set(zones), key=_key)
    if len(pending) <= 1:
        return tuple(pending)
    done: list[Zone] = []
    active: list[Zone] = []
    for z in pending:
        still = []
        for a in active:
            if _add(a.ub_b, z.nl_b) < _ZERO:
                done.append(a)
            else:
                still.append(a)
        active = still
        if any(includes(a, z) for a in active):
            continue
        active = [a for a in active if not includes(z, a)]
        active.append(z)
    done.extend(active)
    done.sort(key=_key)
    return tuple(done)


@dataclass(frozen=True)
class ZoneSet:
    """Antichain of canonical zones plus a flag for the zero-length match.

    The flag never becomes an output zone (reported periods have t < t'); it
    exists so concatenation with an empty-matching side behaves as identity.
    """

    zones: tuple[Zone, ...]
    nullable: bool = False

    @staticmethod
    def from_zones(zones: Iterable[Zone], nullable: bool = False) -> "ZoneSet":
        return ZoneSet(normalize_zones(zones), nullable)

    def contains_point(self, t: Number, t_prime: Number) -> bool:
        if self.nullable and t == t_prime:
            return True
        return any(contains_point(z, t, t_prime) for z in self.zones)

    def __len__(self) -> int:
        return len(self.zones)


def union_insert(zs: ZoneSet, z: Zone) -> ZoneSet:
    """Add one canonical zone, keeping the antichain property."""
    for m in zs.zones:
        if includes(m, z):
            return zs
    kept = [m for m in zs.zones if not includes(z, m)]
    kept.append(z)
    kept.sort(key=_key)
    return ZoneSet(tuple(kept), zs.nullable)
