from __future__ import annotations

import pytest

import tre_match.offline as offline
from tre_match.behavior import parse_behavior
from tre_match.expr import Atom, Prop, Star, desugar, parse_expr
from tre_match.offline import FixpointCapError, match, match_atom, match_expr
from tre_match.zone import Bound, ZoneSet, make_triangle, restrict_duration

B2 = parse_behavior("(3,pq);(2,q);(2,p)")


def bounds_of(z):
    return (z.b_lo, z.b_hi, z.e_lo, z.e_hi, z.d_lo, z.d_hi)


def test_match_atom_unanchored():
    got = match_atom(B2, Prop("p"))
    assert got.zones == (make_triangle(0, 3), make_triangle(5, 7))
    assert not got.nullable
    assert match_atom(B2, Prop("q")).zones == (make_triangle(0, 5),)
    assert match_atom(B2, Prop("z")).zones == ()


def test_match_atom_anchor_combinations():
    left = match_atom(B2, Prop("p"), left_anchor=True).zones
    assert bounds_of(left[0]) == (
        Bound(0, False), Bound(0, False),
        Bound(0, True), Bound(3, False),
        Bound(0, True), Bound(3, False),
    )
    assert left[1].b_lo == left[1].b_hi == Bound(5, False)

    right = match_atom(B2, Prop("p"), right_anchor=True).zones
    assert bounds_of(right[0]) == (
        Bound(0, False), Bound(3, True),
        Bound(3, False), Bound(3, False),
        Bound(0, True), Bound(3, False),
    )
    assert right[1].e_lo == right[1].e_hi == Bound(7, False)

    both = match_atom(B2, Prop("p"), left_anchor=True, right_anchor=True).zones
    assert [(z.b_lo, z.e_lo) for z in both] == [
        (Bound(0, False), Bound(3, False)),
        (Bound(5, False), Bound(7, False)),
    ]
    assert all(z.b_lo == z.b_hi and z.e_lo == z.e_hi for z in both)


def test_match_atom_boolean_combination():
    assert match_atom(B2, parse_expr("p&&q").expr).zones == (make_triangle(0, 3),)
    assert match_atom(B2, parse_expr("p||q").expr).zones == (make_triangle(0, 7),)
    assert match_atom(B2, parse_expr("!p").expr).zones == (make_triangle(3, 5),)


def test_concat():
    got = match(B2, parse_expr("p;q"))
    assert [bounds_of(z) for z in got.zones] == [(
        Bound(0, False), Bound(3, True),
        Bound(0, True), Bound(5, False),
        Bound(0, True), Bound(5, False),
    )]

    got = match(B2, parse_expr("q;p"))
    assert got.zones[0] == make_triangle(0, 3)
    assert bounds_of(got.zones[1]) == (
        Bound(0, False), Bound(5, True),
        Bound(5, True), Bound(7, False),
        Bound(0, True), Bound(7, False),
    )


def test_coincide():
    got = match(B2, parse_expr("(<:q)&(p;q)"))
    assert [bounds_of(z) for z in got.zones] == [(
        Bound(0, False), Bound(0, False),
        Bound(0, True), Bound(5, False),
        Bound(0, True), Bound(5, False),
    )]
    assert match(B2, parse_expr("p&(!p)")).zones == ()


def test_duration():
    got = match(B2, parse_expr("q%(4,4)"))
    assert [bounds_of(z) for z in got.zones] == [(
        Bound(0, False), Bound(1, False),
        Bound(4, False), Bound(5, False),
        Bound(4, False), Bound(4, False),
    )]
    got = match(B2, parse_expr("(p|q)%(3,3)"))
    assert [bounds_of(z) for z in got.zones] == [(
        Bound(0, False), Bound(2, False),
        Bound(3, False), Bound(5, False),
        Bound(3, False), Bound(3, False),
    )]
    assert match(B2, parse_expr("q%(6,9)")).zones == ()


def test_choice_deduplicates():
    assert match(B2, parse_expr("p|p")).zones == match(B2, parse_expr("p")).zones
    assert match(B2, parse_expr("p|q")).zones == (make_triangle(0, 5), make_triangle(5, 7))


def test_plus_unit_duration_chains():
    b = parse_behavior("(3,p)")
    got = match(b, parse_expr("(p%(1,1))+"))
    tri = make_triangle(0, 3)
    assert got.zones == (
        restrict_duration(tri, 3, 3),
        restrict_duration(tri, 2, 2),
        restrict_duration(tri, 1, 1),
    )


def test_plus_chain_depth_exceeds_segment_count():
    # nine chained unit durations inside a single segment must converge
    b = parse_behavior("(9,p)")
    got = match(b, parse_expr("(p%(1,1))+"))
    assert len(got.zones) == 9
    assert {(-(z.nl_d >> 1), z.ub_d >> 1) for z in got.zones} == {
        (k, k) for k in range(1, 10)
    }


def test_fixpoint_cap_trips():
    b = parse_behavior("(9,p)")
    with pytest.raises(FixpointCapError):
        match(b, parse_expr("(p%(1,1))+"), fixpoint_cap=1)
    match(b, parse_expr("(p%(1,1))+"), fixpoint_cap=9)


def test_plus_of_plain_prop_adds_nothing():
    # p already matches any sub-interval of a maximal interval
    assert match(B2, parse_expr("p+")).zones == match(B2, parse_expr("p")).zones


def test_star_matches_like_plus_but_nullable():
    plus = match(B2, parse_expr("(p;q)+"))
    star = match(B2, parse_expr("(p;q)*"))
    assert star.zones == plus.zones
    assert star.nullable and not plus.nullable


def test_match_expr_rejects_sugar():
    with pytest.raises(ValueError):
        match_expr(B2, Star(Atom(Prop("p"))))
    assert match_expr(B2, desugar(Star(Atom(Prop("p"))))).nullable


def test_subexpressions_evaluated_once(monkeypatch):
    calls = []
    real = offline.match_atom

    def counting(behavior, expr, left_anchor=False, right_anchor=False):
        calls.append(expr)
        return real(behavior, expr, left_anchor, right_anchor)

    monkeypatch.setattr(offline, "match_atom", counting)
    match(B2, parse_expr("(p;q)|(p;q)"))
    assert len(calls) == 2


def test_empty_behavior_matches_nothing():
    empty = parse_behavior("")
    assert len(empty) == 0
    assert match(empty, parse_expr("p*")).zones == ()
    assert match(empty, parse_expr("p*")).nullable
