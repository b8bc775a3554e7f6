from __future__ import annotations

import pytest

from tre_match.behavior import (
    BehaviorSyntaxError,
    Segment,
    TimedBehavior,
    eval_boolean,
    holds,
    parse_behavior,
    segment,
    serialize_behavior,
)
from tre_match.expr import And, Not, Or, Prop
from tre_match.oracle import random_behavior


def test_parse_basic():
    b = parse_behavior("(3,pq);(2,q);(2,p)")
    assert len(b) == 3
    assert b.segments[0] == Segment(3, frozenset("pq"))
    assert b.segments[1] == Segment(2, frozenset("q"))
    assert b.boundaries == (0, 3, 5, 7)
    assert b.horizon == 7


def test_parse_newline_separator():
    b = parse_behavior("(3,pq)\n(2,q)\n\n(2,p)\n")
    assert b.boundaries == (0, 3, 5, 7)


def test_parse_empty_props():
    b = parse_behavior("(4,)")
    assert b.segments[0].props == frozenset()


def test_parse_errors_carry_position():
    with pytest.raises(BehaviorSyntaxError) as ei:
        parse_behavior("(3,p);;(2,q)")
    assert ei.value.line == 1
    assert ei.value.column == 7
    with pytest.raises(BehaviorSyntaxError, match="duration must be positive"):
        parse_behavior("(0,p)")
    with pytest.raises(BehaviorSyntaxError, match="integer duration"):
        parse_behavior("(x,p)")
    with pytest.raises(BehaviorSyntaxError):
        parse_behavior("(3,p)(2,q)")
    with pytest.raises(BehaviorSyntaxError):
        parse_behavior("(3,p3)")
    with pytest.raises(BehaviorSyntaxError):
        parse_behavior("(3,p")
    # a second-line error reports line 2
    with pytest.raises(BehaviorSyntaxError) as ei:
        parse_behavior("(3,p)\n(o,q)")
    assert ei.value.line == 2


def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(0, frozenset("p"))
    with pytest.raises(ValueError):
        Segment(-2, frozenset("p"))
    with pytest.raises(ValueError):
        Segment(1, frozenset({"pq"}))
    with pytest.raises(ValueError):
        Segment(1, frozenset("7"))
    # letters are case-sensitive names; upper case is distinct, not invalid
    assert Segment(1, frozenset("Pp")).props == {"P", "p"}


def test_serialize_round_trip():
    for i in range(200):
        b = random_behavior(i, 12, 5, 3)
        assert parse_behavior(serialize_behavior(b)) == b


def test_holds():
    assert holds(Prop("p"), frozenset("pq"))
    assert not holds(Prop("r"), frozenset("pq"))
    assert holds(Not(Prop("r")), frozenset("pq"))
    assert holds(And(Prop("p"), Prop("q")), frozenset("pq"))
    assert not holds(And(Prop("p"), Prop("r")), frozenset("pq"))
    assert holds(Or(Prop("r"), Prop("q")), frozenset("pq"))


def test_eval_boolean_maximal_intervals():
    b = parse_behavior("(3,pq);(2,q);(2,p)")
    assert eval_boolean(b, Prop("p")) == [(0, 3), (5, 7)]
    assert eval_boolean(b, Prop("q")) == [(0, 5)]
    assert eval_boolean(b, And(Prop("p"), Prop("q"))) == [(0, 3)]
    assert eval_boolean(b, Or(Prop("p"), Prop("q"))) == [(0, 7)]
    assert eval_boolean(b, Not(Prop("p"))) == [(3, 5)]
    assert eval_boolean(b, Prop("z")) == []


def test_eval_boolean_merges_equal_neighbor_segments():
    b = TimedBehavior((segment(2, "p"), segment(3, "p"), segment(1, "")))
    assert eval_boolean(b, Prop("p")) == [(0, 5)]
