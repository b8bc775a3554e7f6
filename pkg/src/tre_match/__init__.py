"""Timed pattern matching: timed regular expressions over piecewise-constant
Boolean behaviors, with matches reported as unions of two-dimensional zones."""

from .behavior import (
    BehaviorSyntaxError,
    Segment,
    TimedBehavior,
    eval_boolean,
    parse_behavior,
    segment,
    serialize_behavior,
)
from .expr import (
    And,
    Atom,
    Choice,
    Coincide,
    Concat,
    Duration,
    ExprSyntaxError,
    Not,
    Or,
    Plus,
    Prop,
    Star,
    desugar,
    nullable,
    parse_expr,
    to_text,
)
from .offline import FixpointCapError, match, match_atom, match_expr
from .online import Emission, Engine, EngineClosedError, new_engine
from .zone import (
    Zone,
    ZoneSet,
    compose,
    includes,
    intersect,
    make_triangle,
    normalize_zones,
    restrict_duration,
    tighten,
)

__all__ = [
    "And",
    "Atom",
    "BehaviorSyntaxError",
    "Choice",
    "Coincide",
    "Concat",
    "Duration",
    "Emission",
    "Engine",
    "EngineClosedError",
    "ExprSyntaxError",
    "FixpointCapError",
    "Not",
    "Or",
    "Plus",
    "Prop",
    "Segment",
    "Star",
    "TimedBehavior",
    "Zone",
    "ZoneSet",
    "compose",
    "desugar",
    "eval_boolean",
    "includes",
    "intersect",
    "make_triangle",
    "match",
    "match_atom",
    "match_expr",
    "new_engine",
    "normalize_zones",
    "nullable",
    "parse_behavior",
    "parse_expr",
    "restrict_duration",
    "segment",
    "serialize_behavior",
    "tighten",
    "to_text",
]

__version__ = "0.1.0"
