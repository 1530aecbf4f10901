"""Fréchet distance for polygonal curves with long edges.

Greedy linear-time decision, near-linear exact optimization, a
sqrt(d)-approximation and a planar prefix-query index, all checked
against a quadratic free-space oracle.
"""

from fle.geometry import (
    TAU,
    DomainError,
    PolygonalCurve,
    Segment,
    ball_segment_interval,
    dist_point_segment,
    eval_at,
    frechet_curve_to_point,
    is_e_eps_monotone,
    subcurve,
)
from fle.freespace import (
    decide_alt_godau,
    enumerate_all_critical_values,
    exact_frechet,
    longest_eps_prefix_row,
)
from fle.greedy import (
    Decision,
    EdgeLengthMode,
    MatchingWitness,
    PreconditionError,
    check_preconditions,
    decide_greedy,
    fig8_counterexample_search,
)
from fle.optimize import (
    ABOVE_THRESHOLD,
    DONT_KNOW,
    AssumptionViolated,
    approximate,
    critical_values_restricted,
    epsilon0_approx,
    epsilon0_opt,
    minimum_prefix,
    optimize,
)
from fle.query import (
    QueryIndex,
    QueryStats,
    build_index,
    cylinder_intersection,
    decide_query,
    first_intersection,
    last_intersection,
    longest_eps_prefix_query,
    longest_monotone_prefix,
)
from fle.generate import GenSpec, gen_long_edge_pair, gen_refined_pair, random_walk
from fle.curveio import CurveParseError, format_curve, parse_curve, parse_curve_text, write_curve

__all__ = [
    "TAU",
    "DomainError",
    "PolygonalCurve",
    "Segment",
    "ball_segment_interval",
    "dist_point_segment",
    "eval_at",
    "frechet_curve_to_point",
    "is_e_eps_monotone",
    "subcurve",
    "decide_alt_godau",
    "enumerate_all_critical_values",
    "exact_frechet",
    "longest_eps_prefix_row",
    "Decision",
    "EdgeLengthMode",
    "MatchingWitness",
    "PreconditionError",
    "check_preconditions",
    "decide_greedy",
    "fig8_counterexample_search",
    "ABOVE_THRESHOLD",
    "DONT_KNOW",
    "AssumptionViolated",
    "approximate",
    "critical_values_restricted",
    "epsilon0_approx",
    "epsilon0_opt",
    "minimum_prefix",
    "optimize",
    "QueryIndex",
    "QueryStats",
    "build_index",
    "cylinder_intersection",
    "decide_query",
    "first_intersection",
    "last_intersection",
    "longest_eps_prefix_query",
    "longest_monotone_prefix",
    "GenSpec",
    "gen_long_edge_pair",
    "gen_refined_pair",
    "random_walk",
    "CurveParseError",
    "format_curve",
    "parse_curve",
    "parse_curve_text",
    "write_curve",
]

__version__ = "0.1.0"
