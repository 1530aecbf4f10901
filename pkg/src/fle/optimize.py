"""Exact optimization and sqrt(d)-approximation for curves with long edges.

``optimize`` binary-searches a linear-size set of candidate values drawn
only from the neighbourhood of the greedy matching at the threshold
``epsilon0_opt``.  ``approximate`` replaces each longest prefix by a minimum
prefix and runs in linear time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from fle.freespace import WorkCounter, longest_eps_prefix_row
from fle.geometry import (
    DomainError,
    PolygonalCurve,
    Segment,
    chord,
    dist_point_segment,
    dot,
    eval_at,
    frechet_curve_to_point,
    is_e_eps_monotone,
    subcurve,
    vsub,
)
from fle.greedy import EdgeLengthMode, MatchingWitness, decide_greedy

MERGE_GAP = 1e-12


class Outcome(enum.Enum):
    """Non-numeric results of the optimizer and the approximation."""

    ABOVE_THRESHOLD = "above-threshold"
    DONT_KNOW = "unknown"

    def __str__(self) -> str:
        return self.value


ABOVE_THRESHOLD = Outcome.ABOVE_THRESHOLD
DONT_KNOW = Outcome.DONT_KNOW


class AssumptionViolated(RuntimeError):
    """A minimum prefix was requested where no long-edge prefix exists."""


@dataclass(frozen=True)
class PrefixOutcome:
    gamma: float
    eps_piece: float


def _need_edges(P: PolygonalCurve, Q: PolygonalCurve) -> None:
    if P.n < 2 or Q.n < 2:
        raise DomainError("both curves need at least one edge")
    if P.dim != Q.dim:
        raise ValueError("curves live in different dimensions")


def epsilon0_opt(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    """Largest eps at which non-strict greedy decisions are still exact."""
    _need_edges(P, Q)
    return min(P.min_edge_len / 2.0, Q.min_edge_len / (1.0 + math.sqrt(P.dim)))


def epsilon0_approx(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    """Threshold below which the approximation band is guaranteed."""
    _need_edges(P, Q)
    d = P.dim
    return min(P.min_edge_len / (2.0 * math.sqrt(d)), Q.min_edge_len / (2.0 * d))


def merge_values(values) -> np.ndarray:
    """Sorted copy with neighbours closer than ``MERGE_GAP`` collapsed."""
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.size == 0:
        return arr
    keep = np.empty(arr.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(arr) >= MERGE_GAP
    return arr[keep]


def first_ball_entry(P: PolygonalCurve, start: float, center, eps: float) -> Optional[float]:
    """First parameter ``>= start`` whose point lies in ``B(center, eps)``."""
    n = P.n
    j = int(start)
    if j >= n:
        return float(n) if math.dist(P.vertices[-1], center) <= eps + 1e-9 else None
    frac = start - j
    while j < n:
        iv = chord(center, P.vertices[j - 1], P.edge_vecs[j - 1], P.edge_sq_lens[j - 1], eps)
        if iv is not None and iv[1] >= frac:
            return j + max(iv[0], frac)
        frac = 0.0
        j += 1
    return None


def critical_values_restricted(P: PolygonalCurve, Q: PolygonalCurve, eps0: float,
                               gammas: MatchingWitness) -> np.ndarray:
    """Candidate values around the greedy matching at ``eps0``, sorted and merged.

    For segment ``Q[i-1, i]`` every vertex of ``P[alpha_{i-1}, gamma_i]`` contributes
    its distance to the segment, plus its distance to ``q_{i-1}`` (``q_i``) when it
    lies within ``eps0`` of that end along the segment direction.  Every edge of
    ``P[alpha_i, gamma_i]`` contributes its distance to ``q_i``.  ``eps0`` is added.
    """
    g = gammas.gammas
    m = Q.n
    if len(g) != m:
        raise ValueError(f"witness has {len(g)} parameters for a curve with {m} vertices")
    out = [eps0]
    alpha_prev = 1.0
    for i in range(2, m + 1):
        seg = Q.edge(i - 1)
        qa, qb = seg.start, seg.end
        g_prev, g_cur = g[i - 2], g[i - 1]
        alpha = first_ball_entry(P, g_prev, qb, eps0)
        if alpha is None or alpha > g_cur + 1e-9:
            raise RuntimeError(f"no entry into B(q_{i}, eps0) after gamma_{i - 1}={g_prev}")
        length = seg.length
        for j in range(math.ceil(alpha_prev), math.floor(g_cur) + 1):
            p = P.vertices[j - 1]
            out.append(dist_point_segment(p, seg))
            along = dot(vsub(p, qa), seg.vec) / length
            if along <= eps0:
                out.append(math.dist(p, qa))
            if along >= length - eps0:
                out.append(math.dist(p, qb))
        last_edge = min(math.ceil(g_cur) - 1, P.n - 1)
        for j in range(max(int(alpha), 1), last_edge + 1):
            out.append(dist_point_segment(qb, P.edge(j)))
        alpha_prev = alpha
    return merge_values(out)


def _pieces_monotone(P: PolygonalCurve, Q: PolygonalCurve, gammas, eps: float) -> bool:
    for a, b, i in gammas.pieces():
        if not is_e_eps_monotone(subcurve(P, a, b), Q.edge(i), eps):
            return False
    return True


def optimize(P: PolygonalCurve, Q: PolygonalCurve) -> Union[float, Outcome]:
    """``delta_F(P, Q)`` when it is below :func:`epsilon0_opt`.

    Returns ``ABOVE_THRESHOLD`` (meaning ``delta_F >= epsilon0_opt``) when the
    greedy decision at the threshold fails.
    """
    eps0 = epsilon0_opt(P, Q)
    mode = EdgeLengthMode.NON_STRICT
    first = decide_greedy(P, Q, eps0, mode, check=False)
    if not first.verdict:
        return ABOVE_THRESHOLD
    if not _pieces_monotone(P, Q, first.witness, eps0):
        return eps0
    values = critical_values_restricted(P, Q, eps0, first.witness)
    lo, hi = 0, int(np.searchsorted(values, eps0, side="right")) - 1
    # values[hi] is eps0 itself, which is known to decide Yes
    while lo < hi:
        mid = (lo + hi) // 2
        if decide_greedy(P, Q, float(values[mid]), mode, check=False).verdict:
            hi = mid
        else:
            lo = mid + 1
    return float(values[hi])


def minimum_prefix(P: PolygonalCurve, e: Segment, start: float = 1.0,
                   shortest_edge: Optional[float] = None,
                   counter: Optional[WorkCounter] = None) -> PrefixOutcome:
    """Longest prefix of ``P[start, n]`` among those closest to ``e``.

    ``shortest_edge`` is the edge-length bound used for the probing radius and
    defaults to ``P.min_edge_len``; when ``P[start, n]`` is a leftover piece of a
    longer curve pass that curve's bound, since the first edge may be partial.
    """
    if P.dim != e.dim:
        raise ValueError("segment and curve live in different dimensions")
    lp = P.min_edge_len if shortest_edge is None else shortest_edge
    probe = min(lp / 2.0, e.length / (2.0 * math.sqrt(P.dim)))
    reach = longest_eps_prefix_row(P, e, probe, start, counter)
    if reach is None:
        raise AssumptionViolated(f"no prefix within {probe:.6g} of the segment from parameter {start}")
    first = eval_at(P, start)
    c = math.dist(first, e.start)
    best = math.inf
    a, edge_start = first, start
    j = int(start) + 1  # vertex closing the current (possibly partial) edge
    # edges starting at or past the probing prefix cannot host the minimum
    while j <= P.n and edge_start < reach:
        b = P.vertices[j - 1]
        best = min(best, max(c, dist_point_segment(e.end, Segment(a, b))))
        c = max(c, dist_point_segment(b, e))
        a, edge_start = b, float(j)
        j += 1
    if best == math.inf:
        best = max(c, math.dist(first, e.end))
    gamma = longest_eps_prefix_row(P, e, best, start, counter)
    if gamma is None:
        raise AssumptionViolated(f"no prefix at the minimum distance {best:.6g}")
    return PrefixOutcome(gamma=gamma, eps_piece=best)


def approximate(P: PolygonalCurve, Q: PolygonalCurve,
                counter: Optional[WorkCounter] = None) -> Union[float, Outcome]:
    """A value in ``[delta_F, sqrt(d) delta_F]`` when ``delta_F <= epsilon0_approx``.

    Returns ``DONT_KNOW`` when the greedy decision at the threshold fails.
    """
    eps0 = epsilon0_approx(P, Q)
    first = decide_greedy(P, Q, eps0, EdgeLengthMode.NON_STRICT, check=False, counter=counter)
    if not first.verdict:
        return DONT_KNOW
    worst = 0.0
    s = 1.0
    for i in range(1, Q.n):
        res = minimum_prefix(P, Q.edge(i), s, P.min_edge_len, counter)
        worst = max(worst, res.eps_piece)
        s = res.gamma
    if s < P.n:
        worst = max(worst, frechet_curve_to_point(subcurve(P, s, P.n), Q.vertices[-1]))
    return worst
