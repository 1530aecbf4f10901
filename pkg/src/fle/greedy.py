"""Greedy linear-time decision for curves with long edges.

Walk along ``Q`` one segment at a time and match each segment to the longest
eps-prefix of what is left of ``P``.  Under the long-edge hypotheses this
never commits to a prefix that a valid matching could not extend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from fle.freespace import WorkCounter, _greedy_chain, decide_alt_godau
from fle.geometry import TAU, DomainError, PolygonalCurve


class PreconditionError(ValueError):
    """The edge-length hypotheses of the requested mode do not hold."""


class EdgeLengthMode(enum.Enum):
    """Which long-edge hypothesis backs the verdict.

    STRICT       l_P > 2 eps and l_Q > (1 + sqrt d) eps; Yes iff delta_F <= eps.
    NON_STRICT   the same with >=; Yes implies <=, No implies delta_F >= eps.
    ONE_SIDED    l_Q > 4 eps only; Yes iff delta_F <= eps.
    """

    STRICT = "strict"
    NON_STRICT = "nonstrict"
    ONE_SIDED = "onesided"

    @classmethod
    def parse(cls, name: str) -> "EdgeLengthMode":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown mode {name!r}; expected strict, nonstrict or onesided") from None


@dataclass(frozen=True)
class MatchingWitness:
    """Parameters ``gammas[i]`` on ``P`` matched to vertex ``q_{i+1}`` of ``Q``."""

    gammas: Tuple[float, ...]

    def pieces(self):
        """Pairs ``(gamma_{i-1}, gamma_i)`` paired with Q-segment index ``i`` (1-based start)."""
        g = self.gammas
        return [(g[i - 1], g[i], i) for i in range(1, len(g))]


@dataclass(frozen=True)
class Decision:
    verdict: bool
    witness: Optional[MatchingWitness] = None
    mode: EdgeLengthMode = EdgeLengthMode.STRICT
    work: int = 0

    def __bool__(self) -> bool:
        return self.verdict

    @property
    def meaning(self) -> str:
        """What the verdict certifies about delta_F(P, Q)."""
        if self.verdict:
            return "<= eps"
        return ">= eps" if self.mode is EdgeLengthMode.NON_STRICT else "> eps"


def edge_length_bounds(d: int, mode: EdgeLengthMode) -> Tuple[float, float]:
    """Multipliers ``(a, b)`` with the hypothesis ``l_P ? a*eps`` and ``l_Q ? b*eps``."""
    if mode is EdgeLengthMode.ONE_SIDED:
        return 0.0, 4.0
    return 2.0, 1.0 + math.sqrt(d)


def check_preconditions(P: PolygonalCurve, Q: PolygonalCurve, eps: float, mode: EdgeLengthMode) -> bool:
    if not eps > 0:
        raise DomainError("eps must be positive")
    a, b = edge_length_bounds(P.dim, mode)
    lp, lq = P.min_edge_len, Q.min_edge_len
    if mode is EdgeLengthMode.NON_STRICT:
        # tolerate rounding in equality cases such as l_P = 2 eps exactly
        return lp + TAU >= a * eps and lq + TAU >= b * eps
    if mode is EdgeLengthMode.ONE_SIDED:
        return lp > 0 and lq > b * eps
    return lp > a * eps and lq > b * eps


def greedy_chain(P: PolygonalCurve, Q: PolygonalCurve, eps: float,
                 counter: Optional[WorkCounter] = None) -> Tuple[np.ndarray, int]:
    """Chained longest eps-prefixes; returns ``(gammas, filled)``.

    ``gammas[:filled]`` are valid; ``filled < m`` means segment ``filled`` (0-based
    start vertex) had no prefix.  No preconditions are checked.
    """
    if P.dim != Q.dim:
        raise ValueError("curves live in different dimensions")
    if Q.n < 2:
        raise DomainError("Q needs at least one segment")
    gammas = np.empty(Q.n)
    filled, work = _greedy_chain(P.as_array(), Q.as_array(), float(eps), gammas)
    if counter is not None:
        counter.vertices += work
    return gammas, filled


def decide_greedy(P: PolygonalCurve, Q: PolygonalCurve, eps: float,
                  mode: EdgeLengthMode = EdgeLengthMode.STRICT, *, check: bool = True,
                  counter: Optional[WorkCounter] = None) -> Decision:
    """Greedy decision of ``delta_F(P, Q) <= eps`` in ``O(n + m)``.

    Raises :class:`PreconditionError` when ``check`` is on and the mode's
    hypotheses fail; ``check=False`` runs the same loop regardless (used to
    probe what happens below the thresholds).
    """
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if check and not check_preconditions(P, Q, eps, mode):
        raise PreconditionError(
            f"{mode.value} mode needs longer edges: l_P={P.min_edge_len:.6g}, "
            f"l_Q={Q.min_edge_len:.6g}, eps={eps:.6g}, d={P.dim}")
    local = WorkCounter()
    gammas, filled = greedy_chain(P, Q, eps, local)
    if counter is not None:
        counter.vertices += local.vertices
    if filled < Q.n or gammas[-1] < P.n:
        return Decision(False, None, mode, local.vertices)
    return Decision(True, MatchingWitness(tuple(float(g) for g in gammas)), mode, local.vertices)


# A pair (in units of eps) where the greedy loop overshoots: Q turns back
# sharply at q_2 while P sweeps across B(q_2, eps) and re-enters it, so the
# longest prefix for Q[1,2] ends past the point a valid matching hands on to
# Q[2,3].  delta_F is 0.99 eps, the greedy loop answers No.
SHARP_TURN_P = ((-3.3, -0.4), (-1.3, -0.99), (-0.69, 0.99), (-0.03, -1.11))
SHARP_TURN_Q = ((-2.4, 0.0), (0.0, 0.0), (-1.2, 1.72), (-0.1, -0.4))


def fig8_counterexample_search(eps: float, trials: int, seed: int,
                               jitter: float = 0.05) -> Optional[Tuple[PolygonalCurve, PolygonalCurve]]:
    """Look for a pair where the greedy loop and the exact decision disagree.

    Every edge of both curves has length in ``[2 eps, (1 + sqrt 2) eps]``, so
    ``Q`` is below the strict threshold in the plane.  Odd trials draw two
    free random walks; even trials rotate the sharp-turn configuration above
    and jitter every vertex by up to ``jitter * eps``.  Pairs within ``TAU`` of
    a decision boundary are skipped.
    """
    if not eps > 0:
        raise DomainError("eps must be positive")
    if trials <= 0:
        return None
    rng = np.random.default_rng(seed)
    lo, hi = 2.0 * eps, (1.0 + math.sqrt(2.0)) * eps
    base_p = np.array(SHARP_TURN_P) * eps
    base_q = np.array(SHARP_TURN_Q) * eps
    for trial in range(trials):
        if trial % 2:
            Pa = _walk(rng, int(rng.integers(2, 6)), lo, hi, rng.uniform(-eps, eps, 2))
            Qa = _walk(rng, int(rng.integers(3, 6)), lo, hi, np.zeros(2))
        else:
            phi = rng.uniform(0.0, 2.0 * math.pi)
            rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
            Pa = base_p @ rot.T + rng.uniform(-jitter, jitter, base_p.shape) * eps
            Qa = base_q @ rot.T + rng.uniform(-jitter, jitter, base_q.shape) * eps
        if not (_lengths_within(Pa, lo, hi) and _lengths_within(Qa, lo, hi)):
            continue
        P, Q = PolygonalCurve(Pa), PolygonalCurve(Qa)
        if decide_greedy(P, Q, eps, check=False).verdict == decide_alt_godau(P, Q, eps):
            continue
        if decide_alt_godau(P, Q, eps - 2 * TAU) != decide_alt_godau(P, Q, eps + 2 * TAU):
            continue
        return P, Q
    return None


def _lengths_within(pts: np.ndarray, lo: float, hi: float) -> bool:
    lens = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return bool(lens.min() >= lo and lens.max() <= hi)


def _walk(rng, n, lo, hi, origin):
    pts = [origin]
    heading = rng.uniform(-math.pi, math.pi)
    for _ in range(n - 1):
        heading += rng.uniform(-math.pi, math.pi)
        pts.append(pts[-1] + rng.uniform(lo, hi) * np.array([math.cos(heading), math.sin(heading)]))
    return np.array(pts)
