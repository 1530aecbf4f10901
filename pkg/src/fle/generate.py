"""Seeded generators for curve pairs with long edges."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from fle.geometry import PolygonalCurve
from fle.greedy import EdgeLengthMode, check_preconditions

MAX_RETRIES = 200


@dataclass(frozen=True)
class GenSpec:
    """Random-walk parameters: edges in ``[min_edge, max_edge]``, heading change at most ``turn_cap``."""

    n: int
    d: int = 2
    min_edge: float = 3.0
    max_edge: float = 6.0
    turn_cap: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if not 0 < self.min_edge <= self.max_edge:
            raise ValueError("need 0 < min_edge <= max_edge")
        if not 0 <= self.turn_cap <= math.pi / 2:
            raise ValueError("turn_cap must lie in [0, pi/2]")


def _unit(rng, d: int) -> np.ndarray:
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _turn(rng, heading: np.ndarray, cap: float) -> np.ndarray:
    """Rotate ``heading`` by an angle in ``[0, cap]`` towards a random direction."""
    d = heading.size
    if d == 1 or cap == 0.0:
        return heading
    ortho = rng.standard_normal(d)
    ortho -= ortho.dot(heading) * heading
    norm = np.linalg.norm(ortho)
    if norm == 0.0:
        return heading
    ortho /= norm
    a = rng.uniform(0.0, cap)
    out = math.cos(a) * heading + math.sin(a) * ortho
    # renormalise, or rounding drift compounds over long walks
    return out / np.linalg.norm(out)


def random_walk(spec: GenSpec, rng=None) -> np.ndarray:
    """Vertex array ``(n, d)`` of a random walk following ``spec``."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    pts = np.empty((spec.n, spec.d))
    pts[0] = 0.0
    heading = _unit(rng, spec.d)
    for i in range(1, spec.n):
        heading = _turn(rng, heading, spec.turn_cap)
        pts[i] = pts[i - 1] + rng.uniform(spec.min_edge, spec.max_edge) * heading
    return pts


def sample_in_ball(rng, d: int, radius: float, count: int) -> np.ndarray:
    dirs = rng.standard_normal((count, d))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return dirs * (radius * rng.uniform(0.0, 1.0, count) ** (1.0 / d))[:, None]


def gen_long_edge_pair(spec_P: GenSpec, spec_Q: GenSpec, eps: float,
                       mode: EdgeLengthMode = EdgeLengthMode.STRICT) -> Tuple[PolygonalCurve, PolygonalCurve]:
    """``P`` is a random walk; ``Q`` picks ``spec_Q.n`` evenly spaced vertices of ``P``
    and moves each by at most ``A``, with ``A`` drawn once per pair from ``[0, 2 eps]``.

    Draws are retried until the pair satisfies ``mode``'s hypotheses and every edge
    of ``Q`` is at least ``spec_Q.min_edge``; ``ValueError`` if that never happens.
    Deterministic in the two seeds.
    """
    if spec_P.d != spec_Q.d:
        raise ValueError("specs disagree on the dimension")
    if spec_Q.n < 2 or spec_Q.n > spec_P.n:
        raise ValueError("need 2 <= spec_Q.n <= spec_P.n")
    rng_p = np.random.default_rng(spec_P.seed)
    rng_q = np.random.default_rng(spec_Q.seed)
    P = PolygonalCurve(random_walk(spec_P, rng_p))
    parr = P.as_array()
    idx = np.rint(np.linspace(0, spec_P.n - 1, spec_Q.n)).astype(int)
    base = parr[idx]
    for _ in range(MAX_RETRIES):
        amp = rng_q.uniform(0.0, 2.0 * eps)
        qarr = base + sample_in_ball(rng_q, spec_Q.d, amp, spec_Q.n)
        lens = np.linalg.norm(np.diff(qarr, axis=0), axis=1)
        if lens.min() < spec_Q.min_edge:
            continue
        Q = PolygonalCurve(qarr)
        if check_preconditions(P, Q, eps, mode):
            return P, Q
    raise ValueError(f"could not generate a pair satisfying {mode.value} at eps={eps}")


def gen_refined_pair(m: int, per_edge: int, eps: float, d: int = 2, seed: int = 0,
                     jitter: float = 0.9, turn_cap: float = 1.2) -> Tuple[PolygonalCurve, PolygonalCurve]:
    """``Q`` is a walk with long edges; ``P`` walks along ``Q`` with ``per_edge`` vertices
    per segment, each displaced sideways by at most ``jitter * eps``.

    ``P``'s edges stay longer than ``2 eps`` and ``Q``'s are far longer than the
    strict bound.  ``delta_F <= jitter * eps``, so ``jitter < 1`` always gives a
    Yes instance; above 1 both verdicts occur.
    """
    if m < 2 or per_edge < 1:
        raise ValueError("need m >= 2 and per_edge >= 1")
    rng = np.random.default_rng(seed)
    # stations move by up to 0.15 spacing, vertices by jitter * eps
    spacing = (2.0 * eps * (1.0 + jitter) + 0.5 * eps) / 0.7
    seg_len = spacing * (per_edge + 1)
    qspec = GenSpec(n=m, d=d, min_edge=seg_len, max_edge=1.5 * seg_len, turn_cap=turn_cap, seed=seed)
    qarr = random_walk(qspec, rng)
    amp = jitter * eps
    pts = [qarr[0] + sample_in_ball(rng, d, amp, 1)[0]]
    for i in range(m - 1):
        a, b = qarr[i], qarr[i + 1]
        # evenly spaced stations, shifted a little, keep P's edges long
        fr = (np.arange(1, per_edge + 1) + rng.uniform(-0.15, 0.15, per_edge)) / (per_edge + 1)
        for f in fr:
            pts.append(a + f * (b - a) + sample_in_ball(rng, d, amp, 1)[0])
        pts.append(b + sample_in_ball(rng, d, amp, 1)[0])
    return PolygonalCurve(np.array(pts)), PolygonalCurve(qarr)
