"""Points, segments and polygonal curves with the [1, n] parametrization.

A curve ``P`` with vertices ``p_1..p_n`` is addressed by a real parameter
``t`` in ``[1, n]``: ``P(i + f) = (1 - f) p_i + f p_{i+1}``.  Parameters are
plain floats throughout the package.

Every membership predicate of the form ``|x - y| <= eps`` is evaluated as
``|x - y| <= eps + TAU``.  Positions derived from ``eps`` (chord endpoints and
the like) use the exact radius, so a tangent ball still yields a single-point
interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from operator import mul, sub
from typing import Optional, Sequence, Tuple

Point = Tuple[float, ...]
CurveParam = float

TAU = 1e-9


class DomainError(ValueError):
    """A parameter or argument lies outside the domain of an operation."""


def dot(a: Sequence[float], b: Sequence[float]) -> float:
    return sum(map(mul, a, b))


def vsub(a: Sequence[float], b: Sequence[float]) -> Point:
    return tuple(map(sub, a, b))


def lerp(a: Sequence[float], b: Sequence[float], f: float) -> Point:
    g = 1.0 - f
    return tuple(g * x + f * y for x, y in zip(a, b))


def within(d: float, eps: float) -> bool:
    """Tolerant ``d <= eps``."""
    return d <= eps + TAU


def _as_point(p: Sequence[float]) -> Point:
    pt = tuple(float(c) for c in p)
    if not pt:
        raise ValueError("a point needs at least one coordinate")
    if not all(math.isfinite(c) for c in pt):
        raise ValueError(f"non-finite coordinate in {pt!r}")
    return pt


@dataclass(frozen=True)
class Segment:
    start: Point
    end: Point
    vec: Point = field(init=False, repr=False, compare=False)
    sq_len: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        start, end = _as_point(self.start), _as_point(self.end)
        if len(start) != len(end):
            raise ValueError("segment endpoints differ in dimension")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)
        vec = vsub(end, start)
        sq = dot(vec, vec)
        if sq == 0.0:
            raise ValueError("segment endpoints coincide")
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "sq_len", sq)

    @property
    def length(self) -> float:
        return math.sqrt(self.sq_len)

    @property
    def dim(self) -> int:
        return len(self.start)

    def direction(self) -> Point:
        """Unit vector from start to end."""
        ln = self.length
        return tuple(c / ln for c in self.vec)

    def at(self, t: float) -> Point:
        """Point at parameter ``t`` in ``[1, 2]``."""
        return lerp(self.start, self.end, t - 1.0)


class PolygonalCurve:
    """Immutable vertex sequence in R^d.

    ``min_edge_len`` is the shortest edge length (``inf`` for a single vertex).
    Consecutive vertices must differ.
    """

    __slots__ = ("vertices", "dim", "edge_vecs", "edge_sq_lens", "min_edge_len", "_array")

    def __init__(self, vertices: Sequence[Sequence[float]]):
        pts = tuple(_as_point(v) for v in vertices)
        if not pts:
            raise ValueError("a curve needs at least one vertex")
        dim = len(pts[0])
        for i, p in enumerate(pts):
            if len(p) != dim:
                raise ValueError(f"vertex {i + 1} has dimension {len(p)}, expected {dim}")
        vecs = tuple(vsub(b, a) for a, b in zip(pts, pts[1:]))
        sq = tuple(dot(v, v) for v in vecs)
        for i, s in enumerate(sq):
            if s == 0.0:
                raise ValueError(f"vertices {i + 1} and {i + 2} coincide")
        self.vertices = pts
        self.dim = dim
        self.edge_vecs = vecs
        self.edge_sq_lens = sq
        self.min_edge_len = math.sqrt(min(sq)) if sq else math.inf
        self._array = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolygonalCurve) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"PolygonalCurve(n={self.n}, d={self.dim})"

    def vertex(self, i: int) -> Point:
        """Vertex ``p_i`` (1-based)."""
        return self.vertices[i - 1]

    def edge(self, i: int) -> Segment:
        """Edge ``P[i, i+1]`` (1-based)."""
        return Segment(self.vertices[i - 1], self.vertices[i])

    def as_array(self):
        import numpy as np

        if self._array is None:
            arr = np.array(self.vertices, dtype=np.float64)
            arr.setflags(write=False)
            self._array = arr
        return self._array


def eval_at(P: PolygonalCurve, t: CurveParam) -> Point:
    """Point ``P(t)`` for ``t`` in ``[1, n]``."""
    n = P.n
    if not (1.0 <= t <= n):
        raise DomainError(f"parameter {t} outside [1, {n}]")
    i = int(t)
    if i >= n:
        return P.vertices[n - 1]
    f = t - i
    if f == 0.0:
        return P.vertices[i - 1]
    return lerp(P.vertices[i - 1], P.vertices[i], f)


def dist_point_segment(x: Sequence[float], e: Segment) -> float:
    w = vsub(x, e.start)
    t = dot(w, e.vec) / e.sq_len
    if t <= 0.0:
        return math.dist(x, e.start)
    if t >= 1.0:
        return math.dist(x, e.end)
    return math.dist(x, lerp(e.start, e.end, t))


def chord(p: Sequence[float], a: Sequence[float], vec: Sequence[float], sq_len: float,
          eps: float) -> Optional[Tuple[float, float]]:
    """Local ``[lo, hi]`` in ``[0, 1]`` of segment ``a + s*vec`` inside ``B(p, eps)``."""
    w = vsub(p, a)
    t0 = dot(w, vec) / sq_len
    # residual taken directly; |w|^2 - (w.u)^2 cancels badly for p on the line
    perp2 = sum((x - t0 * y) ** 2 for x, y in zip(w, vec))
    r = eps + TAU
    if perp2 > r * r:
        return None
    h = math.sqrt(max(eps * eps - perp2, 0.0) / sq_len)
    lo = t0 - h if t0 > h else 0.0
    hi = t0 + h if t0 + h < 1.0 else 1.0
    if lo <= hi:
        return lo, hi
    # chord misses the segment; an endpoint may still be within tolerance
    if hi < 0.5:
        return (0.0, 0.0) if math.dist(p, a) <= r else None
    return (1.0, 1.0) if math.dist(p, tuple(x + y for x, y in zip(a, vec))) <= r else None


def ball_segment_interval(p: Sequence[float], eps: float, e: Segment) -> Optional[Tuple[float, float]]:
    """Sub-interval of ``[1, 2]`` whose points of ``e`` lie within ``eps`` of ``p``."""
    iv = chord(_as_point(p), e.start, e.vec, e.sq_len, eps)
    if iv is None:
        return None
    return 1.0 + iv[0], 1.0 + iv[1]


def is_e_eps_monotone(P: PolygonalCurve, e: Segment, eps: float) -> bool:
    """Endpoints in the end balls, curve inside ``C(e, eps)``, every edge strictly forward."""
    if not within(math.dist(P.vertices[0], e.start), eps):
        return False
    if not within(math.dist(P.vertices[-1], e.end), eps):
        return False
    # the cylinder is convex, so checking vertices covers the edges
    if any(not within(dist_point_segment(p, e), eps) for p in P.vertices):
        return False
    u = e.vec
    return all(dot(v, u) > 0.0 for v in P.edge_vecs)


def frechet_curve_to_point(P: PolygonalCurve, q: Sequence[float]) -> float:
    # the distance to a point is convex along each edge, so vertices attain the max
    return max(math.dist(p, q) for p in P.vertices)


def subcurve(P: PolygonalCurve, a: CurveParam, b: CurveParam) -> PolygonalCurve:
    """``P[a, b]`` as a new curve; ``a == b`` gives a single point."""
    if a > b:
        raise DomainError(f"subcurve bounds reversed: {a} > {b}")
    first = eval_at(P, a)
    last = eval_at(P, b)
    pts = [first]
    for j in range(math.floor(a) + 1, math.ceil(b)):
        pts.append(P.vertices[j - 1])
    pts.append(last)
    out = [pts[0]]
    for p in pts[1:]:
        if p != out[-1]:
            out.append(p)
    return PolygonalCurve(out)
