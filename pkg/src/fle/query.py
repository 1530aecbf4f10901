"""Planar index for longest eps-prefix queries against arbitrary segments.

``build_index`` preprocesses a curve in the plane into two balanced trees
over the same vertex order:

* an angle tree over the edges, each node holding the smallest circular
  arc containing its edge directions; it finds the first edge that is not
  strictly forward for a query direction;
* a hull tree over the vertices, each node holding the convex hull of its
  range; extreme-point queries on the hulls find the first vertex that
  leaves a slab around a query line.

A query for segment ``e`` locates the stretch of ``P`` that is monotone
along ``e`` and stays in the cylinder around it up to the region next to
``B(e_2, eps)``, then resolves the last few edges with the exact row scan.
All tree searches are ``O(log^2 n)``; the closing scan touches ``O(1)``
edges because every edge of ``P`` is longer than ``2 eps``.

Trees use heap numbering: node 1 is the root, node ``i`` has children
``2i`` and ``2i+1`` and covers a contiguous leaf range split at its middle.
"""

from __future__ import annotations

import math
import struct
from typing import BinaryIO, Optional, Tuple, Union

import numpy as np
from numba import njit

from fle.freespace import _NONE, _chord, _row_resume
from fle.geometry import TAU, DomainError, PolygonalCurve, Segment
from fle.greedy import Decision, EdgeLengthMode, MatchingWitness, PreconditionError, check_preconditions

TWO_PI = 2.0 * math.pi
ARC_SLACK = 1e-12
MAGIC = b"FLEIDX1\0"


class QueryStats:
    """Node visits accumulated by index queries."""

    __slots__ = ("visits", "queries")

    def __init__(self):
        self.visits = 0
        self.queries = 0


# ---------------------------------------------------------------------------
# tree construction


@njit(cache=True)
def _layout(count):
    size = 4 * count + 4
    lo = np.full(size, -1, dtype=np.int64)
    hi = np.full(size, -1, dtype=np.int64)
    if count == 0:
        return lo, hi
    lo[1] = 0
    hi[1] = count - 1
    for i in range(1, size):
        if lo[i] >= 0 and lo[i] < hi[i]:
            mid = (lo[i] + hi[i]) // 2
            lo[2 * i] = lo[i]
            hi[2 * i] = mid
            lo[2 * i + 1] = mid + 1
            hi[2 * i + 1] = hi[i]
    return lo, hi


@njit(cache=True)
def _merge_arcs(s1, w1, s2, w2):
    if w1 >= TWO_PI or w2 >= TWO_PI:
        return 0.0, TWO_PI
    d12 = (s2 - s1) % TWO_PI
    d21 = (s1 - s2) % TWO_PI
    a = max(w1, d12 + w2)
    b = max(w2, d21 + w1)
    if a <= b:
        return s1, min(a, TWO_PI)
    return s2, min(b, TWO_PI)


@njit(cache=True)
def _build_arcs(P, lo, hi):
    size = lo.shape[0]
    start = np.zeros(size)
    width = np.full(size, -1.0)
    for i in range(size - 1, 0, -1):
        if lo[i] < 0:
            continue
        if lo[i] == hi[i]:
            j = lo[i]
            start[i] = math.atan2(P[j + 1, 1] - P[j, 1], P[j + 1, 0] - P[j, 0]) % TWO_PI
            width[i] = 0.0
        else:
            start[i], width[i] = _merge_arcs(start[2 * i], width[2 * i], start[2 * i + 1], width[2 * i + 1])
    return start, width


@njit(cache=True)
def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@njit(cache=True)
def _hull_into(pts, count, out, base):
    # Andrew's monotone chain; writes the CCW hull starting at the
    # lexicographically smallest point to out[base:], returns its size
    order = np.argsort(pts[:count, 1], kind="mergesort")
    order = order[np.argsort(pts[order, 0], kind="mergesort")]
    h = 0
    for idx in range(count):
        p = pts[order[idx]]
        while h >= 2 and _cross(out[base + h - 2], out[base + h - 1], p) <= 0.0:
            h -= 1
        out[base + h, 0] = p[0]
        out[base + h, 1] = p[1]
        h += 1
    lower = h + 1
    for idx in range(count - 2, -1, -1):
        p = pts[order[idx]]
        while h >= lower and _cross(out[base + h - 2], out[base + h - 1], p) <= 0.0:
            h -= 1
        out[base + h, 0] = p[0]
        out[base + h, 1] = p[1]
        h += 1
    h -= 1  # the chain closes on its first point
    if h < 1:
        h = 1
    if h == 2 and out[base, 0] == out[base + 1, 0] and out[base, 1] == out[base + 1, 1]:
        h = 1
    return h


@njit(cache=True)
def _hull_angles(xy, off, ln):
    ang = np.zeros(xy.shape[0])
    for i in range(off.shape[0]):
        h = ln[i]
        if h < 2:
            continue
        b = off[i]
        for k in range(h):
            nxt = b + (k + 1) % h
            t = math.atan2(xy[nxt, 1] - xy[b + k, 1], xy[nxt, 0] - xy[b + k, 0])
            if t <= -0.5 * math.pi:
                t += TWO_PI
            ang[b + k] = t
    return ang


@njit(cache=True)
def _build_hulls(P, lo, hi, capacity):
    size = lo.shape[0]
    off = np.zeros(size, dtype=np.int64)
    ln = np.zeros(size, dtype=np.int64)
    xy = np.empty((capacity, 2))
    scratch = np.empty((P.shape[0], 2))
    ptr = 0
    for i in range(size - 1, 0, -1):
        if lo[i] < 0:
            continue
        if lo[i] == hi[i]:
            xy[ptr, 0] = P[lo[i], 0]
            xy[ptr, 1] = P[lo[i], 1]
            off[i] = ptr
            ln[i] = 1
            ptr += 1
            continue
        c = 0
        for child in (2 * i, 2 * i + 1):
            for k in range(ln[child]):
                scratch[c, 0] = xy[off[child] + k, 0]
                scratch[c, 1] = xy[off[child] + k, 1]
                c += 1
        h = _hull_into(scratch, c, xy, ptr)
        off[i] = ptr
        ln[i] = h
        ptr += h
    return off, ln, xy[:ptr].copy()


# ---------------------------------------------------------------------------
# tree queries


@njit(cache=True)
def _arc_forward(start, width, phi):
    # every direction in the arc has positive dot with direction phi
    if width >= math.pi:
        return False
    c = start + 0.5 * width - phi
    c = (c + math.pi) % TWO_PI - math.pi
    return abs(c) + 0.5 * width < 0.5 * math.pi - ARC_SLACK


@njit(cache=True)
def _first_backward(P, lo, hi, arc_start, arc_width, first, ux, uy):
    """First edge index ``>= first`` (0-based) whose dot with ``u`` is ``<= 0``."""
    phi = math.atan2(uy, ux)
    stack = np.empty(256, dtype=np.int64)
    stack[0] = 1
    top = 1
    visits = 0
    while top > 0:
        top -= 1
        i = stack[top]
        visits += 1
        if hi[i] < first:
            continue
        if lo[i] >= first and _arc_forward(arc_start[i], arc_width[i], phi):
            continue
        if lo[i] == hi[i]:
            j = lo[i]
            if (P[j + 1, 0] - P[j, 0]) * ux + (P[j + 1, 1] - P[j, 1]) * uy <= 0.0:
                return j, visits
            continue
        stack[top] = 2 * i + 1
        stack[top + 1] = 2 * i
        top += 2
    return -1, visits


@njit(cache=True)
def _hull_max(xy, ang, base, h, nx, ny):
    if h <= 4:
        best = -np.inf
        for k in range(h):
            v = xy[base + k, 0] * nx + xy[base + k, 1] * ny
            if v > best:
                best = v
        return best
    tau = math.atan2(ny, nx) + 0.5 * math.pi
    if tau > 1.5 * math.pi:
        tau -= TWO_PI
    # number of hull edges whose angle is <= tau
    a, b = 0, h
    while a < b:
        mid = (a + b) // 2
        if ang[base + mid] <= tau:
            a = mid + 1
        else:
            b = mid
    best = -np.inf
    for k in (a - 1, a, a + 1):
        kk = base + k % h
        v = xy[kk, 0] * nx + xy[kk, 1] * ny
        if v > best:
            best = v
    return best


@njit(cache=True)
def _first_outside_slab(lo, hi, off, ln, xy, ang, first, last, nx, ny, low, high):
    """First vertex in ``[first, last]`` (0-based) with ``n . p`` outside ``[low, high]``."""
    if first > last:
        return -1, 0
    stack = np.empty(256, dtype=np.int64)
    stack[0] = 1
    top = 1
    visits = 0
    while top > 0:
        top -= 1
        i = stack[top]
        visits += 1
        if hi[i] < first or lo[i] > last:
            continue
        inside = lo[i] >= first and hi[i] <= last
        if inside:
            up = _hull_max(xy, ang, off[i], ln[i], nx, ny)
            down = -_hull_max(xy, ang, off[i], ln[i], -nx, -ny)
            if up <= high and down >= low:
                continue
            if lo[i] == hi[i]:
                return lo[i], visits
        stack[top] = 2 * i + 1
        stack[top + 1] = 2 * i
        top += 2
    return -1, visits


@njit(cache=True)
def _first_at_least(P, first, last, ox, oy, ux, uy, level):
    """First vertex in ``[first, last]`` with ``u . (p - o) >= level``, assuming the
    projections increase along the range; exponential then binary search."""
    if first > last:
        return -1
    if (P[first, 0] - ox) * ux + (P[first, 1] - oy) * uy >= level:
        return first
    below = first
    step = 1
    while True:
        probe = below + step
        if probe >= last:
            probe = last
            if (P[last, 0] - ox) * ux + (P[last, 1] - oy) * uy < level:
                return -1
            break
        if (P[probe, 0] - ox) * ux + (P[probe, 1] - oy) * uy >= level:
            break
        below = probe
        step *= 2
    while probe - below > 1:
        mid = (below + probe) // 2
        if (P[mid, 0] - ox) * ux + (P[mid, 1] - oy) * uy >= level:
            probe = mid
        else:
            below = mid
    return probe


# ---------------------------------------------------------------------------
# public API


class QueryIndex:
    """Angle tree plus hull tree over a planar curve; see :func:`build_index`."""

    def __init__(self, curve: PolygonalCurve, arc_start, arc_width, hull_off, hull_len, hull_xy):
        self.curve = curve
        self.P = curve.as_array()
        self.n = curve.n
        self.edge_lo, self.edge_hi = _layout(max(curve.n - 1, 0))
        self.vert_lo, self.vert_hi = _layout(curve.n)
        self.arc_start = arc_start
        self.arc_width = arc_width
        self.hull_off = hull_off
        self.hull_len = hull_len
        self.hull_xy = hull_xy
        self.hull_ang = _hull_angles(hull_xy, hull_off, hull_len)

    def __repr__(self) -> str:
        return f"QueryIndex(n={self.n}, hull_points={self.hull_xy.shape[0]})"

    def save(self, fh: BinaryIO) -> None:
        """Binary dump: magic, vertex count, vertices, then both trees in preorder."""
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", self.n))
        fh.write(np.ascontiguousarray(self.P, dtype="<f8").tobytes())
        arcs = []
        for i in _preorder(self.edge_lo, self.edge_hi):
            half = 0.5 * self.arc_width[i]
            arcs.append(((self.arc_start[i] + half) % TWO_PI, half))
        fh.write(np.asarray(arcs, dtype="<f8").reshape(-1).tobytes())
        for i in _preorder(self.vert_lo, self.vert_hi):
            h = int(self.hull_len[i])
            fh.write(struct.pack("<Q", h))
            b = int(self.hull_off[i])
            fh.write(np.ascontiguousarray(self.hull_xy[b:b + h], dtype="<f8").tobytes())

    @classmethod
    def load(cls, fh: BinaryIO) -> "QueryIndex":
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError("not a FLEIDX1 index file")
        n = struct.unpack("<Q", _read_exact(fh, 8))[0]
        if n < 1:
            raise ValueError("index file holds an empty curve")
        P = np.frombuffer(_read_exact(fh, 16 * n), dtype="<f8").reshape(n, 2)
        curve = PolygonalCurve(P.tolist())
        edge_lo, edge_hi = _layout(n - 1)
        vert_lo, vert_hi = _layout(n)
        arc_start = np.zeros(edge_lo.shape[0])
        arc_width = np.full(edge_lo.shape[0], -1.0)
        nodes = _preorder(edge_lo, edge_hi)
        raw = np.frombuffer(_read_exact(fh, 16 * len(nodes)), dtype="<f8").reshape(-1, 2)
        for i, (center, half) in zip(nodes, raw):
            arc_start[i] = (center - half) % TWO_PI
            arc_width[i] = 2.0 * half
        hull_off = np.zeros(vert_lo.shape[0], dtype=np.int64)
        hull_len = np.zeros(vert_lo.shape[0], dtype=np.int64)
        chunks = []
        ptr = 0
        for i in _preorder(vert_lo, vert_hi):
            h = struct.unpack("<Q", _read_exact(fh, 8))[0]
            if h < 1 or h > vert_hi[i] - vert_lo[i] + 1:
                raise ValueError(f"corrupt hull size {h} at node {i}")
            chunks.append(np.frombuffer(_read_exact(fh, 16 * h), dtype="<f8").reshape(h, 2))
            hull_off[i] = ptr
            hull_len[i] = h
            ptr += h
        if fh.read(1):
            raise ValueError("trailing bytes after index data")
        xy = np.concatenate(chunks).astype(np.float64)
        return cls(curve, arc_start, arc_width, hull_off, hull_len, xy)


def _read_exact(fh, size):
    data = fh.read(size)
    if len(data) != size:
        raise ValueError("truncated index file")
    return data


def _preorder(lo, hi):
    out = []
    if lo.shape[0] < 2 or lo[1] < 0:
        return out
    stack = [1]
    while stack:
        i = stack.pop()
        out.append(i)
        if lo[i] < hi[i]:
            stack.append(2 * i + 1)
            stack.append(2 * i)
    return out


def build_index(P: PolygonalCurve) -> QueryIndex:
    """Preprocess a planar curve in ``O(n log^2 n)`` time and ``O(n log n)`` space."""
    if P.dim != 2:
        raise DomainError(f"the query index supports planar curves only, got d={P.dim}")
    arr = P.as_array()
    edge_lo, edge_hi = _layout(max(P.n - 1, 0))
    arc_start, arc_width = _build_arcs(arr, edge_lo, edge_hi)
    vert_lo, vert_hi = _layout(P.n)
    levels = int(math.ceil(math.log2(max(P.n, 2)))) + 2
    off, ln, xy = _build_hulls(arr, vert_lo, vert_hi, P.n * levels)
    return QueryIndex(P, arc_start, arc_width, off, ln, xy)


def _unit2(v) -> Tuple[float, float]:
    x, y = float(v[0]), float(v[1])
    ln = math.hypot(x, y)
    if ln == 0.0:
        raise DomainError("direction vector is zero")
    return x / ln, y / ln


def _check_start(ix: QueryIndex, start: float) -> None:
    if not 1.0 <= start <= ix.n:
        raise DomainError(f"start {start} outside [1, {ix.n}]")


def _counted(stats: Optional[QueryStats], visits: int) -> None:
    if stats is not None:
        stats.visits += visits


def longest_monotone_prefix(ix: QueryIndex, start: float, direction,
                            stats: Optional[QueryStats] = None) -> float:
    """Largest ``lam`` such that every edge of ``P[start, lam]`` has positive dot
    with ``direction``; it is a vertex parameter, ``start`` itself, or ``n``."""
    _check_start(ix, start)
    ux, uy = _unit2(direction)
    first = min(int(math.floor(start)), ix.n - 1) - 1
    if start >= ix.n:
        return float(ix.n)
    j, visits = _first_backward(ix.P, ix.edge_lo, ix.edge_hi, ix.arc_start, ix.arc_width,
                                max(first, 0), ux, uy)
    _counted(stats, visits)
    if j < 0:
        return float(ix.n)
    return max(start, float(j + 1))


def _virtual_count(a: float, b: float) -> int:
    # P(a), the vertices strictly inside (a, b), P(b)
    return 1 if a == b else math.ceil(b) - math.floor(a) + 1


def _virtual_param(a: float, b: float, i: int, count: int) -> float:
    if i == 0:
        return a
    if i == count - 1:
        return b
    return float(math.floor(a) + i)


def _point(P: np.ndarray, t: float) -> np.ndarray:
    k = int(t)
    if k >= P.shape[0]:
        return P[-1]
    f = t - k
    if f == 0.0:
        return P[k - 1]
    return P[k - 1] + f * (P[k] - P[k - 1])


def _ball_scan(ix: QueryIndex, lam: float, center, eps: float, direction, start: float, last: bool):
    # on a curve monotone along u the ball's points project into
    # [c - eps, c + eps]; find where the curve enters that window and walk
    # the few pieces inside it
    _check_start(ix, start)
    if not start <= lam <= ix.n:
        raise DomainError(f"lam {lam} outside [{start}, {ix.n}]")
    ux, uy = _unit2(direction)
    c = np.asarray(center, dtype=float)
    P = ix.P
    r = eps + TAU
    cproj = c[0] * ux + c[1] * uy
    a, b = float(start), float(lam)
    count = _virtual_count(a, b)
    if count == 1:
        return a if math.dist(_point(P, a), c) <= r else None
    level = cproj + r if last else cproj - r
    k = _first_at_least(P, math.floor(a), math.ceil(b) - 2, 0.0, 0.0, ux, uy, level)
    first = count - 1 if k < 0 else k - math.floor(a) + 1

    def piece(i):
        t0 = _virtual_param(a, b, i - 1, count)
        t1 = _virtual_param(a, b, i, count)
        p0, p1 = _point(P, t0), _point(P, t1)
        return t0, t1, p0, p1

    if last:
        for i in range(first, 0, -1):
            t0, t1, p0, p1 = piece(i)
            lo, hi, _ = _chord(c, p0, p1, eps)
            if lo <= hi:
                return t0 + hi * (t1 - t0)
            if p1[0] * ux + p1[1] * uy < cproj - r:
                break
        return None
    for i in range(first, count):
        t0, t1, p0, p1 = piece(i)
        if p0[0] * ux + p0[1] * uy > cproj + r:
            break
        lo, hi, _ = _chord(c, p0, p1, eps)
        if lo <= hi:
            return t0 + lo * (t1 - t0)
    return None


def first_intersection(ix: QueryIndex, lam: float, center, eps: float, direction,
                       start: float = 1.0) -> Optional[float]:
    """First point of ``P[start, lam]`` in ``B(center, eps)``.

    ``P[start, lam]`` must be monotone along ``direction`` with edges longer
    than ``2 eps``; then the window next to the ball holds few vertices.
    """
    return _ball_scan(ix, lam, center, eps, direction, start, last=False)


def last_intersection(ix: QueryIndex, lam: float, center, eps: float, direction,
                      start: float = 1.0) -> Optional[float]:
    """Last point of ``P[start, lam]`` in ``B(center, eps)``; same hypotheses as
    :func:`first_intersection`."""
    return _ball_scan(ix, lam, center, eps, direction, start, last=True)


def cylinder_intersection(ix: QueryIndex, lam: float, e: Segment, eps: float, start: float = 1.0,
                          stats: Optional[QueryStats] = None) -> Optional[float]:
    """First point of ``P[start, lam]`` farther than ``eps`` from the line through ``e``."""
    _check_start(ix, start)
    if lam < start or lam > ix.n:
        raise DomainError(f"lam {lam} outside [{start}, {ix.n}]")
    ux, uy = _unit2(e.vec)
    nx, ny = -uy, ux
    base = e.start[0] * nx + e.start[1] * ny
    P = ix.P

    def offset(t):
        p = _point(P, t)
        return p[0] * nx + p[1] * ny - base

    if abs(offset(start)) > eps + TAU:
        return start
    j, visits = _first_outside_slab(ix.vert_lo, ix.vert_hi, ix.hull_off, ix.hull_len, ix.hull_xy,
                                    ix.hull_ang, math.floor(start), math.ceil(lam) - 2,
                                    nx, ny, base - eps - TAU, base + eps + TAU)
    _counted(stats, visits)
    if j >= 0:
        t_out = float(j + 1)
    elif abs(offset(lam)) > eps + TAU:
        t_out = lam
    else:
        return None
    t_in = max(start, math.ceil(t_out) - 1.0)
    s_in, s_out = offset(t_in), offset(t_out)
    bound = math.copysign(eps, s_out)
    f = (bound - s_in) / (s_out - s_in)
    return t_in + min(max(f, 0.0), 1.0) * (t_out - t_in)


def _result(best: float) -> Optional[float]:
    return None if best < 0.0 else float(best)


def longest_eps_prefix_query(ix: QueryIndex, start: float, e: Segment, eps: float,
                             stats: Optional[QueryStats] = None) -> Optional[float]:
    """Longest eps-prefix of ``P[start, n]`` with respect to ``e``, or ``None``.

    Needs ``l_P > 2 eps`` and ``|e| > (1 + sqrt 2) eps`` (``PreconditionError``
    otherwise) and then agrees with :func:`fle.freespace.longest_eps_prefix_row`
    in ``O(log^2 n)``.
    """
    if e.dim != 2:
        raise DomainError("the query index supports planar segments only")
    if not eps > 0:
        raise DomainError("eps must be positive")
    _check_start(ix, start)
    length = e.length
    if not (ix.curve.min_edge_len > 2.0 * eps and length > (1.0 + math.sqrt(2.0)) * eps):
        raise PreconditionError(
            f"index queries need l_P > 2 eps and |e| > (1 + sqrt 2) eps: l_P={ix.curve.min_edge_len:.6g}, "
            f"|e|={length:.6g}, eps={eps:.6g}")
    if stats is not None:
        stats.queries += 1
    P = ix.P
    n = ix.n
    e1 = np.asarray(e.start, dtype=float)
    e2 = np.asarray(e.end, dtype=float)
    eps = float(eps)
    start = float(start)
    r = eps + TAU

    x_s = _point(P, start)
    if math.dist(x_s, e1) > r:
        return None
    if start >= n:
        return start if math.dist(x_s, e2) <= r else None
    ux, uy = e.vec[0] / length, e.vec[1] / length
    ox, oy = e1[0], e1[1]

    def proj(p):
        return (p[0] - ox) * ux + (p[1] - oy) * uy

    # the piece of P from start to the next vertex may point backwards;
    # one exact cell of the row scan carries the reachable state past it
    best = -1.0
    sigma, left, bottom = start, 0.0, 0.0
    k0 = int(math.floor(start))
    if (P[k0, 0] - P[k0 - 1, 0]) * ux + (P[k0, 1] - P[k0 - 1, 1]) * uy <= 0.0:
        best, _, left, bottom, sigma = _row_resume(P, e1, e2, eps, start, 0.0, 0.0, 1)
        if left > 1.0 and bottom > 1.0:
            return _result(best)
        if sigma >= n:
            return _result(best)

    j_bad, visits = _first_backward(P, ix.edge_lo, ix.edge_hi, ix.arc_start, ix.arc_width,
                                    int(math.floor(sigma)) - 1, ux, uy)
    _counted(stats, visits)
    lam = float(n) if j_bad < 0 else max(sigma, float(j_bad + 1))

    # first vertex next to B(e2): nothing before it can reach the ball
    first_v = int(math.floor(sigma))  # 0-based index of the first vertex after sigma
    near = _first_at_least(P, first_v, int(lam) - 1, ox, oy, ux, uy, length - eps)
    if near < 0:
        return _result(best)
    y0 = max(sigma, float(near))  # 1-based parameter of the vertex before it

    if y0 > sigma:
        last_v = int(y0) - 1
        nx, ny = -uy, ux
        base = ox * nx + oy * ny
        j_out, visits = _first_outside_slab(ix.vert_lo, ix.vert_hi, ix.hull_off, ix.hull_len,
                                            ix.hull_xy, ix.hull_ang, first_v, last_v,
                                            nx, ny, base - r, base + r)
        _counted(stats, visits)
        if j_out >= 0:
            return _result(best)
        j = first_v
        while j <= last_v and proj(P[j]) < 0.0:
            if math.dist(P[j], e1) > r:
                return _result(best)
            j += 1
        # on a monotone stretch inside the cylinder the lowest reachable
        # point can be reset to the last vertex's own interval start
        v = P[int(y0) - 1]
        left = _chord(v, e1, e2, eps)[0]
        if bottom <= 1.0 and int(y0) == first_v + 1 and math.dist(v, e1) <= r:
            bottom = 0.0
        else:
            bottom = _NONE
    tail, work, _, _, _ = _row_resume(P, e1, e2, eps, y0, left, bottom, n)
    _counted(stats, work)
    return _result(max(best, tail))


def decide_query(ix: QueryIndex, Q: PolygonalCurve, eps: float,
                 stats: Optional[QueryStats] = None) -> Decision:
    """Greedy decision of ``delta_F(P, Q) <= eps`` with index-backed prefix queries,
    ``O(m log^2 n)`` after preprocessing.  Needs the strict long-edge hypotheses
    and returns the same verdict and witness as strict ``decide_greedy``."""
    mode = EdgeLengthMode.STRICT
    if Q.dim != 2:
        raise DomainError("the query index supports planar curves only")
    if Q.n < 2:
        raise DomainError("Q needs at least one segment")
    if not check_preconditions(ix.curve, Q, eps, mode):
        raise PreconditionError(
            f"strict mode needs longer edges: l_P={ix.curve.min_edge_len:.6g}, "
            f"l_Q={Q.min_edge_len:.6g}, eps={eps:.6g}")
    gammas = [1.0]
    s = 1.0
    for i in range(1, Q.n):
        g = longest_eps_prefix_query(ix, s, Q.edge(i), eps, stats)
        if g is None:
            return Decision(False, None, mode)
        gammas.append(g)
        s = g
    if s < ix.n:
        return Decision(False, None, mode)
    return Decision(True, MatchingWitness(tuple(gammas)), mode)


def as_index(source: Union[QueryIndex, PolygonalCurve]) -> QueryIndex:
    return source if isinstance(source, QueryIndex) else build_index(source)
