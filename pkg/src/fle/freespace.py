"""Free-space diagram machinery (Alt and Godau).

Two independent engines live here:

* ``_row_scan`` propagates reachability across the single row of cells
  ``P[start, n] x e``.  It is the workhorse behind the longest eps-prefix and
  stops as soon as nothing on the current vertex boundary is reachable.
* ``_decide_table`` runs the classical quadratic dynamic program over the whole
  diagram.  It never assumes anything about edge lengths and serves as ground
  truth for every fast algorithm in the package.

Reachable boundary portions are stored as their lowest reachable local
coordinate in ``[0, 1]``; the upper end is always the free-interval end.  The
sentinel ``_NONE`` (> 1) marks an unreachable boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numba import njit

from fle.geometry import TAU, DomainError, PolygonalCurve, Segment, chord, frechet_curve_to_point

Interval = Tuple[float, float]

_NONE = 2.0
MERGE_GAP = 1e-12


class WorkCounter:
    """Call-local tally of vertices touched by row scans."""

    __slots__ = ("vertices",)

    def __init__(self):
        self.vertices = 0


# ---------------------------------------------------------------------------
# compiled kernels


@njit(cache=True)
def _dist(a, b):
    s = 0.0
    for k in range(a.shape[0]):
        t = a[k] - b[k]
        s += t * t
    return math.sqrt(s)


@njit(cache=True)
def _chord(p, a, b, eps):
    # local interval of segment a->b inside B(p, eps) as (lo, hi, hi_tol);
    # hi_tol >= hi is the upper end for the inflated radius eps + TAU and is
    # what reachability comparisons use.  Empty gives (2, -1, -1).
    wu = 0.0
    ww = 0.0
    vv = 0.0
    for k in range(p.shape[0]):
        v = b[k] - a[k]
        w = p[k] - a[k]
        wu += w * v
        ww += w * w
        vv += v * v
    r = eps + TAU
    # residual taken directly; ww - wu^2/vv cancels badly for p on the line
    perp2 = 0.0
    for k in range(p.shape[0]):
        t = p[k] - a[k] - wu / vv * (b[k] - a[k])
        perp2 += t * t
    if perp2 > r * r:
        return _NONE, -1.0, -1.0
    h = math.sqrt(max(eps * eps - perp2, 0.0) / vv)
    t0 = wu / vv
    hr = math.sqrt((r * r - perp2) / vv)
    hi_tol = t0 + hr if t0 + hr < 1.0 else 1.0
    lo = t0 - h if t0 > h else 0.0
    hi = t0 + h if t0 + h < 1.0 else 1.0
    if lo <= hi:
        return lo, hi, max(hi, hi_tol)
    if hi < 0.5:
        if math.sqrt(ww) <= r:
            return 0.0, 0.0, max(0.0, hi_tol)
        return _NONE, -1.0, -1.0
    if _dist(p, b) <= r:
        return 1.0, 1.0, 1.0
    return _NONE, -1.0, -1.0


@njit(cache=True)
def _point_at(P, t, out):
    n = P.shape[0]
    k = int(math.floor(t))
    if k >= n:
        k = n
    f = t - k
    for c in range(P.shape[1]):
        if f > 0.0:
            out[c] = P[k - 1, c] + f * (P[k, c] - P[k - 1, c])
        else:
            out[c] = P[k - 1, c]
    return k


@njit(cache=True)
def _row_resume(P, e1, e2, eps, start, left, bottom, max_cells):
    """Continue the row scan from parameter ``start`` with boundary state
    ``(left, bottom)`` at ``P(start)``, for at most ``max_cells`` cells.

    Returns ``(best, work, left, bottom, stop)``: the largest parameter found
    in ``B(e2)`` (``-1`` if none), the points evaluated, and the state on the
    vertex ``stop`` where the scan ended.
    """
    n = P.shape[0]
    d = P.shape[1]
    r = eps + TAU
    x_prev = np.empty(d)
    k = _point_at(P, start, x_prev)
    best = -1.0
    work = 0
    s_prev = start
    j = k + 1
    cells = 0
    while j <= n and cells < max_cells:
        x = P[j - 1]
        work += 1
        cells += 1
        lo, hi, hi_tol = _chord(e2, x_prev, x, eps)
        if lo <= hi:
            if left <= 1.0 or (bottom <= 1.0 and max(bottom, lo) <= hi_tol):
                if hi >= 1.0 or _dist(x, e2) <= r:
                    best = float(j)
                else:
                    best = s_prev + hi * (j - s_prev)
        ra, rb, rb_tol = _chord(x, e1, e2, eps)
        new_left = _NONE
        if ra <= rb:
            if bottom <= 1.0:
                new_left = ra
            elif left <= 1.0:
                lo2 = max(left, ra)
                if lo2 <= rb_tol:
                    new_left = lo2
        new_bottom = _NONE
        if bottom <= 1.0 and _dist(x, e1) <= r:
            new_bottom = 0.0
        left = new_left
        bottom = new_bottom
        s_prev = float(j)
        if left > 1.0 and bottom > 1.0:
            break
        for c in range(d):
            x_prev[c] = x[c]
        j += 1
    return best, work, left, bottom, s_prev


@njit(cache=True)
def _row_scan(P, e1, e2, eps, start):
    """Longest eps-prefix of ``P[start, n]`` w.r.t. segment ``e1 -> e2``.

    Returns ``(gamma, work)`` with ``gamma = -1`` when no prefix exists; ``work``
    counts the points whose boundary intervals were evaluated.
    """
    n = P.shape[0]
    r = eps + TAU
    x0 = np.empty(P.shape[1])
    k = _point_at(P, start, x0)
    if _dist(x0, e1) > r:
        return -1.0, 1
    if k == n:
        if _dist(x0, e2) <= r:
            return start, 1
        return -1.0, 1
    best, work, _, _, _ = _row_resume(P, e1, e2, eps, start, 0.0, 0.0, n)
    return best, work + 1


@njit(cache=True)
def _greedy_chain(P, Q, eps, gammas):
    """Repeated longest eps-prefix along the segments of ``Q``.

    Fills ``gammas[0..]`` and returns ``(filled, work)``; ``filled < m`` means the
    prefix for segment ``filled`` did not exist.
    """
    m = Q.shape[0]
    gammas[0] = 1.0
    s = 1.0
    work = 0
    for i in range(1, m):
        g, w = _row_scan(P, Q[i - 1], Q[i], eps, s)
        work += w
        if g < 0.0:
            return i, work
        gammas[i] = g
        s = g
    return m, work


@njit(cache=True)
def _decide_table(P, Q, eps):
    n = P.shape[0]
    m = Q.shape[0]
    r = eps + TAU
    if _dist(P[0], Q[0]) > r or _dist(P[n - 1], Q[m - 1]) > r:
        return False
    # bottom[i]: lowest reachable point on the lower boundary of cell (i, row)
    # the first row and column are reachable from the origin exactly as long
    # as the vertices stay inside the start ball (balls are convex)
    bottom = np.empty(n - 1)
    run = True
    for i in range(n - 1):
        run = run and _dist(P[i], Q[0]) <= r
        bottom[i] = 0.0 if run else _NONE
    left_run = True
    left = _NONE
    for j in range(m - 1):
        left_run = left_run and _dist(P[0], Q[j]) <= r
        left = 0.0 if left_run else _NONE
        for i in range(n - 1):
            b = bottom[i]
            ra, rb, rb_tol = _chord(P[i + 1], Q[j], Q[j + 1], eps)
            ta, tb, tb_tol = _chord(Q[j + 1], P[i], P[i + 1], eps)
            right = _NONE
            if ra <= rb:
                if b <= 1.0:
                    right = ra
                elif left <= 1.0:
                    x = max(left, ra)
                    if x <= rb_tol:
                        right = x
            top = _NONE
            if ta <= tb:
                if left <= 1.0:
                    top = ta
                elif b <= 1.0:
                    x = max(b, ta)
                    if x <= tb_tol:
                        top = x
            bottom[i] = top
            left = right
    return left <= 1.0 or bottom[n - 2] <= 1.0


# ---------------------------------------------------------------------------
# public surface


@dataclass(frozen=True)
class FreeSpaceCell:
    """Free sub-intervals (cell-local, in ``[0, 1]``) of the four cell sides."""

    bottom: Optional[Interval]
    top: Optional[Interval]
    left: Optional[Interval]
    right: Optional[Interval]


@dataclass
class ReachabilityTable:
    """Reachable parts of the left and bottom side of every cell.

    ``left[j][i]`` / ``bottom[j][i]`` belong to cell ``(i, j)``, i.e. edge ``i`` of
    ``P`` against edge ``j`` of ``Q`` (both 0-based); ``None`` means unreachable.
    """

    cells: List[List[FreeSpaceCell]]
    left: List[List[Optional[Interval]]]
    bottom: List[List[Optional[Interval]]]
    corner: bool


def _free(p, a, b, eps) -> Optional[Interval]:
    vec = tuple(y - x for x, y in zip(a, b))
    return chord(p, a, vec, sum(c * c for c in vec), eps)


def free_space_cell(P: PolygonalCurve, Q: PolygonalCurve, i: int, j: int, eps: float) -> FreeSpaceCell:
    """Cell spanned by edge ``i`` of ``P`` and edge ``j`` of ``Q`` (0-based)."""
    p0, p1 = P.vertices[i], P.vertices[i + 1]
    q0, q1 = Q.vertices[j], Q.vertices[j + 1]
    return FreeSpaceCell(
        bottom=_free(q0, p0, p1, eps),
        top=_free(q1, p0, p1, eps),
        left=_free(p0, q0, q1, eps),
        right=_free(p1, q0, q1, eps),
    )


def reachability_table(P: PolygonalCurve, Q: PolygonalCurve, eps: float) -> ReachabilityTable:
    """Full reachability propagation in plain Python, kept for inspection.

    Slow (quadratic with a large constant); the compiled kernel answers the
    same question in :func:`decide_alt_godau`.
    """
    n, m = P.n, Q.n
    if n < 2 or m < 2:
        raise DomainError("the table needs at least one edge on each curve")
    cells = [[free_space_cell(P, Q, i, j, eps) for i in range(n - 1)] for j in range(m - 1)]
    left = [[None] * (n - 1) for _ in range(m - 1)]
    bottom = [[None] * (n - 1) for _ in range(m - 1)]
    r = eps + TAU
    start_free = math.dist(P.vertices[0], Q.vertices[0]) <= r
    run = start_free
    for i in range(n - 1):
        run = run and math.dist(P.vertices[i], Q.vertices[0]) <= r
        if run:
            bottom[0][i] = (0.0, cells[0][i].bottom[1])
    run = start_free
    for j in range(m - 1):
        run = run and math.dist(P.vertices[0], Q.vertices[j]) <= r
        if run:
            left[j][0] = (0.0, cells[j][0].left[1])

    def upper_tol(p, a, b):
        iv = _free(p, a, b, r)
        return iv[1] if iv is not None else -1.0

    corner = False
    for j in range(m - 1):
        for i in range(n - 1):
            cell = cells[j][i]
            lr, br = left[j][i], bottom[j][i]
            right = top = None
            if cell.right is not None:
                if br is not None:
                    right = cell.right
                elif lr is not None:
                    lo = max(lr[0], cell.right[0])
                    if lo <= upper_tol(P.vertices[i + 1], Q.vertices[j], Q.vertices[j + 1]):
                        right = (lo, max(lo, cell.right[1]))
            if cell.top is not None:
                if lr is not None:
                    top = cell.top
                elif br is not None:
                    lo = max(br[0], cell.top[0])
                    if lo <= upper_tol(Q.vertices[j + 1], P.vertices[i], P.vertices[i + 1]):
                        top = (lo, max(lo, cell.top[1]))
            if i + 1 < n - 1:
                left[j][i + 1] = right
            if j + 1 < m - 1:
                bottom[j + 1][i] = top
            if i == n - 2 and j == m - 2:
                end_free = math.dist(P.vertices[-1], Q.vertices[-1]) <= r
                corner = end_free and start_free and (right is not None or top is not None)
    return ReachabilityTable(cells=cells, left=left, bottom=bottom, corner=corner)


def decide_alt_godau(P: PolygonalCurve, Q: PolygonalCurve, eps: float) -> bool:
    """``True`` iff ``delta_F(P, Q) <= eps`` (within ``TAU``); no edge-length assumption."""
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if P.dim != Q.dim:
        raise ValueError("curves live in different dimensions")
    if P.n == 1:
        return frechet_curve_to_point(Q, P.vertices[0]) <= eps + TAU
    if Q.n == 1:
        return frechet_curve_to_point(P, Q.vertices[0]) <= eps + TAU
    return bool(_decide_table(P.as_array(), Q.as_array(), float(eps)))


def _merge_sorted(values: np.ndarray) -> np.ndarray:
    values = np.sort(values[np.isfinite(values)])
    if values.size == 0:
        return values
    keep = np.empty(values.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(values) >= MERGE_GAP
    return values[keep]


def _point_segment_dists(X: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """``|x, [a_j, b_j]|`` for every point ``x`` in ``X`` and every segment ``j``."""
    V = B - A
    vv = np.einsum("jk,jk->j", V, V)
    W = X[:, None, :] - A[None, :, :]
    t = np.clip(np.einsum("ijk,jk->ij", W, V) / vv, 0.0, 1.0)
    nearest = A[None, :, :] + t[..., None] * V[None, :, :]
    return np.linalg.norm(X[:, None, :] - nearest, axis=2).ravel()


def _bisector_events(X: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distances ``|x_k - z|`` with ``z`` equidistant from ``x_k, x_l`` on segment lines."""
    k, l = np.triu_indices(X.shape[0], k=1)
    if k.size == 0:
        return np.empty(0)
    xk, xl = X[k], X[l]
    W = xl - xk
    mid = 0.5 * (xk + xl)
    V = B - A
    # (A_j + t V_j - mid) . W = 0
    num = np.einsum("pk,pk->p", mid, W)[:, None] - W @ A.T
    den = W @ V.T
    ok = np.abs(den) > 1e-15 * (np.linalg.norm(W, axis=1)[:, None] * np.linalg.norm(V, axis=1)[None, :])
    t = np.clip(np.divide(num, den, out=np.zeros_like(num), where=ok), 0.0, 1.0)
    Z = A[None, :, :] + t[..., None] * V[None, :, :]
    vals = np.linalg.norm(Z - xk[:, None, :], axis=2)
    return vals[ok]


def enumerate_all_critical_values(P: PolygonalCurve, Q: PolygonalCurve) -> np.ndarray:
    """Every candidate Fréchet value of the pair, sorted with near-duplicates merged.

    Endpoint distances, vertex-to-edge distances in both directions, and the
    bisector (monotonicity) events; size ``O(n^2 m + n m^2)``.
    """
    if P.n < 2 or Q.n < 2:
        raise DomainError("critical values need at least one edge on each curve")
    Pa, Qa = P.as_array(), Q.as_array()
    parts = [
        np.array([np.linalg.norm(Pa[0] - Qa[0]), np.linalg.norm(Pa[-1] - Qa[-1])]),
        _point_segment_dists(Pa, Qa[:-1], Qa[1:]),
        _point_segment_dists(Qa, Pa[:-1], Pa[1:]),
        _bisector_events(Pa, Qa[:-1], Qa[1:]),
        _bisector_events(Qa, Pa[:-1], Pa[1:]),
    ]
    return _merge_sorted(np.concatenate(parts))


def exact_frechet(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    """``delta_F(P, Q)`` by binary search over all critical values."""
    if P.n == 1:
        return frechet_curve_to_point(Q, P.vertices[0])
    if Q.n == 1:
        return frechet_curve_to_point(P, Q.vertices[0])
    values = enumerate_all_critical_values(P, Q)
    Pa, Qa = P.as_array(), Q.as_array()
    lo, hi = 0, values.size - 1
    # the largest candidate is at least the max vertex-to-curve distance... but
    # decision monotonicity is all we rely on; fall back to the top value
    while lo < hi:
        mid = (lo + hi) // 2
        if _decide_table(Pa, Qa, float(values[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(values[lo])


def longest_eps_prefix_row(P: PolygonalCurve, e: Segment, eps: float, start: float = 1.0,
                           counter: Optional[WorkCounter] = None) -> Optional[float]:
    """Largest ``s`` with ``delta_F(P[start, s], e) <= eps``, or ``None``.

    Scans the single free-space row ``P[start, n] x e``; when a value is
    returned, ``P(s)`` lies on the boundary of ``B(e.end, eps)`` or ``s = n``.
    """
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if not (1.0 <= start <= P.n):
        raise DomainError(f"start {start} outside [1, {P.n}]")
    if e.dim != P.dim:
        raise ValueError("segment and curve live in different dimensions")
    g, work = _row_scan(P.as_array(), np.asarray(e.start), np.asarray(e.end), float(eps), float(start))
    if counter is not None:
        counter.vertices += work
    return None if g < 0.0 else g
