"""Discrete snake reference simulator and the rescaling constants.

The simulator draws a uniform +-1 walk excursion (the contour of a uniform
plane tree) and attaches Gaussian head displacements per tree edge, so that
conditionally on the excursion the head is centered Gaussian with covariance
equal to the running minimum of the excursion between the two times.  The
re-rooting transform re-reads the pair from the time of the minimal head
position, yielding a nonnegative head path; label-based distance bounds and
their chain closure are evaluated on index grids.

Two label rescalings are exposed: one for pendant-free quadrangulations and
one for unconstrained ones; distances divided by these constants (times
``n**(1/4)``) become comparable across models and to the simulator.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence

import numpy as np

from ._backend import kernels as _k
from .errors import EmptySample, RejectionBudgetExceeded
from .sampling import GEOMETRIC_HALF, sample_gw_conditioned

SIGMA_SQUARED = 2.0 / math.sqrt(3.0)
SIGMA = math.sqrt(SIGMA_SQUARED)


def contour_scale(n: int) -> float:
    """Height rescaling ``12**(-1/4) / sqrt(n)`` (equals ``sigma / 2`` over
    ``sqrt(n)``)."""
    return 12.0 ** -0.25 * n ** -0.5


def label_scale_nice(n: int) -> float:
    """Label rescaling ``(3/4)**(3/8) * n**(-1/4)`` for the pendant-free
    model."""
    return (3.0 / 4.0) ** 0.375 * n ** -0.25


def label_scale_plain(n: int) -> float:
    """Label rescaling ``(9/8)**(1/4) * n**(-1/4)`` for unconstrained
    quadrangulations."""
    return (9.0 / 8.0) ** 0.25 * n ** -0.25


def kappa(n: int) -> float:
    """Inverse of the pendant-free label rescaling:
    ``(2 / sqrt(3)) * sigma**(-1/2) * n**(1/4)``."""
    return (2.0 / math.sqrt(3.0)) * SIGMA ** -0.5 * n ** 0.25


class SnakePath:
    """A discretized excursion / head-path pair on ``m`` grid intervals.

    ``kind`` is ``"raw"`` (plain simulator output), ``"conditioned"`` (head
    minimum kept above ``-r``) or ``"rerooted"`` (head re-read from its
    minimum, hence nonnegative with value 0 at index 0).
    """

    __slots__ = ("m", "excursion", "label", "kind", "r")

    def __init__(self, m: int, excursion, label, kind: str,
                 r: Optional[float] = None, validate: bool = True):
        self.m = int(m)
        self.excursion = np.ascontiguousarray(excursion, dtype=np.float64)
        self.label = np.ascontiguousarray(label, dtype=np.float64)
        self.kind = kind
        self.r = r
        self.excursion.setflags(write=False)
        self.label.setflags(write=False)
        if validate:
            self.validate()

    def validate(self):
        e, z = self.excursion, self.label
        if e.shape != (self.m + 1,) or z.shape != (self.m + 1,):
            raise ValueError("paths need m + 1 grid values")
        if abs(e[0]) > 1e-12 or abs(e[-1]) > 1e-12 or e.min() < -1e-12:
            raise ValueError("excursion must be nonnegative with zero endpoints")
        if abs(z[0]) > 1e-12:
            raise ValueError("head path must start at 0")
        if self.kind == "conditioned":
            if self.r is None or z.min() <= -self.r:
                raise ValueError("conditioned path must keep its head above -r")
        elif self.kind == "rerooted":
            if z.min() < -1e-12:
                raise ValueError("rerooted head path must be nonnegative")
        elif self.kind != "raw":
            raise ValueError(f"unknown kind {self.kind!r}")

    def to_csv(self) -> str:
        lines = [
            f"{t / self.m},{float(e)!r},{float(z)!r}"
            for t, (e, z) in enumerate(zip(self.excursion, self.label))
        ]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"SnakePath(m={self.m}, kind={self.kind!r})"


def sample_snake(m: int, rng) -> SnakePath:
    """Raw snake on ``m`` grid intervals (``m`` even, at least 2).

    The excursion is the contour walk of a uniform plane tree with ``m / 2``
    edges divided by ``sqrt(m)``; each tree edge carries an independent
    centered Gaussian displacement of variance ``1 / sqrt(m)``, so
    ``E[(z_s - z_t)^2 | e]`` equals the tree distance
    ``e_s + e_t - 2 min e[s..t]`` exactly on grid points.
    """
    if m < 2 or m % 2:
        raise ValueError("m must be an even integer >= 2")
    k = m // 2
    tree = sample_gw_conditioned(k, GEOMETRIC_HALF, rng)
    verts, depth = _k.contour_sequence(tree.parent, tree.first_child,
                                       tree.next_sibling)
    disp = rng.normal(0.0, m ** -0.25, size=k + 1)
    heads = _k.labels_from_increments_f(tree.parent, disp)
    e = depth.astype(np.float64) / math.sqrt(m)
    z = heads[verts]
    return SnakePath(m, e, z, "raw", validate=False)


def condition_min(m: int, r: float, rng,
                  max_rejections: int = 10 ** 6) -> SnakePath:
    """Raw snake conditioned on its head staying strictly above ``-r``."""
    if r <= 0:
        raise ValueError("r must be positive")
    for _ in range(max_rejections):
        p = sample_snake(m, rng)
        if p.label.min() > -r:
            return SnakePath(p.m, p.excursion, p.label, "conditioned", r=r,
                             validate=False)
    raise RejectionBudgetExceeded(
        f"head minimum never stayed above {-r} in {max_rejections} draws"
    )


def reroot(p: SnakePath) -> SnakePath:
    """Re-read the pair from the time of the minimal head value.

    With ``s`` the first index of the head minimum (indices 0..m-1, the two
    endpoints being identified), the new excursion at offset ``t`` is the
    tree distance ``e_s + e_j - 2 min e[s..j]`` to ``j = s + t (mod m)`` and
    the new head is ``z_j - z_s``; the result is nonnegative with value 0 at
    offset 0 and wraps back to 0 at offset m.
    """
    m = p.m
    e, z = p.excursion, p.label
    s = int(np.argmin(z[:m]))
    fwd = np.minimum.accumulate(e[s:])            # min e[s..j] for j >= s
    bwd = np.minimum.accumulate(e[: s + 1][::-1])[::-1]   # min e[j..s]
    ov_e = np.concatenate([
        e[s] + e[s:m] - 2.0 * fwd[: m - s],
        e[s] + e[: s + 1] - 2.0 * bwd,
    ])
    ov_z = np.concatenate([z[s:m], z[: s + 1]]) - z[s]
    return SnakePath(m, ov_e, ov_z, "rerooted", validate=False)


def label_distance_bound(p: SnakePath, i: int, j: int) -> float:
    """One-step label bound ``z_i + z_j - 2 min z[i..j]`` on a rerooted path."""
    if p.kind != "rerooted":
        raise ValueError("label distances are defined on rerooted paths")
    lo, hi = (i, j) if i <= j else (j, i)
    z = p.label
    return float(z[i] + z[j] - 2.0 * z[lo : hi + 1].min())


class DistanceGrid:
    """Label-bound matrix on a grid of path indices and its chain closure.

    ``direct[a, b]`` is the one-step bound between grid times ``a`` and
    ``b``; ``closure`` is its min-plus transitive closure, the tightest
    distance obtainable by chaining one-step bounds through grid points.
    """

    __slots__ = ("times", "direct", "closure")

    def __init__(self, times, direct, closure, validate: bool = True):
        self.times = np.asarray(times, dtype=np.int64)
        self.direct = direct
        self.closure = closure
        if validate:
            self.validate()

    def validate(self):
        d, c = self.direct, self.closure
        if (np.abs(np.diagonal(c)) > 1e-12).any():
            raise ValueError("closure diagonal must vanish")
        if not np.allclose(c, c.T, atol=1e-12):
            raise ValueError("closure must be symmetric")
        if (c > d + 1e-12).any():
            raise ValueError("closure must lie below the one-step bound")
        g = len(self.times)
        chained = np.min(c[:, :, None] + c.T[None, :, :], axis=1)
        if (c > chained + 1e-9).any():
            raise ValueError("closure must satisfy the triangle inequality")


def distance_grid(p: SnakePath, times: Sequence[int]) -> DistanceGrid:
    """Evaluate the one-step label bound on all grid pairs and close it
    under chaining (min-plus closure via repeated relaxation)."""
    times = np.asarray(times, dtype=np.int64)
    g = len(times)
    z = p.label
    if p.kind != "rerooted":
        raise ValueError("label distances are defined on rerooted paths")
    direct = np.empty((g, g), dtype=np.float64)
    for a in range(g):
        ta = times[a]
        for b in range(a, g):
            tb = times[b]
            lo, hi = (ta, tb) if ta <= tb else (tb, ta)
            d = z[ta] + z[tb] - 2.0 * z[lo : hi + 1].min()
            direct[a, b] = d
            direct[b, a] = d
    closure = direct.copy()
    for k in range(g):
        np.minimum(closure, closure[:, k][:, None] + closure[k][None, :],
                   out=closure)
    return DistanceGrid(times, direct, closure)


# ---------------------------------------------------------------------------
# sample comparators

def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic (sup gap of empirical CDFs)."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise EmptySample("both samples must be nonempty")
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


def exponent_fit(points: Iterable[tuple[float, float]]) -> float:
    """Least-squares slope of ``log(value)`` against ``log(n)``."""
    pts = list(points)
    if not pts:
        raise EmptySample("no points to fit")
    if len(pts) < 2:
        raise ValueError("need at least two points to fit a slope")
    ns = np.log([p[0] for p in pts])
    vs = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(ns, vs, 1)
    return float(slope)


def moment(sample, k: int) -> float:
    """k-th raw empirical moment."""
    sample = np.asarray(sample, dtype=np.float64)
    if sample.size == 0:
        raise EmptySample("empty sample")
    return float(np.mean(sample ** k))
