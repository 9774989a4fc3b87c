"""Exact samplers for the labeled-tree families encoding quadrangulations.

The tree layer draws Galton-Watson trees conditioned on their edge count.
Two interchangeable methods are provided:

* ``rejection``: draw ``n + 1`` i.i.d. child counts, retry until they sum to
  ``n``, then rotate the sequence into the unique valid tree (the rotation
  leaves the conditioned law unchanged, and acceptance decays only like
  ``n**-0.5``);
* ``direct``: for the geometric-tailed laws used here the conditioned
  child-count vector is a two-stage mixture, "number of zeros" then a uniform
  positive composition, which samples in one pass without any retry.  The two
  methods produce identical distributions and the test suite cross-checks
  them; ``direct`` is the default since the label-level rejection above it
  already costs a factor of order ``n``.

The label layer attaches i.i.d. uniform ``{-1, 0, 1}`` edge increments,
optionally overridden to ``-1`` into every non-root leaf, and the family
samplers redraw the whole tree-and-label pair until the wanted event holds
(redrawing only the labels would skew the tree marginal).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import gammaln

from ._backend import kernels as _k
from ._kernels_py import seed_prng_state
from .errors import BudgetExceeded, RejectionBudgetExceeded
from .trees import LabeledTree, PlaneTree, classify

_NO_FLOOR = np.iinfo(np.int64).min


@dataclass(frozen=True)
class OffspringLaw:
    """Child-count law with mass ``zero_mass`` at 0 and a geometric tail
    ``tail_coeff * tail_ratio**k`` for ``k >= 1``."""

    zero_mass: float
    tail_coeff: float
    tail_ratio: float
    name: str

    @classmethod
    def critical_quadrangulation(cls) -> "OffspringLaw":
        """The critical law whose conditioned trees carry uniform
        leaf-decreasing labelings: mass ``1 / (3 z)`` at zero and
        ``beta**k / z`` at ``k >= 1`` with ``beta = (sqrt(3) - 1) / 2`` and
        ``z = (sqrt(3) + 1) / 3``.  Mean 1, variance ``2 / sqrt(3)``."""
        s3 = math.sqrt(3.0)
        beta = (s3 - 1.0) / 2.0
        z = (s3 + 1.0) / 3.0
        return cls(1.0 / (3.0 * z), 1.0 / z, beta, "critical-quadrangulation")

    @classmethod
    def geometric_half(cls) -> "OffspringLaw":
        """Geometric(1/2) on {0, 1, 2, ...}; its conditioned trees are the
        uniform plane trees.  Mean 1, variance 2."""
        return cls(0.5, 0.5, 0.5, "geometric-half")

    @property
    def beta(self) -> float:
        return self.tail_ratio

    @property
    def z_beta(self) -> float:
        """Normalizing constant of the tail weights (``1 / tail_coeff``)."""
        return 1.0 / self.tail_coeff

    @property
    def theta(self) -> float:
        """Relative weight of a zero entry in a sum-conditioned vector."""
        return self.zero_mass / self.tail_coeff

    def pmf(self, k):
        k = np.asarray(k)
        with np.errstate(over="ignore"):
            tail = self.tail_coeff * self.tail_ratio ** k
        return np.where(k == 0, self.zero_mass, tail)

    def mean(self) -> float:
        r = self.tail_ratio
        return self.tail_coeff * r / (1.0 - r) ** 2

    def variance(self) -> float:
        r = self.tail_ratio
        second = self.tail_coeff * r * (1.0 + r) / (1.0 - r) ** 3
        return second - self.mean() ** 2

    def total_mass(self) -> float:
        r = self.tail_ratio
        return self.zero_mass + self.tail_coeff * r / (1.0 - r)

    def sample(self, rng, size):
        """I.i.d. draws; the tail is inverted through its geometric form."""
        u = rng.random(size)
        tail = rng.geometric(1.0 - self.tail_ratio, size)
        return np.where(u < self.zero_mass, 0, tail).astype(np.int64)


MU = OffspringLaw.critical_quadrangulation()
GEOMETRIC_HALF = OffspringLaw.geometric_half()


@dataclass(frozen=True)
class SamplerConfig:
    """Reproducibility knobs shared by all samplers.

    Streams keyed by ``(seed, stream_id)`` are independent and deterministic,
    so work can be fanned out by stream and merged in index order.
    """

    n: Optional[int] = None
    seed: int = 0
    max_rejections: int = 10 ** 6
    stream_id: int = 0

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise ValueError("n must be at least 1")
        if self.max_rejections <= 0:
            raise ValueError("max_rejections must be positive")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.stream_id])


# ---------------------------------------------------------------------------
# conditioned offspring vectors

_zero_cdf_cache: dict = {}
_zero_cdf_lock = threading.Lock()


def _zero_count_cdf(n: int, theta: float) -> np.ndarray:
    """CDF of the zero count of a sum-``n`` conditioned child-count vector.

    A vector with ``z`` zeros among ``n + 1`` slots has relative weight
    ``theta**z``, and there are ``binom(n + 1, z) * binom(n - 1, n - z)``
    of them, so ``z`` is drawn from that mixture (entry ``k`` of the CDF is
    the probability of at most ``k + 1`` zeros) and the vector is uniform
    given ``z``.
    """
    key = (n, theta)
    got = _zero_cdf_cache.get(key)
    if got is not None:
        return got
    nverts = n + 1
    zs = np.arange(1, n + 1, dtype=np.int64)
    p = nverts - zs
    logw = (
        gammaln(nverts + 1) - gammaln(zs + 1) - gammaln(nverts - zs + 1)
        + gammaln(n) - gammaln(p) - gammaln(n - p + 1)
        + zs * math.log(theta)
    )
    logw -= logw.max()
    w = np.exp(logw)
    cdf = np.cumsum(w)
    cdf /= cdf[-1]
    cdf.setflags(write=False)
    with _zero_cdf_lock:
        _zero_cdf_cache.setdefault(key, cdf)
    return _zero_cdf_cache[key]


def _fresh_state(rng) -> np.ndarray:
    """Seed an in-kernel random stream from the caller's generator."""
    return seed_prng_state(int(rng.integers(0, 2 ** 64, dtype=np.uint64)))


def _rotate_to_tree(codes):
    """Rotate a sum-valid child-count vector at the first minimum of its
    partial-sum walk, the unique rotation encoding a tree."""
    walk = np.cumsum(codes) - np.arange(1, len(codes) + 1)
    start = int(np.argmin(walk)) + 1
    if start == len(codes):
        return np.ascontiguousarray(codes)
    return np.concatenate([codes[start:], codes[:start]])


def _sample_pair(n, theta, force_leaf, floor, require_root_event, rng,
                 max_rejections):
    """Whole-pair rejection loop over (tree, labels); returns
    ``(codes, labels, attempts)``."""
    nverts = n + 1
    out_codes = np.empty(nverts, dtype=np.int64)
    out_labels = np.empty(nverts, dtype=np.int64)
    cdf = _zero_count_cdf(n, theta)
    state = _fresh_state(rng)
    used = _k.sample_labeled_batch(
        n, cdf, state, max_rejections, force_leaf, floor, require_root_event,
        out_codes, out_labels,
    )
    if used == 0:
        raise RejectionBudgetExceeded(
            f"no acceptance within {max_rejections} tree-label proposals (n={n})"
        )
    return out_codes, out_labels, used


def sample_gw_conditioned(
    n: int,
    law: OffspringLaw,
    rng: np.random.Generator,
    method: str = "direct",
    max_rejections: int = 10 ** 6,
) -> PlaneTree:
    """Galton-Watson tree with offspring ``law`` conditioned on ``n`` edges.

    ``method="rejection"`` draws i.i.d. child counts and retries until their
    sum is ``n``; ``method="direct"`` samples the conditioned vector in one
    pass.  Both finish with the tree rotation, and both are exact.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    nverts = n + 1
    if method == "direct":
        codes, _, _ = _sample_pair(n, law.theta, False, _NO_FLOOR, False, rng, 1)
        return PlaneTree(codes)
    if method != "rejection":
        raise ValueError("method must be 'direct' or 'rejection'")
    batch = max(8, int(2.6 * math.sqrt(nverts)))
    attempts = 0
    while attempts < max_rejections:
        b = min(batch, max_rejections - attempts)
        draws = law.sample(rng, (b, nverts))
        sums = draws.sum(axis=1)
        hits = np.nonzero(sums == n)[0]
        if hits.size:
            attempts += int(hits[0]) + 1
            return PlaneTree(_rotate_to_tree(draws[hits[0]]))
        attempts += b
    raise RejectionBudgetExceeded(
        f"no child-count vector summed to {n} within {max_rejections} draws"
    )


def attach_leaf_decreasing_labels(tree: PlaneTree, rng) -> LabeledTree:
    """Uniform ``{-1, 0, 1}`` increments on all edges, then every edge into a
    non-root leaf overridden to ``-1``.

    Together with the conditioned tree of :data:`MU` this puts the uniform
    distribution on the size-``n`` leaf-decreasing family.
    """
    nverts = tree.n + 1
    inc = rng.integers(-1, 2, size=nverts)
    inc[tree.leaves()] = -1
    labels = _k.labels_from_increments(tree.parent, inc)
    return LabeledTree(tree, labels, validate=False)


def _as_budget(cfg: Optional[SamplerConfig]) -> int:
    return cfg.max_rejections if cfg is not None else 10 ** 6


def _as_rng(cfg: Optional[SamplerConfig], rng):
    if rng is not None:
        return rng
    return (cfg or SamplerConfig()).rng()


def sample_well_labeled_tree(n: int, cfg: Optional[SamplerConfig] = None,
                             rng=None) -> LabeledTree:
    """Uniform tree with uniform labels conditioned on all labels >= 0:
    the uniform law on size-``n`` well-labeled trees (one per rooted
    quadrangulation with ``n`` faces)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(cfg, rng)
    codes, labels, _ = _sample_pair(
        n, GEOMETRIC_HALF.theta, False, 0, False, rng, _as_budget(cfg)
    )
    return LabeledTree(PlaneTree(codes), labels, validate=False)


def sample_nice_tree(n: int, cfg: Optional[SamplerConfig] = None,
                     rng=None) -> LabeledTree:
    """Uniform tree over the family encoding pendant-free quadrangulations:
    leaf-decreasing labels, all labels nonnegative, and the root has two
    children or one child labeled 1 plus another vertex labeled 0.

    Nonempty only for ``n >= 2``.  The whole pair is redrawn on rejection.
    """
    if n < 2:
        raise ValueError("pendant-free quadrangulations need n >= 2")
    rng = _as_rng(cfg, rng)
    codes, labels, _ = _sample_pair(
        n, MU.theta, True, 0, True, rng, _as_budget(cfg)
    )
    return LabeledTree(PlaneTree(codes), labels, validate=False)


def sample_leaf_decreasing_tree(n: int, cfg: Optional[SamplerConfig] = None,
                                rng=None) -> LabeledTree:
    """Uniform labeled tree in the leaf-decreasing family (no further
    conditioning)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _as_rng(cfg, rng)
    codes, labels, _ = _sample_pair(
        n, MU.theta, True, _NO_FLOOR, False, rng, _as_budget(cfg)
    )
    return LabeledTree(PlaneTree(codes), labels, validate=False)


def sample_floor_conditioned_tree(n: int, floor: int,
                                  cfg: Optional[SamplerConfig] = None,
                                  rng=None) -> LabeledTree:
    """Uniform leaf-decreasing labeled tree conditioned on every label
    staying ``>= -floor`` (``floor`` is given as a nonnegative level)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if floor < 0:
        raise ValueError("floor must be a nonnegative level")
    rng = _as_rng(cfg, rng)
    codes, labels, _ = _sample_pair(
        n, MU.theta, True, -floor, False, rng, _as_budget(cfg)
    )
    return LabeledTree(PlaneTree(codes), labels, validate=False)


# ---------------------------------------------------------------------------
# exhaustive enumeration

_ENUM_EDGE_GUARD = 8

_PREDICATES: dict = {
    "all": None,
    "nonneg": "nonneg",
    "leaf-decreasing": "leaf_decreasing",
    "root-event": "root_event",
    "nice": "nice_family",
}


def _plane_tree_codes(n: int):
    """Preorder child-count sequences of all plane trees with ``n`` edges,
    in a fixed recursion order."""
    if n == 0:
        yield [0]
        return
    # root with first subtree of j edges and the remaining forest reattached
    def forests(e):
        # sequences of subtrees using e edges in total (each subtree costs
        # one connecting edge plus its own edges)
        if e == 0:
            yield (0, [])
            return
        for c in range(1, e + 1):
            for sub in _plane_tree_codes(c - 1):
                for cnt, rest in forests(e - c):
                    yield (cnt + 1, sub + rest)

    for cnt, body in forests(n):
        yield [cnt] + body


def enumerate_labeled_trees(
    n: int,
    predicate: Union[None, str, Callable[[LabeledTree], bool]] = None,
) -> list[LabeledTree]:
    """All labeled trees with ``n`` edges satisfying ``predicate``.

    ``predicate`` is one of the family names ``"all"``, ``"nonneg"``,
    ``"leaf-decreasing"``, ``"root-event"``, ``"nice"`` or any callable on
    labeled trees.  Deterministic order.  Guarded at ``n <= 8``.
    """
    if n > _ENUM_EDGE_GUARD:
        raise BudgetExceeded(f"enumeration is guarded at n <= {_ENUM_EDGE_GUARD}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(predicate, str):
        if predicate not in _PREDICATES:
            raise ValueError(f"unknown predicate {predicate!r}")
        flag = _PREDICATES[predicate]
        test = (lambda lt: True) if flag is None else (
            lambda lt: getattr(classify(lt), flag)
        )
    elif predicate is None:
        test = lambda lt: True
    else:
        test = predicate

    if n == 0:
        lt = LabeledTree(PlaneTree([0]), [0])
        return [lt] if test(lt) else []

    inc_grid = np.array(
        np.meshgrid(*([[-1, 0, 1]] * n), indexing="ij")
    ).reshape(n, -1).T  # lexicographic rows over {-1,0,1}^n

    out = []
    for codes in _plane_tree_codes(n):
        tree = PlaneTree(codes)
        labels = np.zeros((inc_grid.shape[0], n + 1), dtype=np.int64)
        for i in range(1, n + 1):
            labels[:, i] = labels[:, tree.parent[i]] + inc_grid[:, i - 1]
        for row in labels:
            lt = LabeledTree(tree, row, validate=False)
            if test(lt):
                out.append(lt)
    return out
