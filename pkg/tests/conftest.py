"""Shared brute-force oracles, deliberately independent of the package
internals: trees are nested tuples, walks are recursive, probabilities come
from first principles."""

import itertools
from functools import lru_cache

import numpy as np
import pytest
from scipy.stats import chi2

from quadmaps.trees import LabeledTree, PlaneTree


@lru_cache(maxsize=None)
def tree_shapes(edges):
    """All plane trees with the given edge count, as nested child tuples."""
    if edges == 0:
        return ((),)
    out = []
    for c in range(1, edges + 1):
        for first in tree_shapes(c - 1):
            for rest in tree_shapes(edges - c):
                out.append((first,) + rest)
    return tuple(out)


def shape_codes(shape):
    """Preorder child counts of a nested-tuple tree."""
    codes = [len(shape)]
    for child in shape:
        codes.extend(shape_codes(child))
    return codes


def contour_addresses(shape, prefix=()):
    """Backtracking walk of a nested-tuple tree, as address tuples."""
    seq = [prefix]
    for i, child in enumerate(shape):
        seq.extend(contour_addresses(child, prefix + (i + 1,)))
        seq.append(prefix)
    return seq


def labeled_trees_bruteforce(n, keep=None):
    """All labeled trees with n edges (as LabeledTree), optionally filtered."""
    for shape in tree_shapes(n):
        tree = PlaneTree(shape_codes(shape))
        for incs in itertools.product((-1, 0, 1), repeat=n):
            labels = np.zeros(n + 1, dtype=np.int64)
            for i in range(1, n + 1):
                labels[i] = labels[tree.parent[i]] + incs[i - 1]
            lt = LabeledTree(tree, labels, validate=False)
            if keep is None or keep(lt):
                yield lt


def wplus_bruteforce(n):
    return labeled_trees_bruteforce(n, keep=lambda lt: lt.labels.min() >= 0)


def chi2_uniform_pvalue(counts):
    """P-value of Pearson's test against the uniform law over the cells."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    k = len(counts)
    if k <= 1:
        return 1.0
    expected = total / k
    stat = float(((counts - expected) ** 2 / expected).sum())
    return float(chi2.sf(stat, k - 1))


def count_keys(samples):
    """Frequency table keyed by the canonical form of each labeled tree."""
    out = {}
    for lt in samples:
        key = lt.key()
        out[key] = out.get(key, 0) + 1
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
