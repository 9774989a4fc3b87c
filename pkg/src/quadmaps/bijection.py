"""From well-labeled trees to rooted quadrangulations.

Every corner of the contour walk sends one arc: to the corner whose label is
one less (the cyclically next such corner), or to an extra vertex 0 when the
corner label is already 0.  The arcs are the edges of a quadrangulation whose
graph distances from vertex 0 reproduce the tree labels plus one.

Vertex numbering of the output: 0 is the extra root-side vertex, tree
vertices keep ``1 + (first-visit index)`` so results are deterministic.
"""

from __future__ import annotations

import numpy as np

from ._backend import kernels as _k
from .errors import NotWellLabeled
from .maps import HalfEdgeMap, Quadrangulation
from .trees import LabeledTree


def corner_data(lt: LabeledTree):
    """Per-corner vertex ids and labels: ``(corner_vertex, corner_labels)``.

    Corner ``i`` is step ``i`` of the contour walk, ``i = 0 .. 2n - 1``;
    vertex ids are shifted by one so that 0 is free for the extra vertex.
    """
    tree = lt.tree
    verts, _ = _k.contour_sequence(tree.parent, tree.first_child, tree.next_sibling)
    corners = verts[:-1]
    return corners + 1, lt.labels[corners]


def corner_successors(lt: LabeledTree) -> np.ndarray:
    """For each corner, the corner its arc lands in (``-1``: arc to vertex 0).

    The target of corner ``i`` is the first corner ``j`` after ``i`` in the
    cyclic contour order with label one less than corner ``i``'s.
    """
    _, corner_labels = corner_data(lt)
    return _k.corner_successors(corner_labels)


def quadrangulate(lt: LabeledTree) -> Quadrangulation:
    """The rooted quadrangulation encoded by a well-labeled tree.

    Requires at least one edge and nonnegative labels, otherwise
    :class:`NotWellLabeled` is raised.  The output has ``n`` quadrilateral
    faces, ``2n`` edges and ``n + 2`` vertices; its root dart is the end at
    vertex 0 of the arc leaving corner 0.
    """
    if lt.n < 1:
        raise NotWellLabeled("need at least one edge")
    if lt.labels.min() < 0:
        raise NotWellLabeled("labels must be nonnegative")
    corner_vertex, corner_labels = corner_data(lt)
    succ = _k.corner_successors(corner_labels)
    twin, nxt, origin = _k.assemble_rotation(corner_vertex, succ)
    hmap = HalfEdgeMap(twin, nxt, origin, root_dart=1,
                       vertex_count=lt.n + 2, validate=False)
    return Quadrangulation(hmap, face_count=lt.n)


def verify_root_distance(lt: LabeledTree, q: Quadrangulation) -> bool:
    """True iff graph distance from vertex 0 equals label + 1 for every tree
    vertex of the quadrangulation built from ``lt``."""
    dist = q.bfs_distances(0)
    return bool(np.array_equal(dist[1:], lt.labels + 1))


def pendant_leaf_count(lt: LabeledTree) -> int:
    """Number of non-root leaves whose label does not step down from the
    parent; each one becomes a degree-1 vertex of the quadrangulation."""
    tree = lt.tree
    leaf = tree.leaves()
    if not leaf.any():
        return 0
    idx = np.nonzero(leaf)[0]
    return int(np.count_nonzero(lt.labels[idx] >= lt.labels[tree.parent[idx]]))


def corner_pair_bound_violations(lt: LabeledTree, q: Quadrangulation) -> int:
    """Count corner pairs violating the label upper bound on distances.

    For corners ``i <= j`` with labels ``V`` the bound is
    ``d(u_i, u_j) <= V_i + V_j - 2 * min(V[i..j]) + 2``.  Returns the number
    of failing pairs (0 for every valid quadrangulation).
    """
    corner_vertex, V = corner_data(lt)
    m = len(V)
    nv = q.map.vertex_count
    dist = np.empty((nv, nv), dtype=np.int64)
    for s in range(nv):
        dist[s] = q.bfs_distances(s)

    # running minimum of V over corner windows [i..j], j >= i
    V = V.astype(np.int64)
    window_min = np.full((m, m), np.iinfo(np.int64).max, dtype=np.int64)
    idx = np.arange(m)
    for i in range(m):
        window_min[i, i:] = np.minimum.accumulate(V[i:])

    bound = V[:, None] + V[None, :] - 2 * window_min + 2
    d = dist[corner_vertex[:, None], corner_vertex[None, :]]
    upper = idx[:, None] <= idx[None, :]
    return int(np.count_nonzero((d > bound) & upper))
