"""Rooted combinatorial maps as rotation systems of half-edges (darts).

A map on ``E`` edges carries ``2E`` darts.  ``twin`` pairs the two darts of
each edge, ``next_dart`` rotates darts around their origin vertex, and faces
are the orbits of ``d -> next_dart[twin[d]]``.  This face convention is fixed
package-wide and pinned by the golden tests on the two-face quadrangulation
of the 4-cycle.
"""

from __future__ import annotations

import json

import numpy as np

from ._backend import kernels as _k
from .errors import MalformedMap, NonIntegerGenus


class HalfEdgeMap:
    """Immutable rotation system with a distinguished root dart."""

    __slots__ = ("twin", "next_dart", "origin", "root_dart", "vertex_count",
                 "edge_count", "_adj")

    def __init__(self, twin, next_dart, origin, root_dart, vertex_count,
                 validate: bool = True):
        self.twin = np.ascontiguousarray(twin, dtype=np.int64)
        self.next_dart = np.ascontiguousarray(next_dart, dtype=np.int64)
        self.origin = np.ascontiguousarray(origin, dtype=np.int64)
        self.root_dart = int(root_dart)
        self.vertex_count = int(vertex_count)
        self.edge_count = len(self.twin) // 2
        self._adj = None
        for a in (self.twin, self.next_dart, self.origin):
            a.setflags(write=False)
        if validate:
            self.validate()

    @classmethod
    def from_rotations(cls, rotations: list[list[int]], twin, root_dart=0):
        """Build a map from explicit per-vertex dart cycles (test helper)."""
        ndarts = sum(len(r) for r in rotations)
        nxt = np.empty(ndarts, dtype=np.int64)
        origin = np.empty(ndarts, dtype=np.int64)
        for v, rot in enumerate(rotations):
            for a, d in enumerate(rot):
                nxt[d] = rot[(a + 1) % len(rot)]
                origin[d] = v
        return cls(twin, nxt, origin, root_dart, len(rotations))

    @property
    def dart_count(self) -> int:
        return len(self.twin)

    def validate(self):
        """Check the rotation-system axioms; raise :class:`MalformedMap`."""
        nd = self.dart_count
        if nd == 0 or nd % 2:
            raise MalformedMap("a map needs a positive even number of darts")
        darts = np.arange(nd)
        if self.twin.shape != (nd,) or (self.twin == darts).any() \
                or not np.array_equal(self.twin[self.twin], darts):
            raise MalformedMap("twin must be a fixed-point-free involution")
        if not np.array_equal(np.sort(self.next_dart), darts):
            raise MalformedMap("next_dart must be a permutation of the darts")
        if (self.origin[self.next_dart] != self.origin).any():
            raise MalformedMap("rotation cycles must stay at one vertex")
        if self.origin.min() < 0 or self.origin.max() >= self.vertex_count:
            raise MalformedMap("dart origin out of range")
        if np.bincount(self.origin, minlength=self.vertex_count).min() == 0:
            raise MalformedMap("every vertex must carry at least one dart")
        if not 0 <= self.root_dart < nd:
            raise MalformedMap("root dart out of range")
        # connectivity over twin and next_dart
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        ones = np.ones(2 * nd, dtype=np.int8)
        rows = np.concatenate([darts, darts])
        cols = np.concatenate([self.twin, self.next_dart])
        graph = coo_matrix((ones, (rows, cols)), shape=(nd, nd))
        pieces, _ = connected_components(graph, directed=False)
        if pieces != 1:
            raise MalformedMap("map is not connected")

    def degrees(self) -> np.ndarray:
        """Vertex degrees, i.e. darts per origin (loops would count twice)."""
        return np.bincount(self.origin, minlength=self.vertex_count)

    def face_degrees(self) -> np.ndarray:
        """Degrees of all faces; their sum is the dart count ``2E``."""
        return _k.face_sizes(self.twin, self.next_dart)

    def genus(self) -> int:
        """Genus from the Euler relation ``V - E + F = 2 - 2g``."""
        chi = self.vertex_count - self.edge_count + len(self.face_degrees())
        if (2 - chi) % 2:
            raise NonIntegerGenus(f"Euler characteristic {chi} is odd")
        return (2 - chi) // 2

    def rotation_cycles(self) -> list[list[int]]:
        """Per-vertex dart cycles, each starting at its smallest dart."""
        first = {}
        for d in range(self.dart_count):
            v = int(self.origin[d])
            if v not in first:
                first[v] = d
        cycles = []
        for v in range(self.vertex_count):
            d0 = first[v]
            cyc = [d0]
            d = int(self.next_dart[d0])
            while d != d0:
                cyc.append(d)
                d = int(self.next_dart[d])
            cycles.append(cyc)
        return cycles

    def adjacency(self):
        """CSR adjacency (indptr, indices) over vertices; parallel edges kept."""
        if self._adj is None:
            order = np.argsort(self.origin, kind="stable")
            indices = self.origin[self.twin[order]]
            counts = np.bincount(self.origin, minlength=self.vertex_count)
            indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._adj = (indptr, np.ascontiguousarray(indices))
        return self._adj

    def bfs_distances(self, source: int) -> np.ndarray:
        """Exact hop counts from ``source`` to every vertex."""
        indptr, indices = self.adjacency()
        return _k.bfs_distances(indptr, indices, self.vertex_count, source)

    def edge_list(self) -> np.ndarray:
        """One row ``(a, b)`` per edge, in dart order (row ``i`` is the edge
        of darts ``2i`` and ``2i + 1``)."""
        ends = self.origin.reshape(-1, 2)
        return ends.copy()


def faces(m: HalfEdgeMap) -> list[int]:
    """Face degrees of the map (validated first)."""
    m.validate()
    return m.face_degrees().tolist()


def genus(m: HalfEdgeMap) -> int:
    return m.genus()


class Quadrangulation:
    """A rooted map all of whose ``n`` faces are quadrilaterals, with the
    root vertex 0 at the tail of the root dart.

    Always planar with ``2n`` edges and ``n + 2`` vertices; ``validate``
    checks exactly that, which is the oracle pinning down the rotation
    conventions of the tree-to-map construction.
    """

    __slots__ = ("map", "face_count")

    def __init__(self, hmap: HalfEdgeMap, face_count: int, validate: bool = True):
        self.map = hmap
        self.face_count = int(face_count)
        if validate:
            self.validate()

    @property
    def root_vertex(self) -> int:
        return int(self.map.origin[self.map.root_dart])

    @property
    def n(self) -> int:
        return self.face_count

    def validate(self):
        m = self.map
        m.validate()
        n = self.face_count
        if m.edge_count != 2 * n or m.vertex_count != n + 2:
            raise MalformedMap("edge or vertex count off for a quadrangulation")
        fd = m.face_degrees()
        if len(fd) != n or (fd != 4).any():
            raise MalformedMap("every face must have degree 4")
        # with V - E + F = (n + 2) - 2n + n = 2 the map is planar already;
        # genus() recomputes the same Euler count, kept for the error message
        if m.genus() != 0:
            raise MalformedMap("quadrangulation must be planar")
        if self.root_vertex != 0:
            raise MalformedMap("root dart must leave vertex 0")

    def degrees(self) -> np.ndarray:
        return self.map.degrees()

    def min_degree(self) -> int:
        return int(self.degrees().min())

    def pendant_vertices(self) -> list[int]:
        """Vertices of degree 1; a map without any is called nice."""
        return np.nonzero(self.degrees() == 1)[0].tolist()

    def bfs_distances(self, source: int) -> np.ndarray:
        return self.map.bfs_distances(source)

    def edge_list(self) -> np.ndarray:
        return self.map.edge_list()

    def header_json(self) -> str:
        return json.dumps(
            {
                "n": self.face_count,
                "root_dart": self.map.root_dart,
                "vertex_count": self.map.vertex_count,
            },
            separators=(",", ":"),
        )

    def to_edge_csv(self) -> str:
        """Edge rows ``a,b`` preceded by one commented JSON header line."""
        lines = [f"# {self.header_json()}"]
        lines.extend(f"{a},{b}" for a, b in self.edge_list())
        return "\n".join(lines) + "\n"

    def rotation_json(self) -> str:
        return json.dumps(self.map.rotation_cycles(), separators=(",", ":"))
