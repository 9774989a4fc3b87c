"""Rotation systems: faces, genus, degrees, validation."""

import numpy as np
import pytest

from quadmaps.errors import MalformedMap
from quadmaps.maps import HalfEdgeMap, Quadrangulation, faces, genus
from quadmaps.bijection import quadrangulate
from quadmaps.trees import LabeledTree, PlaneTree


def single_edge_map():
    # one edge between two vertices: darts 0 at vertex 0, 1 at vertex 1
    return HalfEdgeMap.from_rotations([[0], [1]], twin=[1, 0], root_dart=0)


def four_cycle_map():
    # vertices 0..3, edges (0,1),(1,2),(2,3),(3,0); darts 2e, 2e+1
    rotations = [[0, 7], [2, 1], [4, 3], [6, 5]]
    twin = [1, 0, 3, 2, 5, 4, 7, 6]
    return HalfEdgeMap.from_rotations(rotations, twin=twin, root_dart=0)


def torus_map():
    # one vertex, two loops interleaved a b a' b': the square torus diagram
    return HalfEdgeMap.from_rotations([[0, 2, 1, 3]], twin=[1, 0, 3, 2],
                                      root_dart=0)


class TestFacesAndGenus:
    def test_single_edge_one_face_of_degree_two(self):
        m = single_edge_map()
        assert faces(m) == [2]
        assert genus(m) == 0

    def test_four_cycle_two_quadrilateral_faces(self):
        m = four_cycle_map()
        assert sorted(faces(m)) == [4, 4]
        assert genus(m) == 0

    def test_interleaved_loops_have_genus_one(self):
        m = torus_map()
        assert genus(m) == 1
        assert sum(faces(m)) == 4

    def test_face_degrees_sum_to_dart_count(self):
        for m in (single_edge_map(), four_cycle_map(), torus_map()):
            assert sum(m.face_degrees()) == m.dart_count


class TestValidation:
    def test_twin_must_be_involution(self):
        with pytest.raises(MalformedMap):
            HalfEdgeMap(twin=[0, 1], next_dart=[0, 1], origin=[0, 1],
                        root_dart=0, vertex_count=2)

    def test_rotation_must_stay_at_vertex(self):
        with pytest.raises(MalformedMap):
            HalfEdgeMap(twin=[1, 0], next_dart=[1, 0], origin=[0, 1],
                        root_dart=0, vertex_count=2)

    def test_disconnected_map_rejected(self):
        with pytest.raises(MalformedMap):
            HalfEdgeMap(twin=[1, 0, 3, 2], next_dart=[0, 1, 2, 3],
                        origin=[0, 0, 1, 1], root_dart=0, vertex_count=2)

    def test_quadrangulation_counts_enforced(self):
        m = four_cycle_map()
        with pytest.raises(MalformedMap):
            Quadrangulation(m, face_count=3)


class TestQuadrangulationQueries:
    def test_four_cycle_distances_and_degrees(self):
        q = Quadrangulation(four_cycle_map(), face_count=2)
        assert q.min_degree() == 2
        assert q.pendant_vertices() == []
        assert q.bfs_distances(0).tolist() == [0, 1, 2, 1]

    def test_root_distance_zero(self):
        q = Quadrangulate_n1()
        assert q.bfs_distances(0)[0] == 0

    def test_pendant_vertices_of_flat_single_edge_tree(self):
        lt = LabeledTree(PlaneTree([1, 0]), [0, 0])
        q = quadrangulate(lt)
        assert 2 in q.pendant_vertices()
        assert q.min_degree() == 1

    def test_edge_parity(self):
        # every edge joins vertices whose labels differ by exactly one,
        # with the extra root vertex carrying label -1
        lt = LabeledTree(PlaneTree([2, 1, 0, 0]), [0, 1, 1, 0])
        q = quadrangulate(lt)
        ext = np.concatenate([[-1], lt.labels])
        for a, b in q.edge_list():
            assert abs(ext[a] - ext[b]) == 1

    def test_rotation_export_and_edge_csv(self):
        q = Quadrangulate_n1()
        csv = q.to_edge_csv()
        assert csv.startswith("# {")
        assert len(csv.strip().splitlines()) == 1 + q.map.edge_count
        cycles = q.map.rotation_cycles()
        assert sorted(d for cyc in cycles for d in cyc) == list(range(4))


def Quadrangulate_n1():
    return quadrangulate(LabeledTree(PlaneTree([1, 0]), [0, 1]))
