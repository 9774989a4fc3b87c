"""Tree structure, contour codings and family predicates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import contour_addresses, labeled_trees_bruteforce, tree_shapes, shape_codes
from quadmaps.errors import InconsistentLabels, MalformedContour
from quadmaps.sampling import sample_well_labeled_tree
from quadmaps.trees import (
    ContourCoding,
    LabeledTree,
    PlaneTree,
    classify,
    contour_sequence,
    decode,
    encode,
    first_passage_candidates,
    first_passage_split,
)


def lt_from(children, labels):
    tree, order = PlaneTree.from_children(children)
    return LabeledTree(tree, np.asarray(labels)[order])


class TestPlaneTree:
    def test_single_vertex(self):
        t = PlaneTree([0])
        assert t.n == 0
        assert contour_sequence(t).tolist() == [0]

    def test_single_edge_contour(self):
        t = PlaneTree([1, 0])
        assert contour_sequence(t).tolist() == [0, 1, 0]

    def test_two_branch_contour_matches_hand_trace(self):
        # tree with children {1, 2} at the root, vertex 1 having one child
        t, _ = PlaneTree.from_children([[1, 3], [2], [], []])
        seq = contour_sequence(t)
        assert [t.address(int(v)) for v in seq] == [
            (), (1,), (1, 1), (1,), (), (2,), ()
        ]
        heights = [len(t.address(int(v))) for v in seq]
        assert heights == [0, 1, 2, 1, 0, 1, 0]

    @pytest.mark.parametrize("n", range(7))
    def test_contour_against_recursive_walk(self, n):
        for shape in tree_shapes(n):
            tree = PlaneTree(shape_codes(shape))
            got = [tree.address(int(v)) for v in contour_sequence(tree)]
            assert got == contour_addresses(shape)

    def test_contour_length_and_step_counts(self, rng):
        for _ in range(25):
            lt = sample_well_labeled_tree(int(rng.integers(1, 60)), rng=rng)
            seq = contour_sequence(lt.tree)
            assert len(seq) == 2 * lt.n + 1
            cc = encode(lt)
            steps = np.diff(cc.heights)
            assert (steps == 1).sum() == lt.n
            assert (steps == -1).sum() == lt.n

    def test_rejects_bad_codes(self):
        with pytest.raises(ValueError):
            PlaneTree([2, 0])      # sum mismatch
        with pytest.raises(ValueError):
            PlaneTree([0, 1, 0])   # root closed before the others
        with pytest.raises(ValueError):
            PlaneTree([-1, 2])

    def test_from_children_requires_tree(self):
        with pytest.raises(ValueError):
            PlaneTree.from_children([[1], [0]])   # cycle
        with pytest.raises(ValueError):
            PlaneTree.from_children([[1], [1]])   # repeated child

    def test_subtree_sizes(self):
        t, _ = PlaneTree.from_children([[1, 3], [2], [], []])
        assert t.subtree_sizes().tolist() == [3, 1, 0, 0]


class TestEncodeDecode:
    def test_single_edge_label_one(self):
        lt = lt_from([[1], []], [0, 1])
        cc = encode(lt)
        assert cc.heights.tolist() == [0, 1, 0]
        assert cc.label_seq.tolist() == [0, 1, 0]

    def test_path_two_edges(self):
        lt = lt_from([[1], [2], []], [0, 1, 0])
        cc = encode(lt)
        assert cc.heights.tolist() == [0, 1, 2, 1, 0]
        assert cc.label_seq.tolist() == [0, 1, 0, 1, 0]
        assert decode(cc) == lt

    def test_cherry_zero_labels(self):
        lt = lt_from([[1, 2], [], []], [0, 0, 0])
        cc = encode(lt)
        assert cc.heights.tolist() == [0, 1, 0, 1, 0]
        assert cc.label_seq.tolist() == [0, 0, 0, 0, 0]

    def test_decode_single_edge(self):
        lt = decode(ContourCoding([0, 1, 0], [0, 1, 0]))
        assert lt.n == 1 and lt.labels.tolist() == [0, 1]

    def test_decode_rejects_label_jump(self):
        with pytest.raises(InconsistentLabels):
            decode([0, 1, 0], [0, 2, 0])

    def test_decode_rejects_revisit_mismatch(self):
        # vertex 1 is visited at steps 1 and 3 with different labels
        heights = [0, 1, 2, 1, 2, 1, 0]
        labels = [0, 1, 1, 0, 0, 1, 0]
        with pytest.raises(InconsistentLabels):
            decode(heights, labels)

    def test_malformed_contours(self):
        with pytest.raises(MalformedContour):
            decode([0, 1, 1, 0], [0, 0, 0, 0])      # even length
        with pytest.raises(MalformedContour):
            decode([0, 2, 0], [0, 0, 0])            # jump by 2
        with pytest.raises(MalformedContour):
            decode([0, 1, 0, -1, 0], [0, 0, 0, 0, 0])
        with pytest.raises(MalformedContour):
            decode([1, 0, 1], [0, 0, 0])

    @pytest.mark.parametrize("n", range(7))
    def test_roundtrip_exhaustive(self, n):
        for lt in labeled_trees_bruteforce(n):
            assert decode(encode(lt)) == lt

    def test_roundtrip_random_large(self, rng):
        for _ in range(60):
            lt = sample_well_labeled_tree(int(rng.integers(1, 400)), rng=rng)
            assert decode(encode(lt)) == lt

    @given(st.integers(0, 2 ** 32 - 1), st.integers(1, 80))
    @settings(max_examples=40, deadline=None)
    def test_roundtrip_property(self, seed, n):
        lt = sample_well_labeled_tree(n, rng=np.random.default_rng(seed))
        assert decode(encode(lt)) == lt

    def test_csv_roundtrip(self):
        lt = lt_from([[1], [2], []], [0, 1, 0])
        cc = encode(lt)
        assert ContourCoding.from_csv(cc.to_csv()) == cc


class TestClassify:
    def test_unique_nice_two_edge_tree(self):
        flags = classify(lt_from([[1], [2], []], [0, 1, 0]))
        assert all(
            [flags.nonneg, flags.leaf_decreasing, flags.root_event,
             flags.nice_local, flags.nice_family]
        )

    def test_cherry_is_not_leaf_decreasing(self):
        flags = classify(lt_from([[1, 2], [], []], [0, 0, 0]))
        assert flags.nonneg and not flags.leaf_decreasing
        assert not flags.nice_family

    def test_single_vertex(self):
        flags = classify(LabeledTree(PlaneTree([0]), [0]))
        assert flags.nonneg and not flags.root_event
        assert not flags.nice_local and not flags.nice_family

    @pytest.mark.parametrize("n", range(1, 7))
    def test_local_equals_family_on_nonnegative_trees(self, n):
        for lt in labeled_trees_bruteforce(n):
            flags = classify(lt)
            if flags.nonneg:
                assert flags.nice_local == flags.nice_family, lt


class TestFirstPassageSplit:
    def test_single_edge(self):
        lt = lt_from([[1], []], [0, 1])
        upper, lower, w = first_passage_split(lt, 1)
        assert w == 1
        assert upper.n == 1 and upper.labels.tolist() == [0, 1]
        assert lower.n == 0 and lower.labels.tolist() == [0]

    def test_no_vertex_reaches_level(self):
        lt = lt_from([[1], []], [0, 0])
        assert first_passage_split(lt, 1) is None

    def test_first_passage_skips_ancestor_levels(self):
        lt = lt_from([[1], [2], []], [0, 1, 2])
        upper, lower, w = first_passage_split(lt, 2)
        assert lt.tree.address(w) == (1, 1)
        assert first_passage_candidates(lt, 2).tolist() == [2]

    def test_level_must_be_positive(self):
        with pytest.raises(ValueError):
            first_passage_candidates(lt_from([[1], []], [0, 1]), 0)

    def test_conservation_on_random_trees(self, rng):
        hits = 0
        for _ in range(200):
            lt = sample_well_labeled_tree(int(rng.integers(2, 80)), rng=rng)
            level = int(rng.integers(1, 4))
            got = first_passage_split(lt, level)
            if got is None:
                assert len(first_passage_candidates(lt, level)) == 0
                continue
            hits += 1
            upper, lower, w = got
            assert upper.n + lower.n == lt.n
            assert lower.labels[0] == 0
            assert lt.labels[w] == level      # increments rise by at most 1
            # vertex sets partition, with w shared
            assert upper.n + 1 + lower.n + 1 == lt.n + 2
        assert hits > 50

    def test_selection_rule(self, rng):
        lt = sample_well_labeled_tree(60, rng=rng)
        sizes = lt.tree.subtree_sizes()
        big = lambda t, v: sizes[v] >= 10
        got = first_passage_split(lt, 1, rule=big)
        if got is not None:
            _, lower, w = got
            assert lower.n == sizes[w] >= 10


class TestJson:
    def test_roundtrip(self):
        lt = lt_from([[1, 3], [2], [], []], [0, 1, 0, 1])
        again = LabeledTree.from_json(lt.to_json())
        assert again == lt

    def test_reindexing(self):
        # same tree with scrambled vertex ids
        doc = '{"n":2,"children":[[2],[],[1]],"labels":[0,0,1]}'
        lt = LabeledTree.from_json(doc)
        assert lt.labels.tolist() == [0, 1, 0]

    def test_label_rules_enforced(self):
        with pytest.raises(InconsistentLabels):
            lt_from([[1], []], [0, 2])
        with pytest.raises(InconsistentLabels):
            lt_from([[1], []], [1, 1])
