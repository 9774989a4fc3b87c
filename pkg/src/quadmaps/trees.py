"""Plane trees with integer vertex labels and their contour codings.

Trees are stored as flat arrays indexed in depth-first first-visit order:
vertex 0 is the root and every vertex has a larger index than its parent.
The primary representation is the preorder child-count sequence ``codes``;
parent / first-child / next-sibling pointers are derived once at
construction.  Address tuples in the style ``(1, 2)`` for "second child of
the first child of the root" are available as a view.

All objects are immutable after construction (arrays are marked read-only),
so they are safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ._backend import kernels as _k
from .errors import InconsistentLabels, MalformedContour


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


class PlaneTree:
    """Rooted ordered tree with ``n`` edges and ``n + 1`` vertices."""

    __slots__ = ("codes", "parent", "first_child", "next_sibling", "n")

    def __init__(self, codes):
        codes = np.ascontiguousarray(codes, dtype=np.int64)
        if codes.ndim != 1 or codes.size == 0:
            raise ValueError("codes must be a nonempty 1-d sequence")
        if codes.min() < 0 or int(codes.sum()) != codes.size - 1:
            raise ValueError("child counts must be nonnegative and sum to the edge count")
        parent, first_child, next_sibling = _k.tree_from_codes(codes)
        self.codes = codes
        self.parent = parent
        self.first_child = first_child
        self.next_sibling = next_sibling
        self.n = codes.size - 1
        _freeze(codes, parent, first_child, next_sibling)

    @classmethod
    def from_children(cls, children: list[list[int]]) -> tuple["PlaneTree", np.ndarray]:
        """Build a tree from per-vertex child lists with arbitrary vertex ids.

        Vertex 0 must be the root.  Returns the tree together with ``order``,
        the old id of each vertex in the new depth-first indexing, so callers
        can permute per-vertex data the same way.
        """
        nverts = len(children)
        codes = np.empty(nverts, dtype=np.int64)
        order = np.empty(nverts, dtype=np.int64)
        seen = np.zeros(nverts, dtype=bool)
        stack = [0]
        pos = 0
        while stack:
            v = stack.pop()
            if not 0 <= v < nverts or seen[v]:
                raise ValueError("children lists do not form a tree rooted at 0")
            seen[v] = True
            order[pos] = v
            codes[pos] = len(children[v])
            pos += 1
            stack.extend(reversed(children[v]))
        if pos != nverts:
            raise ValueError("children lists do not form a tree rooted at 0")
        return cls(codes), order

    def children_count(self, v: int) -> int:
        return int(self.codes[v])

    def children(self, v: int) -> list[int]:
        out = []
        c = self.first_child[v]
        while c >= 0:
            out.append(int(c))
            c = self.next_sibling[c]
        return out

    def address(self, v: int) -> tuple[int, ...]:
        """Address of vertex ``v`` as the tuple of child ranks along its
        root path (the root has the empty address)."""
        path = []
        while v != 0:
            p = self.parent[v]
            rank = 1
            c = self.first_child[p]
            while c != v:
                rank += 1
                c = self.next_sibling[c]
            path.append(rank)
            v = int(p)
        return tuple(reversed(path))

    def leaves(self) -> np.ndarray:
        """Boolean mask of non-root vertices with no children."""
        mask = self.codes == 0
        mask = mask.copy()
        mask[0] = False
        return mask

    def subtree_sizes(self) -> np.ndarray:
        """Edge count of the subtree hanging below each vertex."""
        return _k.subtree_sizes(self.parent)

    def __eq__(self, other):
        return isinstance(other, PlaneTree) and np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash(self.codes.tobytes())

    def __repr__(self):
        return f"PlaneTree(n={self.n})"


class LabeledTree:
    """A plane tree with one integer label per vertex.

    The root label is 0 and labels change by at most 1 along every edge;
    construction fails with :class:`InconsistentLabels` otherwise.
    """

    __slots__ = ("tree", "labels")

    def __init__(self, tree: PlaneTree, labels, validate: bool = True):
        labels = np.ascontiguousarray(labels, dtype=np.int64)
        if labels.shape != (tree.n + 1,):
            raise ValueError("one label per vertex required")
        if validate:
            if labels[0] != 0:
                raise InconsistentLabels("root label must be 0")
            if tree.n:
                jumps = labels[1:] - labels[tree.parent[1:]]
                if np.abs(jumps).max() > 1:
                    raise InconsistentLabels("labels may change by at most 1 per edge")
        self.tree = tree
        self.labels = labels
        _freeze(labels)

    @property
    def n(self) -> int:
        return self.tree.n

    def key(self) -> bytes:
        """Hashable canonical form, useful as a frequency-count key."""
        return self.tree.codes.tobytes() + self.labels.tobytes()

    def __eq__(self, other):
        return (
            isinstance(other, LabeledTree)
            and self.tree == other.tree
            and np.array_equal(self.labels, other.labels)
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"LabeledTree(n={self.n}, labels={self.labels.tolist()})"

    def to_json(self) -> str:
        children = [self.tree.children(v) for v in range(self.n + 1)]
        return json.dumps(
            {"n": self.n, "children": children, "labels": self.labels.tolist()},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "LabeledTree":
        doc = json.loads(text)
        tree, order = PlaneTree.from_children(doc["children"])
        labels = np.asarray(doc["labels"], dtype=np.int64)[order]
        lt = cls(tree, labels)
        if lt.n != doc["n"]:
            raise ValueError("edge count does not match the children lists")
        return lt


@dataclass(frozen=True)
class TreeClasses:
    """Membership flags of a labeled tree in the families the samplers target.

    ``nice_local`` re-derives niceness from leaf labels and corner visits
    alone, ``nice_family`` from family membership; the two agree whenever
    ``nonneg`` holds, and the test suite checks that equivalence exhaustively.
    """

    nonneg: bool            # every label >= 0
    leaf_decreasing: bool   # label steps down by 1 into every non-root leaf
    root_event: bool        # >= 2 root children, or one child labeled 1 plus
                            # another vertex labeled 0
    nice_local: bool        # every leaf one below its neighbour, and some
                            # corner other than the first carries label 0
    nice_family: bool       # nonneg and leaf_decreasing and root_event


def contour_sequence(tree: PlaneTree) -> np.ndarray:
    """Vertices visited by the depth-first walk around the tree, ``2n + 1``
    entries beginning and ending at the root."""
    verts, _ = _k.contour_sequence(tree.parent, tree.first_child, tree.next_sibling)
    return verts


class ContourCoding:
    """Paired height / label sequences of a labeled tree read along the
    contour walk.

    Local validity (nonnegative +-1 excursion for the heights, unit steps for
    the labels) is enforced at construction; global consistency of the labels
    is what :func:`decode` checks.
    """

    __slots__ = ("n", "heights", "label_seq")

    def __init__(self, heights, label_seq):
        heights = np.ascontiguousarray(heights, dtype=np.int64)
        label_seq = np.ascontiguousarray(label_seq, dtype=np.int64)
        if heights.ndim != 1 or heights.size % 2 == 0:
            raise MalformedContour("a contour has 2n + 1 entries")
        if heights.size != label_seq.size:
            raise MalformedContour("height and label sequences must have equal length")
        if heights[0] != 0 or heights[-1] != 0:
            raise MalformedContour("contour must start and end at height 0")
        if heights.min() < 0:
            raise MalformedContour("contour heights must stay nonnegative")
        if heights.size > 1:
            hsteps = np.abs(np.diff(heights))
            if hsteps.min() != 1 or hsteps.max() != 1:
                raise MalformedContour("contour must move by exactly 1 per step")
        if label_seq[0] != 0 or label_seq[-1] != 0:
            raise InconsistentLabels("label sequence must start and end at 0")
        if label_seq.size > 1 and np.abs(np.diff(label_seq)).max() > 1:
            raise InconsistentLabels("labels may change by at most 1 per step")
        self.n = heights.size // 2
        self.heights = heights
        self.label_seq = label_seq
        _freeze(heights, label_seq)

    def to_csv(self) -> str:
        lines = [f"{i},{c},{v}" for i, (c, v) in enumerate(zip(self.heights, self.label_seq))]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ContourCoding":
        heights, labels = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#") or line[0].isalpha():
                continue
            _, c, v = line.split(",")
            heights.append(int(c))
            labels.append(int(v))
        return cls(heights, labels)

    def __eq__(self, other):
        return (
            isinstance(other, ContourCoding)
            and np.array_equal(self.heights, other.heights)
            and np.array_equal(self.label_seq, other.label_seq)
        )

    def __repr__(self):
        return f"ContourCoding(n={self.n})"


def encode(lt: LabeledTree) -> ContourCoding:
    """Contour coding of a labeled tree: heights are the walk depths, labels
    are read off the visited vertices."""
    verts, depth = _k.contour_sequence(
        lt.tree.parent, lt.tree.first_child, lt.tree.next_sibling
    )
    return ContourCoding(depth, lt.labels[verts])


def decode(contour, label_seq=None) -> LabeledTree:
    """Rebuild the labeled tree from its contour coding.

    Raises :class:`MalformedContour` when the heights are not a nonnegative
    +-1 excursion, and :class:`InconsistentLabels` when two visits of one
    vertex disagree (or a label step exceeds 1).  Inverse of :func:`encode`.
    """
    if label_seq is None:
        coding = contour
    else:
        coding = ContourCoding(contour, label_seq)
    heights, vlabels = coding.heights, coding.label_seq
    nverts = coding.n + 1
    codes = np.zeros(nverts, dtype=np.int64)
    labels = np.zeros(nverts, dtype=np.int64)
    stack = [0]
    nxt = 1
    for i in range(1, heights.size):
        if heights[i] > heights[i - 1]:
            codes[stack[-1]] += 1
            labels[nxt] = vlabels[i]
            stack.append(nxt)
            nxt += 1
        else:
            stack.pop()
            if vlabels[i] != labels[stack[-1]]:
                raise InconsistentLabels(
                    f"visits of vertex {stack[-1]} carry different labels"
                )
    tree = PlaneTree(codes)
    return LabeledTree(tree, labels)


def classify(lt: LabeledTree) -> TreeClasses:
    """Family membership flags of a labeled tree; see :class:`TreeClasses`."""
    tree, labels = lt.tree, lt.labels
    codes = tree.codes
    nonneg = bool(labels.min() >= 0)

    leaf = tree.leaves()
    if leaf.any():
        idx = np.nonzero(leaf)[0]
        leaf_decreasing = bool(np.all(labels[idx] == labels[tree.parent[idx]] - 1))
    else:
        leaf_decreasing = True

    root_children = int(codes[0])
    root_event = root_children >= 2 or (
        root_children == 1
        and tree.n >= 1
        and labels[1] == 1
        and bool(np.any(labels[1:] == 0))
    )

    # local route: every leaf sits one below its unique neighbour (for a
    # one-child root that neighbour is the child), and the walk revisits
    # label 0 strictly between its endpoints
    local_leaves = leaf_decreasing and (root_children != 1 or labels[1] == 1)
    if tree.n >= 1:
        verts = contour_sequence(tree)
        inner = labels[verts[1:-1]]
        local_corner = bool(np.any(inner == 0))
    else:
        local_corner = False
    nice_local = local_leaves and local_corner

    nice_family = nonneg and leaf_decreasing and root_event
    return TreeClasses(nonneg, leaf_decreasing, root_event, nice_local, nice_family)


def first_passage_candidates(lt: LabeledTree, level: int) -> np.ndarray:
    """Vertices whose label first reaches ``level`` along their root path.

    A vertex qualifies when its own label is ``>= level`` while every proper
    ancestor stays strictly below; since labels rise by at most 1 per edge the
    label of a qualifying vertex equals ``level`` exactly.  Returned in
    depth-first order.
    """
    if level < 1:
        raise ValueError("level must be a positive integer")
    anc = _k.ancestor_max_labels(lt.tree.parent, lt.labels)
    return np.nonzero((lt.labels >= level) & (anc < level))[0]


def first_passage_split(
    lt: LabeledTree,
    level: int,
    rule: Optional[Callable[[LabeledTree, int], bool]] = None,
):
    """Split the tree at a first-passage vertex of the given label level.

    ``rule`` filters the candidate vertices (e.g. "subtree holds at least
    six tenths of the edges"); the first candidate in depth-first order that
    passes is used.  Returns ``(upper, lower, w)`` where ``upper`` keeps
    everything outside the strict descendants of ``w`` (so ``w`` becomes a
    leaf), ``lower`` is the subtree of ``w`` with labels re-based to 0 at
    ``w``, and ``w`` is the split vertex index in ``lt``; or ``None`` when no
    candidate passes.  Edge counts satisfy ``upper.n + lower.n == lt.n``.
    """
    candidates = first_passage_candidates(lt, level)
    w = None
    for c in candidates:
        if rule is None or rule(lt, int(c)):
            w = int(c)
            break
    if w is None:
        return None
    size = int(lt.tree.subtree_sizes()[w])
    codes = lt.tree.codes
    labels = lt.labels

    lower_codes = codes[w : w + size + 1]
    lower_labels = labels[w : w + size + 1] - labels[w]
    lower = LabeledTree(PlaneTree(lower_codes), lower_labels)

    upper_codes = np.concatenate([codes[:w], [0], codes[w + size + 1 :]])
    upper_labels = np.concatenate([labels[:w], labels[w : w + 1], labels[w + size + 1 :]])
    upper = LabeledTree(PlaneTree(upper_codes), upper_labels)
    return upper, lower, w
