"""Pure-Python reference implementations of the hot-loop kernels.

Every function here has a signature-identical compiled twin in
``quadmaps._kernels_cy``; :mod:`quadmaps._backend` picks whichever is
available at import time.  These versions favour clarity over speed and
serve as the ground truth the compiled twins are tested against.

Conventions shared by both backends:

* trees are flat arrays indexed in depth-first first-visit order, vertex 0
  is the root and ``parent[child] < child`` always holds;
* ``codes[i]`` is the number of children of vertex ``i``;
* sentinel for "absent" is ``-1`` throughout (no parent, no sibling,
  no successor).
"""

import numpy as np

_I8 = np.int64


def tree_from_codes(codes):
    """Parent, first-child and next-sibling arrays from preorder child counts.

    ``codes`` must be a valid depth-first child-count sequence: nonnegative
    entries summing to ``len(codes) - 1`` whose partial sums of
    ``codes[i] - 1`` stay nonnegative before the last entry.
    """
    codes = np.asarray(codes, dtype=_I8)
    nverts = len(codes)
    parent = np.full(nverts, -1, dtype=_I8)
    first_child = np.full(nverts, -1, dtype=_I8)
    next_sibling = np.full(nverts, -1, dtype=_I8)
    last_child = [-1] * nverts
    remaining = codes.tolist()
    stack = [0]
    for i in range(1, nverts):
        while stack and remaining[stack[-1]] == 0:
            stack.pop()
        if not stack:
            raise ValueError("child counts do not encode a single tree")
        p = stack[-1]
        parent[i] = p
        remaining[p] -= 1
        if first_child[p] < 0:
            first_child[p] = i
        else:
            next_sibling[last_child[p]] = i
        last_child[p] = i
        stack.append(i)
    return parent, first_child, next_sibling


def contour_sequence(parent, first_child, next_sibling):
    """Depth-first walk around the tree.

    Returns ``(verts, depth)`` of length ``2n + 1`` each: the vertex visited
    at every step of the walk and its distance from the root.  Each edge is
    traversed exactly once downward and once upward.
    """
    nverts = len(parent)
    steps = 2 * (nverts - 1) + 1
    verts = np.empty(steps, dtype=_I8)
    depth = np.empty(steps, dtype=_I8)
    cursor = first_child.copy()
    v = 0
    d = 0
    verts[0] = 0
    depth[0] = 0
    for k in range(1, steps):
        c = cursor[v]
        if c >= 0:
            cursor[v] = next_sibling[c]
            v = c
            d += 1
        else:
            v = parent[v]
            d -= 1
        verts[k] = v
        depth[k] = d
    return verts, depth


def labels_from_increments(parent, inc):
    """Integer vertex labels from per-edge increments.

    ``inc[i]`` is the label change across the edge into vertex ``i``
    (entry 0 is ignored); the root label is 0.
    """
    nverts = len(parent)
    labels = np.zeros(nverts, dtype=_I8)
    for i in range(1, nverts):
        labels[i] = labels[parent[i]] + inc[i]
    return labels


def labels_from_increments_f(parent, inc):
    """Float variant of :func:`labels_from_increments`."""
    nverts = len(parent)
    labels = np.zeros(nverts, dtype=np.float64)
    for i in range(1, nverts):
        labels[i] = labels[parent[i]] + inc[i]
    return labels


def subtree_sizes(parent):
    """Number of edges below each vertex, counting the edge to the vertex's
    own subtree not at all (a leaf has size 0)."""
    nverts = len(parent)
    sizes = np.zeros(nverts, dtype=_I8)
    for i in range(nverts - 1, 0, -1):
        sizes[parent[i]] += sizes[i] + 1
    return sizes


def ancestor_max_labels(parent, labels):
    """Maximum label over the proper ancestors of each vertex.

    The root, having no proper ancestors, gets the smallest int64 value.
    """
    nverts = len(parent)
    out = np.empty(nverts, dtype=_I8)
    out[0] = np.iinfo(_I8).min
    for i in range(1, nverts):
        p = parent[i]
        a = out[p]
        lp = labels[p]
        out[i] = lp if lp > a else a
    return out


def corner_successors(corner_labels):
    """For each corner, the cyclically next corner whose label is one less.

    Corners are the steps ``0 .. 2n - 1`` of the contour walk.  Labels step
    by at most one along the walk, so the first later corner with a strictly
    smaller label has label exactly one less; a monotone stack over two laps
    finds it in linear time.  Corners with label 0 get the sentinel ``-1``.
    """
    m = len(corner_labels)
    lab = corner_labels.tolist() if hasattr(corner_labels, "tolist") else list(corner_labels)
    succ = np.full(m, -1, dtype=_I8)
    stack = []
    for j in range(2 * m):
        jj = j if j < m else j - m
        v = lab[jj]
        while stack and lab[stack[-1]] > v:
            succ[stack.pop()] = jj
        if j < m and v > 0:
            stack.append(jj)
    return succ


def assemble_rotation(corner_vertex, succ):
    """Half-edge arrays of the quadrangulation with one arc per corner.

    Darts ``2i`` and ``2i + 1`` are the two ends of the arc leaving corner
    ``i``; the even dart sits at corner ``i``, the odd dart at corner
    ``succ[i]``, or at the extra vertex 0 when ``succ[i] < 0``.

    Rotation convention (locked by the genus/face-degree oracle tests, which
    leave exactly one choice):
    around a tree vertex the corners appear in contour order; inside one
    corner the incoming darts come first, nested innermost-last (descending
    source corner), and the outgoing dart is placed last, against the corner's
    departing tree edge.  Around vertex 0 the incoming darts follow descending
    source corner order.

    Returns ``(twin, nxt, origin)``; the root dart is always dart 1, the end
    at vertex 0 of the arc leaving corner 0.
    """
    m = len(corner_vertex)
    ndarts = 2 * m
    twin = np.empty(ndarts, dtype=_I8)
    origin = np.empty(ndarts, dtype=_I8)
    nxt = np.empty(ndarts, dtype=_I8)
    cv = corner_vertex.tolist()
    sc = succ.tolist()

    nverts = max(cv) + 1
    for i in range(m):
        twin[2 * i] = 2 * i + 1
        twin[2 * i + 1] = 2 * i
        origin[2 * i] = cv[i]
        origin[2 * i + 1] = cv[sc[i]] if sc[i] >= 0 else 0

    incoming = [[] for _ in range(m)]
    root_in = []
    for i in range(m):
        if sc[i] >= 0:
            incoming[sc[i]].append(2 * i + 1)
        else:
            root_in.append(2 * i + 1)

    rotations = [[] for _ in range(nverts)]
    rotations[0] = root_in[::-1]
    for i in range(m):
        rot = rotations[cv[i]]
        rot.extend(reversed(incoming[i]))
        rot.append(2 * i)

    for rot in rotations:
        k = len(rot)
        for a in range(k):
            nxt[rot[a]] = rot[(a + 1) % k]
    return twin, nxt, origin


def face_sizes(twin, nxt):
    """Degrees of the faces of a rotation system.

    A face is an orbit of ``d -> nxt[twin[d]]``; its degree is the orbit
    length, so an edge with both sides on one face counts twice.
    """
    ndarts = len(twin)
    seen = np.zeros(ndarts, dtype=np.uint8)
    sizes = []
    for d0 in range(ndarts):
        if seen[d0]:
            continue
        size = 0
        d = d0
        while not seen[d]:
            seen[d] = 1
            size += 1
            d = nxt[twin[d]]
        sizes.append(size)
    return np.asarray(sizes, dtype=_I8)


def bfs_distances(indptr, indices, nverts, source):
    """Hop counts from ``source`` over a CSR adjacency; ``-1`` if unreachable."""
    dist = np.full(nverts, -1, dtype=_I8)
    dist[source] = 0
    queue = [source]
    ip = indptr
    ix = indices
    dl = dist
    for v in queue:
        dv = dl[v] + 1
        for e in range(ip[v], ip[v + 1]):
            w = ix[e]
            if dl[w] < 0:
                dl[w] = dv
                queue.append(w)
    return dist


def snake_label_walk(steps, gauss):
    """Head positions of a discrete snake along a +-1 excursion.

    ``steps`` is the +-1 step sequence of the walk (length ``2k``) and
    ``gauss[j]`` the spatial displacement carried by the ``j``-th tree edge
    in order of first traversal.  The same displacement is added on the way
    down the edge and subtracted on the way back up.
    """
    msteps = len(steps)
    z = np.empty(msteps + 1, dtype=np.float64)
    z[0] = 0.0
    stack = []
    nex = 0
    cur = 0.0
    for t in range(msteps):
        if steps[t] > 0:
            stack.append(nex)
            cur += gauss[nex]
            nex += 1
        else:
            cur -= gauss[stack.pop()]
        z[t + 1] = cur
    return z


_MASK64 = (1 << 64) - 1


def seed_prng_state(seed: int):
    """Expand a 64-bit seed into a 4-word xoshiro256++ state (splitmix64)."""
    import numpy as _np

    state = []
    x = seed & _MASK64
    for _ in range(4):
        x = (x + 0x9E3779B97F4A7C15) & _MASK64
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        state.append(z ^ (z >> 31))
    if not any(state):
        state[0] = 1
    return _np.array(state, dtype=_np.uint64)


def sample_labeled_batch(n, zero_cdf, state, max_attempts,
                         force_leaf_decrease, floor, require_root_event,
                         out_codes, out_labels):
    """Run labeled-tree proposals until one is accepted.

    Each attempt builds one size-conditioned tree with labels:

    1. draw the zero count ``z`` from ``zero_cdf`` (``zero_cdf[k]`` is the
       probability of at most ``k + 1`` zeros among the ``n + 1`` slots);
    2. fill the nonzero slots with a uniform composition of ``n`` into
       positive parts and place the zeros uniformly (two sequential
       fixed-size subset scans);
    3. rotate the slot sequence at the first minimum of its partial-sum walk,
       the unique rotation encoding a tree;
    4. attach uniform ``{-1, 0, 1}`` label increments on the fly; when
       ``force_leaf_decrease`` the increment into every non-root leaf is
       ``-1`` instead (and consumes no randomness).

    An attempt is accepted when the minimum label is ``>= floor`` and, if
    ``require_root_event``, the root has at least two children or has exactly
    one child labeled 1 plus some other vertex labeled 0.  On acceptance the
    child counts and labels are written to ``out_codes`` / ``out_labels`` and
    the number of attempts consumed is returned; 0 means the budget ran out.

    Randomness comes from an in-kernel xoshiro256++ stream over ``state``
    (mutated in place), so both backends consume bit-identical streams; the
    label pass aborts as soon as a label falls below ``floor``.
    """
    nverts = n + 1
    tmp = [0] * nverts
    parts = [0] * nverts
    labels = [0] * nverts
    rem = [0] * nverts
    cdf = zero_cdf.tolist()
    s0, s1, s2, s3 = (int(state[0]), int(state[1]), int(state[2]), int(state[3]))

    def nextu():
        nonlocal s0, s1, s2, s3
        r = (((s0 + s3) & _MASK64) << 23 | ((s0 + s3) & _MASK64) >> 41) & _MASK64
        r = (r + s0) & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        return (r >> 11) * 2.0 ** -53

    accepted = False
    attempt = 0
    while attempt < max_attempts and not accepted:
        attempt += 1

        # zero count by inversion of its CDF
        u = nextu()
        lo, hi = 0, len(cdf)
        while lo < hi:
            mid = (lo + hi) // 2
            if cdf[mid] <= u:
                lo = mid + 1
            else:
                hi = mid
        z = lo + 1
        p = nverts - z

        # positive parts of the composition, streamed from the cut scan
        npart = 0
        cuts_left = p - 1
        run = 1
        assigned = 0
        for g in range(1, n):
            if (n - g) * nextu() < cuts_left:
                parts[npart] = run
                npart += 1
                assigned += run
                run = 1
                cuts_left -= 1
            else:
                run += 1
        parts[npart] = n - assigned

        # interleave zeros and parts over the slots, track the walk minimum
        zeros_left = z
        nextpart = 0
        walk = 0
        best = 0
        start = 0
        for s in range(nverts):
            if (nverts - s) * nextu() < zeros_left:
                c = 0
                zeros_left -= 1
            else:
                c = parts[nextpart]
                nextpart += 1
            tmp[s] = c
            walk += c - 1
            if walk < best:
                best = walk
                start = s + 1
        if start == nverts:
            start = 0

        # fused pass: rotate, build parent stack, attach labels, check
        stack = [0]
        minlab = 0
        sawzero = False
        labels[0] = 0
        jj = start
        c = tmp[jj]
        out_codes[0] = c
        rem[0] = c
        ok = True
        for i in range(1, nverts):
            jj += 1
            if jj == nverts:
                jj = 0
            c = tmp[jj]
            while rem[stack[-1]] == 0:
                stack.pop()
            q = stack[-1]
            rem[q] -= 1
            if force_leaf_decrease and c == 0:
                lab = labels[q] - 1
            else:
                lab = labels[q] + int(3.0 * nextu()) - 1
            labels[i] = lab
            if lab < minlab:
                minlab = lab
                if minlab < floor:
                    ok = False
                    break
            if lab == 0:
                sawzero = True
            rem[i] = c
            out_codes[i] = c
            stack.append(i)

        if not ok:
            continue
        if require_root_event:
            root_children = out_codes[0]
            if root_children < 2 and not (
                root_children == 1 and labels[1] == 1 and sawzero
            ):
                continue
        out_labels[:] = labels
        accepted = True

    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return attempt if accepted else 0
