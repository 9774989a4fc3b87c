# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the kernels in ``quadmaps._kernels_py``.

Same signatures, same conventions; see the pure module for the full
documentation.  Tests assert exact agreement between the two backends.
"""

import numpy as np

ctypedef long long i64


def tree_from_codes(codes):
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    cdef const i64[::1] c = codes
    cdef Py_ssize_t nverts = c.shape[0]
    parent_a = np.full(nverts, -1, dtype=np.int64)
    first_a = np.full(nverts, -1, dtype=np.int64)
    sib_a = np.full(nverts, -1, dtype=np.int64)
    last_a = np.full(nverts, -1, dtype=np.int64)
    rem_a = codes.copy()
    stack_a = np.empty(nverts + 1, dtype=np.int64)
    cdef i64[::1] parent = parent_a
    cdef i64[::1] first_child = first_a
    cdef i64[::1] next_sibling = sib_a
    cdef i64[::1] last_child = last_a
    cdef i64[::1] rem = rem_a
    cdef i64[::1] stack = stack_a
    cdef Py_ssize_t sp = 1
    cdef Py_ssize_t i
    cdef i64 p
    stack[0] = 0
    for i in range(1, nverts):
        while sp > 0 and rem[stack[sp - 1]] == 0:
            sp -= 1
        if sp == 0:
            raise ValueError("child counts do not encode a single tree")
        p = stack[sp - 1]
        parent[i] = p
        rem[p] -= 1
        if first_child[p] < 0:
            first_child[p] = i
        else:
            next_sibling[last_child[p]] = i
        last_child[p] = i
        stack[sp] = i
        sp += 1
    return parent_a, first_a, sib_a


def contour_sequence(parent, first_child, next_sibling):
    cdef const i64[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const i64[::1] sib = np.ascontiguousarray(next_sibling, dtype=np.int64)
    cursor_a = np.ascontiguousarray(first_child, dtype=np.int64).copy()
    cdef i64[::1] cursor = cursor_a
    cdef Py_ssize_t nverts = par.shape[0]
    cdef Py_ssize_t steps = 2 * (nverts - 1) + 1
    verts_a = np.empty(steps, dtype=np.int64)
    depth_a = np.empty(steps, dtype=np.int64)
    cdef i64[::1] verts = verts_a
    cdef i64[::1] depth = depth_a
    cdef i64 v = 0, d = 0, c
    cdef Py_ssize_t k
    verts[0] = 0
    depth[0] = 0
    for k in range(1, steps):
        c = cursor[v]
        if c >= 0:
            cursor[v] = sib[c]
            v = c
            d += 1
        else:
            v = par[v]
            d -= 1
        verts[k] = v
        depth[k] = d
    return verts_a, depth_a


def labels_from_increments(parent, inc):
    cdef const i64[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const i64[::1] ic = np.ascontiguousarray(inc, dtype=np.int64)
    cdef Py_ssize_t nverts = par.shape[0]
    labels_a = np.zeros(nverts, dtype=np.int64)
    cdef i64[::1] lab = labels_a
    cdef Py_ssize_t i
    for i in range(1, nverts):
        lab[i] = lab[par[i]] + ic[i]
    return labels_a


def labels_from_increments_f(parent, inc):
    cdef const i64[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const double[::1] ic = np.ascontiguousarray(inc, dtype=np.float64)
    cdef Py_ssize_t nverts = par.shape[0]
    labels_a = np.zeros(nverts, dtype=np.float64)
    cdef double[::1] lab = labels_a
    cdef Py_ssize_t i
    for i in range(1, nverts):
        lab[i] = lab[par[i]] + ic[i]
    return labels_a


def subtree_sizes(parent):
    cdef const i64[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef Py_ssize_t nverts = par.shape[0]
    sizes_a = np.zeros(nverts, dtype=np.int64)
    cdef i64[::1] sizes = sizes_a
    cdef Py_ssize_t i
    for i in range(nverts - 1, 0, -1):
        sizes[par[i]] += sizes[i] + 1
    return sizes_a


def ancestor_max_labels(parent, labels):
    cdef const i64[::1] par = np.ascontiguousarray(parent, dtype=np.int64)
    cdef const i64[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t nverts = par.shape[0]
    out_a = np.empty(nverts, dtype=np.int64)
    cdef i64[::1] out = out_a
    cdef Py_ssize_t i
    cdef i64 p, a, lp
    out[0] = np.iinfo(np.int64).min
    for i in range(1, nverts):
        p = par[i]
        a = out[p]
        lp = lab[p]
        out[i] = lp if lp > a else a
    return out_a


def corner_successors(corner_labels):
    cdef const i64[::1] lab = np.ascontiguousarray(corner_labels, dtype=np.int64)
    cdef Py_ssize_t m = lab.shape[0]
    succ_a = np.full(m, -1, dtype=np.int64)
    stack_a = np.empty(m, dtype=np.int64)
    cdef i64[::1] succ = succ_a
    cdef i64[::1] stack = stack_a
    cdef Py_ssize_t sp = 0
    cdef Py_ssize_t j, jj
    cdef i64 v
    for j in range(2 * m):
        jj = j if j < m else j - m
        v = lab[jj]
        while sp > 0 and lab[stack[sp - 1]] > v:
            sp -= 1
            succ[stack[sp]] = jj
        if j < m and v > 0:
            stack[sp] = jj
            sp += 1
    return succ_a


def assemble_rotation(corner_vertex, succ):
    cdef const i64[::1] cv = np.ascontiguousarray(corner_vertex, dtype=np.int64)
    cdef const i64[::1] sc = np.ascontiguousarray(succ, dtype=np.int64)
    cdef Py_ssize_t m = cv.shape[0]
    cdef Py_ssize_t ndarts = 2 * m
    cdef Py_ssize_t nverts = 0
    cdef Py_ssize_t i
    for i in range(m):
        if cv[i] + 1 > nverts:
            nverts = cv[i] + 1

    twin_a = np.empty(ndarts, dtype=np.int64)
    origin_a = np.empty(ndarts, dtype=np.int64)
    nxt_a = np.empty(ndarts, dtype=np.int64)
    cdef i64[::1] twin = twin_a
    cdef i64[::1] origin = origin_a
    cdef i64[::1] nxt = nxt_a

    # bucket incoming darts by target corner, ascending source
    in_off_a = np.zeros(m + 2, dtype=np.int64)
    cdef i64[::1] in_off = in_off_a
    cdef Py_ssize_t nroot = 0
    for i in range(m):
        if sc[i] >= 0:
            in_off[sc[i] + 2] += 1
        else:
            nroot += 1
    for i in range(2, m + 2):
        in_off[i] += in_off[i - 1]
    in_list_a = np.empty(m - nroot if m >= nroot else 0, dtype=np.int64)
    root_in_a = np.empty(nroot, dtype=np.int64)
    cdef i64[::1] in_list = in_list_a
    cdef i64[::1] root_in = root_in_a
    cdef Py_ssize_t rp = 0
    for i in range(m):
        twin[2 * i] = 2 * i + 1
        twin[2 * i + 1] = 2 * i
        origin[2 * i] = cv[i]
        if sc[i] >= 0:
            origin[2 * i + 1] = cv[sc[i]]
            in_list[in_off[sc[i] + 1]] = 2 * i + 1
            in_off[sc[i] + 1] += 1
        else:
            origin[2 * i + 1] = 0
            root_in[rp] = 2 * i + 1
            rp += 1

    # rotation around vertex 0: descending source corner
    cdef i64 prev, first, d
    if nroot > 0:
        first = root_in[nroot - 1]
        prev = first
        for i in range(nroot - 2, -1, -1):
            nxt[prev] = root_in[i]
            prev = root_in[i]
        nxt[prev] = first

    # tree vertices: corners in contour order; within a corner the incoming
    # darts nested innermost-last (descending source), outgoing dart last
    prev_of_a = np.full(nverts, -1, dtype=np.int64)
    first_of_a = np.full(nverts, -1, dtype=np.int64)
    cdef i64[::1] prev_of = prev_of_a
    cdef i64[::1] first_of = first_of_a
    cdef Py_ssize_t a, lo, hi
    cdef i64 v
    for i in range(m):
        v = cv[i]
        lo = in_off[i]
        hi = in_off[i + 1]
        for a in range(hi - 1, lo - 1, -1):
            d = in_list[a]
            if first_of[v] < 0:
                first_of[v] = d
            else:
                nxt[prev_of[v]] = d
            prev_of[v] = d
        d = 2 * i
        if first_of[v] < 0:
            first_of[v] = d
        else:
            nxt[prev_of[v]] = d
        prev_of[v] = d
    for v in range(1, nverts):
        if first_of[v] >= 0:
            nxt[prev_of[v]] = first_of[v]
    return twin_a, nxt_a, origin_a


def face_sizes(twin, nxt):
    cdef const i64[::1] tw = np.ascontiguousarray(twin, dtype=np.int64)
    cdef const i64[::1] nx = np.ascontiguousarray(nxt, dtype=np.int64)
    cdef Py_ssize_t ndarts = tw.shape[0]
    seen_a = np.zeros(ndarts, dtype=np.uint8)
    sizes_a = np.empty(ndarts, dtype=np.int64)
    cdef unsigned char[::1] seen = seen_a
    cdef i64[::1] sizes = sizes_a
    cdef Py_ssize_t nfaces = 0
    cdef Py_ssize_t d0
    cdef i64 d, size
    for d0 in range(ndarts):
        if seen[d0]:
            continue
        size = 0
        d = d0
        while not seen[d]:
            seen[d] = 1
            size += 1
            d = nx[tw[d]]
        sizes[nfaces] = size
        nfaces += 1
    return sizes_a[:nfaces].copy()


def bfs_distances(indptr, indices, nverts, source):
    cdef const i64[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const i64[::1] ix = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t nv = nverts
    dist_a = np.full(nv, -1, dtype=np.int64)
    queue_a = np.empty(nv, dtype=np.int64)
    cdef i64[::1] dist = dist_a
    cdef i64[::1] queue = queue_a
    cdef Py_ssize_t head = 0, tail = 1
    cdef i64 v, w, dv
    cdef Py_ssize_t e
    dist[source] = 0
    queue[0] = source
    while head < tail:
        v = queue[head]
        head += 1
        dv = dist[v] + 1
        for e in range(ip[v], ip[v + 1]):
            w = ix[e]
            if dist[w] < 0:
                dist[w] = dv
                queue[tail] = w
                tail += 1
    return dist_a


def snake_label_walk(steps, gauss):
    cdef const i64[::1] st = np.ascontiguousarray(steps, dtype=np.int64)
    cdef const double[::1] g = np.ascontiguousarray(gauss, dtype=np.float64)
    cdef Py_ssize_t msteps = st.shape[0]
    z_a = np.empty(msteps + 1, dtype=np.float64)
    stack_a = np.empty(msteps + 1, dtype=np.int64)
    cdef double[::1] z = z_a
    cdef i64[::1] stack = stack_a
    cdef Py_ssize_t sp = 0, nex = 0, t
    cdef double cur = 0.0
    z[0] = 0.0
    for t in range(msteps):
        if st[t] > 0:
            stack[sp] = nex
            sp += 1
            cur += g[nex]
            nex += 1
        else:
            sp -= 1
            cur -= g[stack[sp]]
        z[t + 1] = cur
    return z_a


ctypedef unsigned long long u64

cdef inline u64 _rotl(u64 x, int k) nogil:
    return (x << k) | (x >> (64 - k))

cdef inline double _nextu(u64 *s) nogil:
    cdef u64 r = _rotl(s[0] + s[3], 23) + s[0]
    cdef u64 t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return <double>(r >> 11) * (1.0 / 9007199254740992.0)


def sample_labeled_batch(n, zero_cdf, state, max_attempts,
                         force_leaf_decrease, floor, require_root_event,
                         out_codes, out_labels):
    cdef const double[::1] cdf = np.ascontiguousarray(zero_cdf, dtype=np.float64)
    cdef u64[::1] st = state
    cdef i64[::1] oc = out_codes
    cdef i64[::1] ol = out_labels
    cdef bint force = force_leaf_decrease
    cdef bint wanth = require_root_event
    cdef i64 lofloor = floor
    cdef i64 budget = max_attempts
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t nverts = nn + 1
    cdef Py_ssize_t ncdf = cdf.shape[0]

    tmp_a = np.empty(nverts, dtype=np.int64)
    parts_a = np.empty(nverts, dtype=np.int64)
    rem_a = np.empty(nverts, dtype=np.int64)
    stack_a = np.empty(nverts + 1, dtype=np.int64)
    labels_a = np.empty(nverts, dtype=np.int64)
    cdef i64[::1] tmp = tmp_a
    cdef i64[::1] parts = parts_a
    cdef i64[::1] rem = rem_a
    cdef i64[::1] stack = stack_a
    cdef i64[::1] labels = labels_a

    cdef u64 s[4]
    s[0] = st[0]
    s[1] = st[1]
    s[2] = st[2]
    s[3] = st[3]

    cdef Py_ssize_t g, sl, i, sp, nextpart, npart, lo, hi, mid, jj
    cdef i64 z, p, cuts_left, run, assigned, zeros_left
    cdef i64 walk, best, start, q, lab, minlab, c, root_children
    cdef i64 attempt = 0
    cdef bint sawzero, ok, accepted = False
    cdef double u

    with nogil:
        while attempt < budget and not accepted:
            attempt += 1

            u = _nextu(s)
            lo = 0
            hi = ncdf
            while lo < hi:
                mid = (lo + hi) // 2
                if cdf[mid] <= u:
                    lo = mid + 1
                else:
                    hi = mid
            z = lo + 1
            p = nverts - z

            npart = 0
            cuts_left = p - 1
            run = 1
            assigned = 0
            for g in range(1, nn):
                if (nn - g) * _nextu(s) < cuts_left:
                    parts[npart] = run
                    npart += 1
                    assigned += run
                    run = 1
                    cuts_left -= 1
                else:
                    run += 1
            parts[npart] = nn - assigned

            zeros_left = z
            nextpart = 0
            walk = 0
            best = 0
            start = 0
            for sl in range(nverts):
                if (nverts - sl) * _nextu(s) < zeros_left:
                    c = 0
                    zeros_left -= 1
                else:
                    c = parts[nextpart]
                    nextpart += 1
                tmp[sl] = c
                walk += c - 1
                if walk < best:
                    best = walk
                    start = sl + 1
            if start == nverts:
                start = 0

            sp = 1
            stack[0] = 0
            minlab = 0
            sawzero = False
            labels[0] = 0
            jj = start
            c = tmp[jj]
            oc[0] = c
            rem[0] = c
            ok = True
            for i in range(1, nverts):
                jj += 1
                if jj == nverts:
                    jj = 0
                c = tmp[jj]
                while rem[stack[sp - 1]] == 0:
                    sp -= 1
                q = stack[sp - 1]
                rem[q] -= 1
                if force and c == 0:
                    lab = labels[q] - 1
                else:
                    lab = labels[q] + <i64>(3.0 * _nextu(s)) - 1
                labels[i] = lab
                if lab < minlab:
                    minlab = lab
                    if minlab < lofloor:
                        ok = False
                        break
                if lab == 0:
                    sawzero = True
                rem[i] = c
                oc[i] = c
                stack[sp] = i
                sp += 1

            if not ok:
                continue
            if wanth:
                root_children = oc[0]
                if root_children < 2 and not (
                    root_children == 1 and labels[1] == 1 and sawzero
                ):
                    continue
            for i in range(nverts):
                ol[i] = labels[i]
            accepted = True

    st[0] = s[0]
    st[1] = s[1]
    st[2] = s[2]
    st[3] = s[3]
    return attempt if accepted else 0
