"""Timing comparison of the compiled and pure-Python kernel backends.

Run as ``python benchmarks/bench_backends.py [--n 2000] [--repeat 5]``.
The pure backend is expected to be orders of magnitude slower; this script
exists to quantify the gap and to confirm both produce identical output.
"""

import argparse
import time

import numpy as np

from quadmaps import _kernels_cy, _kernels_py
from quadmaps.sampling import MU, _zero_count_cdf
from quadmaps._kernels_py import seed_prng_state


def _bench(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    n = args.n

    backends = [("cython", _kernels_cy), ("python", _kernels_py)]
    rows = []

    # one fixed accepted tree to feed the downstream kernels
    cdf = _zero_count_cdf(n, MU.theta)
    codes = np.empty(n + 1, dtype=np.int64)
    labels = np.empty(n + 1, dtype=np.int64)
    _kernels_cy.sample_labeled_batch(n, cdf, seed_prng_state(7), 10 ** 6,
                                     True, 0, True, codes, labels)

    results = {}
    for name, mod in backends:
        out_c = np.empty(n + 1, dtype=np.int64)
        out_l = np.empty(n + 1, dtype=np.int64)
        t_pair, used = _bench(
            mod.sample_labeled_batch, n, cdf, seed_prng_state(12), 10 ** 6,
            True, 0, True, out_c, out_l, repeat=args.repeat,
        )
        t_tree, tree = _bench(mod.tree_from_codes, codes, repeat=args.repeat)
        parent, first, sib = tree
        t_cont, cont = _bench(mod.contour_sequence, parent, first, sib,
                              repeat=args.repeat)
        verts, depth = cont
        corner_labels = labels[verts[:-1]]
        t_succ, succ = _bench(mod.corner_successors, corner_labels,
                              repeat=args.repeat)
        cv = verts[:-1] + 1
        t_rot, rot = _bench(mod.assemble_rotation, cv, succ,
                            repeat=args.repeat)
        twin, nxt, origin = rot
        t_face, fs = _bench(mod.face_sizes, twin, nxt, repeat=args.repeat)
        results[name] = dict(pair=t_pair, tree=t_tree, contour=t_cont,
                             successors=t_succ, rotation=t_rot, faces=t_face,
                             fingerprint=(used, int(fs.sum()),
                                          int(succ.sum()), int(origin.sum())))

    print(f"n = {n} (times in ms, best of {args.repeat})")
    keys = ["pair", "tree", "contour", "successors", "rotation", "faces"]
    header = f"{'kernel':<12}" + "".join(f"{name:>12}" for name, _ in backends)
    print(header + f"{'speedup':>10}")
    for key in keys:
        cy = results["cython"][key] * 1e3
        py = results["python"][key] * 1e3
        print(f"{key:<12}{cy:>12.3f}{py:>12.3f}{py / cy:>10.1f}x")
    same = results["cython"]["fingerprint"] == results["python"]["fingerprint"]
    print(f"identical outputs: {same}")


if __name__ == "__main__":
    main()
