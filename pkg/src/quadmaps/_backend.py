"""Selects the compiled kernel backend, falling back to pure Python.

The compiled module is optional: building the package produces
``quadmaps._kernels_cy``, but a source checkout works without it.  Set
``QUADMAPS_BACKEND=python`` or ``QUADMAPS_BACKEND=cython`` to force a
choice (forcing ``cython`` raises if the extension is missing).
"""

import os

from . import _kernels_py

_choice = os.environ.get("QUADMAPS_BACKEND", "auto").lower()

if _choice not in ("auto", "cython", "python"):
    raise ValueError(f"QUADMAPS_BACKEND must be auto, cython or python, got {_choice!r}")

kernels = _kernels_py
BACKEND = "python"

if _choice in ("auto", "cython"):
    try:
        from . import _kernels_cy
        kernels = _kernels_cy
        BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise

KERNEL_NAMES = [
    "tree_from_codes",
    "contour_sequence",
    "labels_from_increments",
    "labels_from_increments_f",
    "subtree_sizes",
    "ancestor_max_labels",
    "corner_successors",
    "assemble_rotation",
    "face_sizes",
    "bfs_distances",
    "snake_label_walk",
    "sample_labeled_batch",
]
