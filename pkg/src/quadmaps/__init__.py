"""Random planar quadrangulations without pendant vertices.

Builds, samples and verifies rooted quadrangulations through their encoding
by well-labeled plane trees, and compares rescaled observables against a
discrete snake reference simulator.  Hot loops run in a compiled extension
when available (``quadmaps._backend.BACKEND`` says which one is active).
"""

from ._backend import BACKEND
from .bijection import (
    corner_successors,
    pendant_leaf_count,
    quadrangulate,
    verify_root_distance,
)
from .maps import HalfEdgeMap, Quadrangulation, faces, genus
from .sampling import (
    OffspringLaw,
    SamplerConfig,
    attach_leaf_decreasing_labels,
    enumerate_labeled_trees,
    sample_gw_conditioned,
    sample_leaf_decreasing_tree,
    sample_nice_tree,
    sample_well_labeled_tree,
)
from .snake import (
    SnakePath,
    condition_min,
    distance_grid,
    exponent_fit,
    ks_statistic,
    moment,
    reroot,
    sample_snake,
)
from .trees import (
    ContourCoding,
    LabeledTree,
    PlaneTree,
    TreeClasses,
    classify,
    contour_sequence,
    decode,
    encode,
    first_passage_split,
)

__version__ = "0.1.0"
