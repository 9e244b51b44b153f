"""In-tree descent clustering toolkit."""

from ._kernels import NUMBA_AVAILABLE, active_backend, set_backend
from .cuts import (
    AutoGap,
    Box,
    CutSpec,
    InvalidCutError,
    NodeSet,
    TopK,
    apply_cut,
    auto_gap_k,
    decision_graph_export,
    document_from_json,
    document_to_json,
    e_cut_rank,
    tree_from_document,
)
from .data import (
    CsvFormatError,
    Dataset,
    GaussianMixtureConfig,
    GenerationError,
    Metric,
    PairwiseDistances,
    distance,
    generate_gaussian_mixture,
    load_csv,
    normalize_minmax,
)
from .descent import (
    DescentTrace,
    LayerState,
    dnnd,
    graph_ga,
    hnnd,
    nd,
    nnd_layer,
    rl_delta,
)
from .evaluate import (
    SweepConfig,
    SweepRow,
    error_rate,
    run_sweep,
    singleton_filtered_stats,
    sweep_to_csv,
)
from .neighbors import NeighborGraph, build_knn
from .potential import PotentialConfig, PotentialMode, accumulate_potential, kernel_density
from .tree import (
    Forest,
    InTree,
    StructureError,
    TreeReport,
    resolve_roots,
    root_of,
    tree_to_json_dict,
    validate_forest,
    validate_intree,
)

__version__ = "0.1.0"
