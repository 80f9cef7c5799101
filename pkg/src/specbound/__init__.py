"""Spectral support bounds for random matrices with variance profiles."""

import os as _os

# Honor SPECBOUND_THREADS before any numerical library spins up its thread
# pool.  This only works if numpy has not been imported yet, which is the
# case when the CLI is the entry point.
_threads = _os.environ.get("SPECBOUND_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    SpecboundError,
    InputError,
    MatrixFormatError,
    ZeroMatrixError,
    DomainError,
    SizeGuardError,
    InvalidVertexError,
    NumericError,
    ConvergenceError,
    ToleranceError,
    OverflowGuardError,
)
from .linalg import (  # noqa: E402
    VarianceMatrix,
    NormSequence,
    inf_norm,
    norm_sequence,
    gram_linearize,
    wigner_profile,
    exp_profile,
    random_profile,
    load_dense,
    load_matrix,
    resolve_profile,
)
from .bounds import (  # noqa: E402
    BoundReport,
    critical_w,
    root_function,
    support_bound,
)
from .dyck import (  # noqa: E402
    DyckPath,
    Forest,
    PlaneTree,
    RunStats,
    catalan,
    dyck_transition_prob,
    enumerate_dyck,
    enumerate_trees,
    path_to_tree,
    run_statistics,
    run_z_weight,
    split_vertex,
    tree_to_path,
)
from .treeval import (  # noqa: E402
    chopping_bound_check,
    forest_val,
    naive_tree_val,
    tree_val,
    tree_val_vector,
)
from .walks import (  # noqa: E402
    floor_walk_closed_form,
    floor_walk_step_product,
    pbot_probability,
    stopped_walk_generating_function,
    stopped_walk_series_exhaustive,
)
from .qve import (  # noqa: E402
    MomentTable,
    SpectralProbe,
    SupportEstimate,
    density,
    density_scan,
    estimate_support,
    moment_recursion,
    solve_qve,
    support_from_moments,
)
from .montecarlo import (  # noqa: E402
    ENSEMBLES,
    McConfig,
    McResult,
    PowerResult,
    mc_experiment,
    sample_matrix,
    spectral_radius,
    trial_rng,
)
