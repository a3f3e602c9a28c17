"""Load thresholds for k-ary cuckoo hashing, analytically and by simulation.

The package has two halves that check each other:

* an analytic engine (``thresholds``) solving the Poisson fixed-point
  equations for core appearance points, core sizes and load thresholds,
  for regular and mixed numbers of choices per key;
* a simulation stack (``hypergraph``, ``orientation``, ``xorsat``,
  ``experiments``) that samples random hypergraphs, peels cores, orients
  edges greedily or by exact matching, solves the induced GF(2) systems,
  and sweeps failure rates across a density grid with a sigmoid fit to
  locate empirical transitions.

The ``cuckoo-thresholds`` CLI exposes both halves.
"""

from .errors import NumericalError, SubcriticalDensityError, UnsupportedCaseError
from .experiments import (
    SigmoidFit,
    SweepConfig,
    SweepRecord,
    SweepResult,
    fit_sigmoid,
    format_records_csv,
    instance_seed,
    mix64,
    run_sweep,
    sigmoid,
)
from .hypergraph import CoreStats, Hypergraph, peel, sample_mixed, sample_regular
from .orientation import Orientation, matching_orient, selfless_orient, verify
from .thresholds import (
    CorePrediction,
    DegreeSpec,
    ThresholdResult,
    beta_for_density,
    branch_density,
    core_appearance,
    mixed_branch_density,
    mixed_core_appearance,
    mixed_fixed_point,
    mixed_predict_core,
    mixed_threshold,
    optimal_distribution,
    orientation_threshold,
    poisson_tail,
    predict_core,
)
from .xorsat import Gf2System, brute_force_satisfiable, from_hypergraph, rank_and_solve

__version__ = "0.1.0"

__all__ = [
    "CorePrediction",
    "CoreStats",
    "DegreeSpec",
    "Gf2System",
    "Hypergraph",
    "NumericalError",
    "Orientation",
    "SigmoidFit",
    "SubcriticalDensityError",
    "SweepConfig",
    "SweepRecord",
    "SweepResult",
    "ThresholdResult",
    "UnsupportedCaseError",
    "beta_for_density",
    "branch_density",
    "brute_force_satisfiable",
    "core_appearance",
    "fit_sigmoid",
    "format_records_csv",
    "from_hypergraph",
    "instance_seed",
    "matching_orient",
    "mix64",
    "mixed_branch_density",
    "mixed_core_appearance",
    "mixed_fixed_point",
    "mixed_predict_core",
    "mixed_threshold",
    "optimal_distribution",
    "orientation_threshold",
    "peel",
    "poisson_tail",
    "predict_core",
    "rank_and_solve",
    "run_sweep",
    "sample_mixed",
    "sample_regular",
    "selfless_orient",
    "sigmoid",
    "verify",
]
