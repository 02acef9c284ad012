"""richflow: greedy resource-flow clustering dynamics on finite periodic graphs.

Every active vertex simultaneously sends its entire resource to the richest
vertex of its closed neighborhood (ties uniform at random); the package runs
the dynamics at desk scale and materializes the quantities its analysis rests
on — event taxonomy, cluster genealogy, gap and moment statistics — as exact
invariants or Monte Carlo estimators.
"""

from .engine import (
    ClusterState,
    EngineInvariantError,
    RunOptions,
    StepReport,
    StepView,
    TargetMap,
    classify,
    is_absorbed,
    run,
    step,
    targets,
)
from .graph import Graph, build_box, build_layered, build_torus, closed_neighborhood
from .initial import (
    EXACT,
    REAL,
    DistributionSpec,
    Field,
    MassOverflowError,
    SpecError,
    make_field,
    pattern_field,
    sample_field,
)
from .oracle import (
    OracleGuardError,
    OutcomeDistribution,
    compare_engine_oracle,
    enumerate_outcomes,
    naive_step,
)
from .stats import (
    MovingMass,
    RunResult,
    TimeSeriesRow,
    activity,
    cluster_histogram,
    cluster_moment,
    gap_stats,
    in_degree_total,
    moving_mass_fraction,
    vertex_type,
)

__version__ = "0.1.0"

__all__ = [
    "ClusterState", "DistributionSpec", "EXACT", "EngineInvariantError", "Field",
    "Graph", "MassOverflowError", "MovingMass", "OracleGuardError",
    "OutcomeDistribution", "REAL", "RunOptions", "RunResult", "SpecError",
    "StepReport", "StepView", "TargetMap", "TimeSeriesRow", "activity",
    "build_box", "build_layered", "build_torus", "classify", "closed_neighborhood",
    "cluster_histogram", "cluster_moment", "compare_engine_oracle",
    "enumerate_outcomes", "gap_stats", "in_degree_total", "is_absorbed",
    "make_field", "moving_mass_fraction", "naive_step", "pattern_field", "run",
    "sample_field", "step", "targets", "vertex_type",
]
