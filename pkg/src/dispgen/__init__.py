"""Deterministic constructions of small point sets with low dispersion."""

from .core import (
    AxisBox,
    BoundsReport,
    GridPointSet,
    Interval,
    Order,
    UnitPointSet,
    active_indices,
    make_order,
    theoretical_bounds,
    to_unit_points,
)
from .dispersion import (
    DispersionResult,
    VerifyMode,
    dispersion_lower_bound,
    exact_dispersion,
    verify_condition_s,
    verify_condition_s_prime,
)
from .errors import BudgetExceeded, CertificationError, DomainError, InfeasibleInstance
from .index_pairs import (
    GridCell,
    IndexPair,
    core_box,
    core_cell,
    count_index_pairs,
    enumerate_index_pairs,
)
from .krestriction import (
    RestrictionProblem,
    RestrictionSet,
    WordSet,
    singleton_problem,
    solve_greedy,
    solve_randomized,
    union_bound_size,
    verify_solution,
)
from .pipelines import (
    PipelineOptions,
    PipelineRun,
    algorithm1,
    algorithm2,
    build_uv_system,
    random_baseline,
    run_algorithm1,
    run_algorithm2,
)
from .pointfile import format_points, parse_points, read_points, write_points
from .splitters import SplitterFamily, build_rs_splitter, compose, is_splitter
from .universal import UniversalSpec, build_universal, is_universal

__version__ = "0.1.0"
