"""End-to-end constructions of point sets with dispersion at most epsilon.

``algorithm1`` builds a point set whose every ``a_m`` coordinates show every
grid pattern (condition S). ``algorithm2`` only asks the set to meet the core
cell of each class of large boxes (condition S'), which allows far smaller
sets; the core cells form a k-restriction system that is solved on a short
length and pulled back through a splitter when the dimension is large.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GridPointSet, as_fraction, make_order, to_unit_points
from .dispersion import VerifyMode, verify_condition_s, verify_condition_s_prime
from .errors import BudgetExceeded, CertificationError, DomainError, InfeasibleInstance
from .index_pairs import (
    DEFAULT_PAIR_BUDGET,
    IndexPair,
    core_box,
    core_cell,
    count_index_pairs,
    enumerate_index_pairs,
    pair_arrays,
)
from .krestriction import (
    DEFAULT_CONSTRAINT_BUDGET,
    RestrictionProblem,
    RestrictionSet,
    singleton_problem,
    solve_greedy,
    solve_randomized,
    union_bound_size,
)
from .splitters import build_rs_splitter, compose
from .universal import UniversalSpec, build_universal

__all__ = [
    "IndexPair",
    "UVSystem",
    "PipelineOptions",
    "PipelineRun",
    "enumerate_index_pairs",
    "core_box",
    "core_cell",
    "build_uv_system",
    "algorithm1",
    "algorithm2",
    "run_algorithm1",
    "run_algorithm2",
    "random_baseline",
    "random_baseline_size",
]


@dataclass(frozen=True)
class UVSystem:
    """Core cells (shifted to 0-based symbols) of the classes supported on the
    first ``arity`` coordinates."""

    m: int
    arity: int
    pairs: tuple
    problem: RestrictionProblem

    @property
    def M(self):
        return self.problem.M

    @property
    def c(self):
        return self.problem.c


def build_uv_system(m, arity=None, budget=DEFAULT_PAIR_BUDGET):
    """Canonical restriction system for grid order ``m``.

    A class whose coordinates beyond ``arity`` all span the full grid must
    have ``s_j = 2^m - 1`` and hence ``p_j = 1/2^m`` there, so the canonical
    classes are exactly the nonempty classes in dimension ``arity``. The
    result is checked against ``M <= 2^(2 m arity)`` and
    ``c >= 2^(-m-4) (2^m - 1)^arity``.
    """
    arity = m * (1 << m) if arity is None else arity
    if arity < 1:
        raise DomainError(f"arity must be positive, got {arity}")
    total = count_index_pairs(m, arity)
    if total > budget:
        raise InfeasibleInstance(
            "index-pair", total, budget, f"canonical system at m={m}, arity={arity}"
        )
    pairs = tuple(enumerate_index_pairs(m, arity, budget))
    b = (1 << m) - 1
    lows, highs = pair_arrays(pairs)
    sets = [RestrictionSet.box(lo - 1, hi - 1, b) for lo, hi in zip(lows, highs)]
    problem = RestrictionProblem(b, arity, arity, sets)
    if problem.M > 2 ** (2 * m * arity):
        raise CertificationError(f"system has {problem.M} sets, above 2^(2 m arity)")
    if problem.c * 2 ** (m + 4) < b**arity:
        raise CertificationError(f"smallest set {problem.c} is below 2^(-m-4) b^arity")
    return UVSystem(m, arity, pairs, problem)


@dataclass(frozen=True)
class PipelineOptions:
    """Knobs shared by both constructions.

    ``k_override`` replaces the arity ``a_m`` by a smaller value; it exercises
    the machinery on large dimensions but voids the dispersion certificate.
    ``verify=None`` skips certification.
    """

    solver: str = "greedy"
    seed: int = 0
    k_override: int = None
    verify: VerifyMode = field(default_factory=VerifyMode)
    budget: int = DEFAULT_CONSTRAINT_BUDGET
    pair_budget: int = DEFAULT_PAIR_BUDGET
    workers: int = 1

    def __post_init__(self):
        if self.solver not in ("greedy", "randomized"):
            raise DomainError(f"unknown solver {self.solver!r}")
        if self.k_override is not None and self.k_override < 1:
            raise DomainError("k_override must be positive")


@dataclass
class PipelineRun:
    """Output of a construction plus what is known about it."""

    algorithm: str
    points: object
    m: int
    d: int
    d_star: int
    k: int
    # "condition-S", "condition-S-prime", "voided", "unchecked" or "failed"
    certificate: str
    details: dict = field(default_factory=dict)


def _solve(problem, opts):
    if opts.solver == "greedy":
        return solve_greedy(problem, budget=opts.budget).words
    return solve_randomized(
        problem, opts.seed, max(1, union_bound_size(problem)), budget=opts.budget
    ).words


def _arity(order, opts):
    if opts.k_override is None:
        return order.a_m
    if opts.k_override > order.a_m:
        raise DomainError(f"k_override {opts.k_override} exceeds a_m = {order.a_m}")
    return opts.k_override


def _certify(run, check, opts):
    if run.k != run.details["a_m"]:
        run.certificate = "voided"
        return run
    if opts.verify is None:
        run.certificate = "unchecked"
        return run
    try:
        ok = check()
    except BudgetExceeded as exc:
        run.certificate = "unchecked"
        run.details["verify_error"] = str(exc)
        return run
    if not ok:
        raise CertificationError(f"{run.algorithm} output failed its certificate")
    return run


def run_algorithm1(epsilon, d, opts=None):
    opts = opts or PipelineOptions()
    order = make_order(epsilon, d)
    k = _arity(order, opts)
    b = order.levels
    if opts.solver == "greedy":
        words = build_universal(UniversalSpec(d, k, b), budget=opts.budget, certify=False)
    else:
        words = _solve(singleton_problem(d, k, b), opts)
    grid = GridPointSet(words.words + 1, order.m, d)
    run = PipelineRun(
        "sosnovec", to_unit_points(grid), order.m, d, d, k, "condition-S",
        {"a_m": order.a_m},
    )
    if opts.verify is not None and opts.verify.kind == "sampled":
        run.details["verify_note"] = "condition S is always checked exhaustively"
    return _certify(
        run, lambda: verify_condition_s(grid, budget=opts.budget, workers=opts.workers), opts
    )


def run_algorithm2(epsilon, d, opts=None):
    opts = opts or PipelineOptions()
    eps = as_fraction(epsilon)
    make_order(eps, d)
    d_star = max(d, math.floor(2 / eps))
    order = make_order(eps, d_star)
    m = order.m
    k = _arity(order, opts)
    uv = build_uv_system(m, k, budget=opts.pair_budget)
    details = {"a_m": order.a_m, "M": uv.M, "c": uv.c}
    try:
        if d_star <= k * k:
            words = _solve(uv.problem.with_length(d_star), opts)
            details["route"] = "direct"
        else:
            core = _solve(uv.problem.with_length(k * k), opts)
            splitter = build_rs_splitter(d_star, k, certify=False)
            words = compose(core, splitter)
            details.update(route="splitter", core_size=len(core), splitter_size=len(splitter))
    except BudgetExceeded as exc:
        if isinstance(exc, InfeasibleInstance):
            raise
        raise InfeasibleInstance(
            exc.budget, exc.required, exc.limit, f"restriction problem at m={m}, k={k}"
        ) from exc
    grid = GridPointSet(words.words[:, :d] + 1, m, d)
    run = PipelineRun(
        "uv", to_unit_points(grid), m, d, d_star, k, "condition-S-prime", details
    )
    return _certify(
        run,
        lambda: verify_condition_s_prime(grid, opts.verify, budget=opts.pair_budget),
        opts,
    )


def algorithm1(epsilon, d, opts=None):
    return run_algorithm1(epsilon, d, opts).points


def algorithm2(epsilon, d, opts=None):
    return run_algorithm2(epsilon, d, opts).points


def random_baseline_size(epsilon, d):
    """``ceil(m 2^(2m+4) ln(2^(m+3) d))`` draws for the uncertified baseline."""
    order = make_order(epsilon, d)
    m = order.m
    return math.ceil(m * 2 ** (2 * m + 4) * math.log(2 ** (m + 3) * d))


def random_baseline(epsilon, d, seed=0):
    """I.i.d. uniform grid points from a PCG64 stream; duplicates are dropped."""
    order = make_order(epsilon, d)
    n = random_baseline_size(epsilon, d)
    rng = np.random.default_rng(seed)
    pts = rng.integers(1, order.scale, size=(n, d), dtype=np.int64)
    return to_unit_points(GridPointSet(pts, order.m, d))
