"""(n, k, b)-universal sets.

A word set over ``{0..b-1}^n`` is universal when its projection onto every
``k`` coordinates shows all ``b^k`` patterns. Construction goes through the
k-restriction engine with singleton demand sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, CertificationError, DomainError
from .krestriction import (
    DEFAULT_CONSTRAINT_BUDGET,
    WordSet,
    singleton_problem,
    solve_greedy,
    verify_solution,
)

STRATEGIES = ("direct_greedy", "splitter_composed")


@dataclass(frozen=True)
class UniversalSpec:
    n: int
    k: int
    b: int

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise DomainError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.b < 2:
            raise DomainError(f"alphabet size must be at least 2, got {self.b}")


def is_universal(t, spec, budget=DEFAULT_CONSTRAINT_BUDGET, workers=1):
    if t.n != spec.n or t.b != spec.b:
        raise DomainError("word set does not match the universal-set parameters")
    total = math.comb(spec.n, spec.k) * spec.b**spec.k
    if total > budget:
        raise BudgetExceeded("constraint", total, budget, repr(spec))
    need = spec.b**spec.k
    if len(t) < need:
        return False
    powers = spec.b ** np.arange(spec.k - 1, -1, -1, dtype=np.int64)
    for cols in itertools.combinations(range(spec.n), spec.k):
        codes = t.words[:, list(cols)] @ powers
        if np.unique(codes).size != need:
            return False
    return True


def reduce_alphabet(t):
    """Map the top symbol ``b`` to ``0``; the result lives over ``{0..b-1}``."""
    if t.b < 3:
        raise DomainError("alphabet reduction needs an alphabet of size at least 3")
    top = t.b - 1
    words = np.where(t.words == top, 0, t.words)
    return WordSet(words, t.n, top)


def group_digits(t, m):
    """Read consecutive ``m``-bit blocks as base-2 digits, most significant first."""
    if t.b != 2:
        raise DomainError("digit grouping needs a binary word set")
    if m < 1 or t.n % m:
        raise DomainError(f"word length {t.n} is not divisible by block size {m}")
    n = t.n // m
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    words = t.words.reshape(len(t), n, m) @ weights
    return WordSet(words, n, 1 << m)


def build_universal(spec, strategy="direct_greedy", budget=DEFAULT_CONSTRAINT_BUDGET,
                    certify=True):
    """Certified universal set from the singleton k-restriction problem.

    ``splitter_composed`` solves at length ``k^2`` and pulls the solution back
    through an ``(n, k, k^2)``-splitter; it falls back to the direct solve
    when ``n <= k^2``.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    problem = singleton_problem(spec.n, spec.k, spec.b)
    if strategy == "splitter_composed" and spec.n > spec.k**2:
        from .splitters import build_rs_splitter, compose

        core = solve_greedy(problem.with_length(spec.k**2), budget=budget)
        words = compose(core.words, build_rs_splitter(spec.n, spec.k))
    else:
        words = solve_greedy(problem, budget=budget).words
    if certify:
        try:
            ok = verify_solution(words, problem, budget=budget)
        except BudgetExceeded:
            ok = None
        if ok is False:
            raise CertificationError(f"constructed set is not universal for {spec}")
    return words
