"""Largest empty boxes and dispersion certificates.

Dispersion is taken over boxes with open interiors: a point on the boundary
of a box does not block it. The supremum is the same for any choice of
interval types and is attained by an open box whose faces each rest on a
point coordinate or on the boundary of the unit cube.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import AxisBox, GridPointSet, UnitPointSet
from .errors import BudgetExceeded, DomainError
from .index_pairs import count_index_pairs, enumerate_index_pairs, pair_arrays, sample_index_pair

DEFAULT_MAX_DIM = 4
DEFAULT_CANDIDATE_BUDGET = 10**8
DEFAULT_CONSTRAINT_BUDGET = 50_000_000
DEFAULT_PAIR_BUDGET = 2_000_000


@dataclass(frozen=True)
class DispersionResult:
    volume: Fraction
    witness: AxisBox


@dataclass(frozen=True)
class VerifyMode:
    """How a verifier covers its constraint family.

    ``exhaustive`` checks everything (subject to budgets); ``sampled`` checks
    ``sample_count`` items drawn from a PCG64 stream seeded with ``seed``.
    """

    kind: str = "exhaustive"
    seed: int = 0
    sample_count: int = 1000

    def __post_init__(self):
        if self.kind not in ("exhaustive", "sampled"):
            raise DomainError(f"unknown verify mode {self.kind!r}")
        if self.sample_count < 1:
            raise DomainError("sample_count must be positive")
        if not (0 <= self.seed < 2**64):
            raise DomainError("seed must be an unsigned 64-bit integer")


def _as_unit(p):
    if isinstance(p, GridPointSet):
        return UnitPointSet(p, p.m, p.d)
    return p


def _box_from_units(bounds, den):
    return AxisBox.open((Fraction(lo, den), Fraction(hi, den)) for lo, hi in bounds)


def exact_dispersion(p, max_dim=DEFAULT_MAX_DIM, candidate_budget=DEFAULT_CANDIDATE_BUDGET):
    """Exact dispersion with the lexicographically smallest maximizing box.

    Endpoints are searched over ``{0, 1}`` and the point coordinates; the last
    axis is resolved in closed form as the widest gap among the points still
    inside the box on the other axes. Ties are broken by the endpoint tuple
    ``(lo_1, hi_1, ..., lo_d, hi_d)``.
    """
    p = _as_unit(p)
    d = p.d
    if d > max_dim:
        raise BudgetExceeded("dimension", d, max_dim, "exact dispersion")
    den = p.denominator
    pts = np.asarray(p.numerators, dtype=np.int64)
    cands = [np.unique(np.concatenate([[0, den], pts[:, j]])) for j in range(d)]
    boxes = math.prod(math.comb(len(c), 2) for c in cands)
    if boxes > candidate_budget:
        raise BudgetExceeded("candidate", boxes, candidate_budget, "exact dispersion")

    best = [0, None]  # volume numerator over den**d, bounds
    bounds = [None] * d

    def last_axis(inside, partial):
        vals = np.unique(np.concatenate([[0, den], inside[:, d - 1]]))
        gaps = np.diff(vals)
        g = int(np.argmax(gaps))
        vol = partial * int(gaps[g])
        if vol > best[0]:
            bounds[d - 1] = (int(vals[g]), int(vals[g + 1]))
            best[0] = vol
            best[1] = list(bounds)

    def rec(axis, inside, partial):
        if axis == d - 1:
            last_axis(inside, partial)
            return
        rest = den ** (d - 1 - axis)
        c = cands[axis]
        col = inside[:, axis]
        for a in range(len(c) - 1):
            lo = int(c[a])
            for bidx in range(a + 1, len(c)):
                hi = int(c[bidx])
                nxt = partial * (hi - lo)
                if nxt * rest <= best[0]:
                    continue
                bounds[axis] = (lo, hi)
                rec(axis + 1, inside[(col > lo) & (col < hi)], nxt)

    rec(0, pts, 1)
    vol = Fraction(best[0], den**d)
    return DispersionResult(vol, _box_from_units(best[1], den))


def dispersion_lower_bound(p, mode=None):
    """Volume of the largest empty box found by seeded randomized growth.

    Each sample places a seed at a random cell centre, shrinks the unit cube
    around it to exclude blocking points one at a time (cutting the axis that
    keeps the most volume), then stretches every axis as far as the points
    allow. The witness is always a genuinely empty box, so the value never
    exceeds the true dispersion.
    """
    mode = mode or VerifyMode("sampled", 0, 256)
    p = _as_unit(p)
    d = p.d
    den = 2 * p.denominator
    pts = 2 * np.asarray(p.numerators, dtype=np.int64)
    rng = np.random.default_rng(mode.seed)
    best_vol, best_bounds = Fraction(-1), None
    for _ in range(mode.sample_count):
        x = 2 * rng.integers(0, den // 2, size=d) + 1
        lo = np.zeros(d, dtype=np.int64)
        hi = np.full(d, den, dtype=np.int64)
        inside = pts[((pts > lo) & (pts < hi)).all(axis=1)]
        while len(inside):
            q = inside[int(rng.integers(0, len(inside)))]
            below = q < x
            new_lo = np.where(below, q, lo)
            new_hi = np.where(below, hi, q)
            cut = (new_hi - new_lo) * 1.0 / np.maximum(hi - lo, 1)
            j = int(np.argmax(cut + rng.random(d) * 1e-9))
            lo[j], hi[j] = new_lo[j], new_hi[j]
            inside = inside[(inside[:, j] > lo[j]) & (inside[:, j] < hi[j])]
        inmask = (pts > lo) & (pts < hi)
        count = inmask.sum(axis=1)
        for j in rng.permutation(d):
            others = (count - inmask[:, j]) == d - 1
            col = pts[others, j]
            left = col[col < x[j]]
            right = col[col > x[j]]
            lo[j] = left.max() if left.size else 0
            hi[j] = right.min() if right.size else den
            newcol = (pts[:, j] > lo[j]) & (pts[:, j] < hi[j])
            count += newcol.astype(count.dtype) - inmask[:, j]
            inmask[:, j] = newcol
        vol = Fraction(math.prod(int(v) for v in hi - lo), den**d)
        if vol > best_vol:
            best_vol, best_bounds = vol, list(zip(lo.tolist(), hi.tolist()))
    return DispersionResult(best_vol, _box_from_units(best_bounds, den))


def verify_condition_s(t, budget=DEFAULT_CONSTRAINT_BUDGET, workers=1):
    """Every ``a_m`` coordinates of ``t`` show all ``(2^m-1)^a_m`` grid patterns."""
    m, d = t.m, t.d
    a = min(m * (1 << m), d)
    base = (1 << m) - 1
    total = math.comb(d, a) * base**a
    if total > budget:
        raise BudgetExceeded("constraint", total, budget, f"condition S, m={m}, d={d}")
    need = base**a
    if len(t) < need:
        return False
    arr = np.asarray(t.array, dtype=np.int64) - 1
    powers = base ** np.arange(a - 1, -1, -1, dtype=np.int64)

    def check(cols):
        return np.unique(arr[:, list(cols)] @ powers).size == need

    subsets = itertools.combinations(range(d), a)
    if workers <= 1:
        return all(check(c) for c in subsets)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return all(pool.map(check, subsets))


def _hits(arr, lows, highs):
    """For each cell (row of lows/highs), whether some point of ``arr`` lies in it."""
    out = np.empty(len(lows), dtype=bool)
    step = max(1, 4_000_000 // max(1, arr.size))
    for a in range(0, len(lows), step):
        lo = lows[a : a + step, None, :]
        hi = highs[a : a + step, None, :]
        out[a : a + step] = ((arr >= lo) & (arr <= hi)).all(axis=2).any(axis=1)
    return out


def verify_condition_s_prime(t, mode=None, budget=DEFAULT_PAIR_BUDGET):
    """``t`` meets the core cell of every nonempty class ``(s, p)``.

    Exhaustive mode enumerates every class; sampled mode draws
    ``mode.sample_count`` classes from a seeded stream.
    """
    mode = mode or VerifyMode()
    m, d = t.m, t.d
    arr = np.asarray(t.array, dtype=np.int64)
    if mode.kind == "exhaustive":
        total = count_index_pairs(m, d)
        if total > budget:
            raise BudgetExceeded("index-pair", total, budget, f"condition S', m={m}, d={d}")
        if len(arr) == 0:
            return total == 0
        lows, highs = pair_arrays(enumerate_index_pairs(m, d, budget))
        return bool(_hits(arr, lows, highs).all())
    if len(arr) == 0:
        return False
    rng = np.random.default_rng(mode.seed)
    pairs = [sample_index_pair(m, d, rng) for _ in range(mode.sample_count)]
    lows, highs = pair_arrays(pairs)
    return bool(_hits(arr, lows, highs).all())
