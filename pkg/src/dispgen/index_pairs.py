"""Classes of large boxes indexed by pairs ``(s, p)``.

A pair fixes, per axis, the approximate side length ``s / 2^m`` and the
approximate left end ``p`` of a box of volume larger than ``2^-m``. The class
is nonempty exactly when every axis fits (``P + s <= 2^m`` where ``P = 2^m p``)
and the largest attainable volume, ``prod (s_l + 1) / 2^(m d)``, exceeds
``2^-m``. Every nonempty class contains the closed *core box*
``prod [p_l, p_l + (s_l - 1) / 2^m]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import AxisBox
from .errors import BudgetExceeded, DomainError

DEFAULT_PAIR_BUDGET = 2_000_000


@dataclass(frozen=True)
class IndexPair:
    """Pair ``(s, p)`` with ``p`` stored as integer numerators over ``2^m``."""

    m: int
    s: tuple
    p_num: tuple

    @property
    def d(self):
        return len(self.s)

    @property
    def p(self):
        den = 1 << self.m
        return tuple(Fraction(v, den) for v in self.p_num)


@dataclass(frozen=True)
class GridCell:
    """Integer product range ``prod [lows_l, highs_l]`` inside ``{1..2^m-1}^d``."""

    lows: tuple
    highs: tuple

    @property
    def size(self):
        out = 1
        for lo, hi in zip(self.lows, self.highs):
            out *= hi - lo + 1
        return out

    def contains(self, point):
        return all(lo <= x <= hi for lo, x, hi in zip(self.lows, point, self.highs))

    def points(self):
        return itertools.product(*(range(lo, hi + 1) for lo, hi in zip(self.lows, self.highs)))


def axis_options(m):
    """Per-axis ``(s, P)`` choices that fit inside ``[0, 1]``, in lexicographic order."""
    top = 1 << m
    return [(s, P) for s in range(top) for P in range(1, top) if P + s <= top]


def count_index_pairs(m, d):
    """Number of nonempty classes, computed without listing them."""
    top = 1 << m
    threshold = top ** (d - 1)
    weight = {}
    for s, _ in axis_options(m):
        weight[s + 1] = weight.get(s + 1, 0) + 1
    # distribution of prod(s_l + 1), capped at threshold + 1
    dist = {1: 1}
    for _ in range(d):
        nxt = {}
        for prod, cnt in dist.items():
            for f, w in weight.items():
                key = min(prod * f, threshold + 1)
                nxt[key] = nxt.get(key, 0) + cnt * w
        dist = nxt
    return dist.get(threshold + 1, 0)


def is_index_pair(m, s, p_num):
    top = 1 << m
    if len(s) != len(p_num):
        return False
    prod = 1
    for sl, pl in zip(s, p_num):
        if not (0 <= sl < top and 1 <= pl < top and pl + sl <= top):
            return False
        prod *= sl + 1
    return prod > top ** (len(s) - 1)


def enumerate_index_pairs(m, d, budget=DEFAULT_PAIR_BUDGET):
    """All pairs whose class is nonempty, lexicographic over axes."""
    if m < 1 or d < 1:
        raise DomainError(f"need m >= 1 and d >= 1, got m={m}, d={d}")
    total = count_index_pairs(m, d)
    if total > budget:
        raise BudgetExceeded("index-pair", total, budget, f"m={m}, d={d}")
    top = 1 << m
    threshold = top ** (d - 1)
    opts = axis_options(m)
    out = []
    s_acc = [0] * d
    p_acc = [0] * d

    def rec(axis, prod):
        if axis == d:
            if prod > threshold:
                out.append(IndexPair(m, tuple(s_acc), tuple(p_acc)))
            return
        room = top ** (d - axis - 1)
        for s, P in opts:
            nxt = prod * (s + 1)
            if nxt * room <= threshold:
                continue
            s_acc[axis] = s
            p_acc[axis] = P
            rec(axis + 1, nxt)

    rec(0, 1)
    return out


def core_box(pair, m=None):
    m = pair.m if m is None else m
    den = 1 << m
    bounds = [
        (Fraction(P, den), Fraction(P + s - 1, den)) for s, P in zip(pair.s, pair.p_num)
    ]
    return AxisBox.closed(bounds)


def core_cell(pair, m=None):
    """Grid points of the core box, scaled by ``2^m``."""
    return GridCell(
        tuple(pair.p_num), tuple(P + s - 1 for s, P in zip(pair.s, pair.p_num))
    )


def pair_arrays(pairs):
    """Stack cells of ``pairs`` as ``(lows, highs)`` integer arrays."""
    if not pairs:
        return np.zeros((0, 0), np.int64), np.zeros((0, 0), np.int64)
    s = np.array([p.s for p in pairs], dtype=np.int64)
    lo = np.array([p.p_num for p in pairs], dtype=np.int64)
    return lo, lo + s - 1


def sample_index_pair(m, d, rng):
    """Draw a pair from the nonempty classes (not uniformly).

    Starts from the full box and shrinks random axes while the class stays
    nonempty, then places each axis uniformly among its fitting offsets.
    """
    top = 1 << m
    threshold = top ** (d - 1)
    s = [top - 1] * d
    prod = top**d
    for _ in range(int(rng.integers(0, 4 * min(m * top, d) + 1))):
        axis = int(rng.integers(0, d))
        new = int(rng.integers(0, s[axis] + 1))
        cand = prod // (s[axis] + 1) * (new + 1)
        if cand > threshold:
            prod = cand
            s[axis] = new
    p = [int(rng.integers(1, min(top - 1, top - sl) + 1)) for sl in s]
    return IndexPair(m, tuple(s), tuple(p))
