"""Exact dyadic data model: orders, grid point sets, boxes and headline bounds.

All coordinates live on the grid ``{1/2^m, ..., (2^m-1)/2^m}`` and are stored
as integer numerators over the fixed denominator ``2^m``. No floating point
value takes part in any comparison made here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError

__all__ = [
    "Order",
    "GridPointSet",
    "UnitPointSet",
    "Interval",
    "AxisBox",
    "UpperShape",
    "BoundsReport",
    "as_fraction",
    "make_order",
    "active_indices",
    "to_unit_points",
    "theoretical_bounds",
]


def as_fraction(value):
    """Convert ``value`` to a Fraction without passing through a float.

    Accepts Fractions, integers and strings such as ``"1/4"`` or ``"0.25"``.
    Floats are refused because their binary expansion would leak rounding
    into the grid order.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(
        f"expected an exact rational (Fraction, int or str), got {type(value).__name__}"
    )


@dataclass(frozen=True)
class Order:
    """Grid order ``m`` chosen for a target dispersion ``epsilon`` in dimension ``d``.

    ``a_m`` is the number of coordinates a box of volume larger than ``2^-m``
    can constrain, ``min(m * 2^m, d)``.
    """

    m: int
    epsilon: Fraction
    d: int
    a_m: int

    @property
    def scale(self):
        return 1 << self.m

    @property
    def levels(self):
        """Number of grid values per axis, ``2^m - 1``."""
        return (1 << self.m) - 1


def make_order(epsilon, d):
    eps = as_fraction(epsilon)
    if not (0 < eps <= Fraction(1, 4)):
        raise DomainError(f"epsilon must lie in (0, 1/4], got {eps}")
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    m = 0
    while Fraction(1, 1 << m) > eps:
        m += 1
    return Order(m=m, epsilon=eps, d=d, a_m=min(m * (1 << m), d))


class GridPointSet:
    """Duplicate-free list of integer points in ``{1, ..., 2^m-1}^d``.

    Insertion order is kept; later duplicates are dropped.
    """

    def __init__(self, points, m, d=None):
        if m < 1:
            raise DomainError(f"grid order must be positive, got {m}")
        arr = np.asarray(points, dtype=np.int64)
        if d is None:
            if arr.ndim != 2:
                raise DomainError("cannot infer the dimension of an empty point list")
            d = arr.shape[1]
        arr = arr.reshape(-1, d)
        top = (1 << m) - 1
        if arr.size and (arr.min() < 1 or arr.max() > top):
            raise DomainError(f"grid coordinates must lie in [1, {top}]")
        if len(arr) > 1:
            _, first = np.unique(arr, axis=0, return_index=True)
            if len(first) < len(arr):
                arr = arr[np.sort(first)]
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.m = int(m)
        self.d = int(d)
        self.array = arr

    def __len__(self):
        return len(self.array)

    def __iter__(self):
        return (tuple(int(v) for v in row) for row in self.array)

    def __eq__(self, other):
        if not isinstance(other, GridPointSet):
            return NotImplemented
        return (self.m, self.d) == (other.m, other.d) and np.array_equal(
            self.array, other.array
        )

    def __repr__(self):
        return f"GridPointSet(m={self.m}, d={self.d}, n={len(self)})"


class UnitPointSet:
    """Points of ``(0,1)^d`` with dyadic coordinates ``num / 2^m``.

    Stored as integer numerators over the common denominator ``2^m``;
    ``points`` exposes them as Fractions.
    """

    def __init__(self, numerators, m, d=None):
        grid = numerators if isinstance(numerators, GridPointSet) else GridPointSet(
            numerators, m, d
        )
        self._grid = grid
        self.m = grid.m
        self.d = grid.d

    @classmethod
    def from_rationals(cls, points, d=None):
        """Build from a list of rational vectors; all must be dyadic in (0,1)."""
        pts = [[as_fraction(x) for x in p] for p in points]
        if d is None:
            if not pts:
                raise DomainError("cannot infer the dimension of an empty point list")
            d = len(pts[0])
        m = 1
        for p in pts:
            if len(p) != d:
                raise DomainError("points have inconsistent dimensions")
            for x in p:
                if not (0 < x < 1):
                    raise DomainError(f"coordinate {x} is not strictly inside (0,1)")
                den = x.denominator
                if den & (den - 1):
                    raise DomainError(f"coordinate {x} is not dyadic")
                m = max(m, den.bit_length() - 1)
        scale = 1 << m
        nums = [[int(x * scale) for x in p] for p in pts]
        return cls(np.array(nums, dtype=np.int64).reshape(-1, d), m, d)

    @property
    def numerators(self):
        return self._grid.array

    @property
    def denominator(self):
        return 1 << self.m

    @property
    def points(self):
        den = self.denominator
        return [tuple(Fraction(int(v), den) for v in row) for row in self.numerators]

    def to_grid(self):
        """Inverse of :func:`to_unit_points`."""
        return self._grid

    def __len__(self):
        return len(self._grid)

    def __eq__(self, other):
        if not isinstance(other, UnitPointSet):
            return NotImplemented
        return self._grid == other._grid

    def __repr__(self):
        return f"UnitPointSet(m={self.m}, d={self.d}, n={len(self)})"


def to_unit_points(t):
    return UnitPointSet(t, t.m, t.d)


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self):
        lo, hi = as_fraction(self.lower), as_fraction(self.upper)
        if not (0 <= lo <= hi <= 1):
            raise DomainError(f"interval [{lo}, {hi}] is not inside [0,1]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def length(self):
        return self.upper - self.lower

    def contains(self, x):
        above = x > self.lower or (self.lower_closed and x == self.lower)
        below = x < self.upper or (self.upper_closed and x == self.upper)
        return above and below

    def __str__(self):
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"{left}{self.lower},{self.upper}{right}"


@dataclass(frozen=True)
class AxisBox:
    """Axis-parallel box in ``[0,1]^d`` with per-endpoint open/closed flags."""

    intervals: tuple

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))

    @classmethod
    def closed(cls, bounds):
        return cls(tuple(Interval(lo, hi, True, True) for lo, hi in bounds))

    @classmethod
    def open(cls, bounds):
        return cls(tuple(Interval(lo, hi, False, False) for lo, hi in bounds))

    @property
    def d(self):
        return len(self.intervals)

    @property
    def volume(self):
        vol = Fraction(1)
        for iv in self.intervals:
            vol *= iv.length
        return vol

    def contains(self, point):
        return all(iv.contains(as_fraction(x)) for iv, x in zip(self.intervals, point))

    def closure(self):
        return AxisBox.closed((iv.lower, iv.upper) for iv in self.intervals)

    def __str__(self):
        return "×".join(str(iv) for iv in self.intervals)


def active_indices(box, order):
    """Axes (0-based) whose interval misses part of the grid ``M_m``."""
    first = Fraction(1, order.scale)
    last = Fraction(order.levels, order.scale)
    return frozenset(
        j
        for j, iv in enumerate(box.intervals)
        if not (iv.contains(first) and iv.contains(last))
    )


def _log2_exact(x):
    """log2 of a positive rational; exact Fraction when x is a power of two."""
    x = as_fraction(x)
    num, den = x.numerator, x.denominator
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        return Fraction(num.bit_length() - den.bit_length())
    return math.log2(num) - math.log2(den)


@dataclass(frozen=True)
class UpperShape:
    """Size shape ``C * ((1 + log2(1/eps)) / eps)^6 * log(d*)`` with C unknown."""

    base: object
    exponent: int
    d_star: object
    constant: str = "C (absolute, unspecified)"

    @property
    def without_constant(self):
        return float(self.base) ** self.exponent * math.log(self.d_star)

    def __str__(self):
        return f"{self.constant} * ({self.base})^{self.exponent} * ln({self.d_star})"


@dataclass(frozen=True)
class BoundsReport:
    """Known bounds on the smallest size of a set with dispersion at most eps.

    Values are Fractions when ``log2(d)`` and ``log2(1/eps)`` are integers and
    floats otherwise.
    """

    epsilon: Fraction
    d: int
    lower_bound: object
    uv_upper: object
    sparse_grid: object
    thm44_upper_shape: UpperShape
    sosnovec_note: str


def theoretical_bounds(epsilon, d):
    eps = as_fraction(epsilon)
    if not (0 < eps < Fraction(1, 2)):
        raise DomainError(f"epsilon must lie in (0, 1/2), got {eps}")
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    log_d = _log2_exact(d)
    log_inv = _log2_exact(1 / eps)
    lower = log_d / (8 * eps)
    uv_upper = 2**7 * log_d * (1 + log_inv) ** 2 / eps**2
    if isinstance(log_inv, Fraction) and log_inv.denominator == 1:
        sparse = Fraction(2 * d) ** int(log_inv)
    else:
        sparse = float(2 * d) ** float(log_inv)
    d_star = max(Fraction(d), 2 / eps)
    shape = UpperShape(base=(1 + log_inv) / eps, exponent=6, d_star=d_star)
    note = (
        "derandomized universal-set route: size c_eps * log(d) with c_eps "
        "unspecified and super-exponential in 1/eps"
    )
    return BoundsReport(eps, d, lower, uv_upper, sparse, shape, note)
