"""Bit-exact text format for dyadic point sets.

::

    #dispgen v1 d=2 m=2 n=9 algo=sosnovec seed=-
    1/4,1/4
    1/4,2/4
    ...

Rational fields are ``<num>/<2^m>`` with the denominator written out and
never reduced. The decimal format writes the exact finite decimal expansion
and is meant for reading by people.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import UnitPointSet
from .errors import DomainError

FORMATS = ("rational", "decimal")
_HEADER = re.compile(
    r"^#dispgen v1 d=(\d+) m=(\d+) n=(\d+) algo=(\S+) seed=(\S+)\s*$"
)


class PointFileError(DomainError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class PointFile:
    points: UnitPointSet
    algo: str
    seed: object
    fmt: str


def _decimal(num, m):
    # num / 2^m == num * 5^m / 10^m exactly
    digits = str(num * 5**m).rjust(m + 1, "0")
    frac = digits[-m:].rstrip("0") or "0"
    return f"{digits[:-m]}.{frac}"


def format_points(points, algo="-", seed=None, fmt="rational"):
    if fmt not in FORMATS:
        raise DomainError(f"unknown format {fmt!r}")
    m, d = points.m, points.d
    den = 1 << m
    out = io.StringIO()
    seed_s = "-" if seed is None else str(seed)
    out.write(f"#dispgen v1 d={d} m={m} n={len(points)} algo={algo} seed={seed_s}\n")
    for row in points.numerators.tolist():
        if fmt == "rational":
            out.write(",".join(f"{v}/{den}" for v in row))
        else:
            out.write(",".join(_decimal(v, m) for v in row))
        out.write("\n")
    return out.getvalue()


def write_points(path, points, algo="-", seed=None, fmt="rational"):
    text = format_points(points, algo, seed, fmt)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def parse_points(text):
    lines = text.splitlines()
    if not lines:
        raise PointFileError("empty file", 1)
    head = _HEADER.match(lines[0])
    if not head:
        raise PointFileError("missing or malformed '#dispgen v1' header", 1)
    d, m, n = (int(head.group(i)) for i in (1, 2, 3))
    algo, seed = head.group(4), head.group(5)
    seed = None if seed == "-" else int(seed)
    if d < 1 or m < 1:
        raise PointFileError("header needs d >= 1 and m >= 1", 1)
    den = 1 << m
    rows = []
    fmt = None
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != d:
            raise PointFileError(f"expected {d} fields, found {len(fields)}", lineno)
        row = []
        for f in fields:
            f = f.strip()
            kind = "rational" if "/" in f else "decimal"
            if fmt is None:
                fmt = kind
            elif kind != fmt:
                raise PointFileError("mixed rational and decimal fields", lineno)
            if kind == "rational":
                num_s, _, den_s = f.partition("/")
                if not (num_s.isdigit() and den_s.isdigit()):
                    raise PointFileError(f"bad rational field {f!r}", lineno)
                if int(den_s) != den:
                    raise PointFileError(f"denominator {den_s} differs from 2^m = {den}", lineno)
                num = int(num_s)
            else:
                try:
                    val = Fraction(f)
                except ValueError:
                    raise PointFileError(f"bad decimal field {f!r}", lineno) from None
                scaled = val * den
                if scaled.denominator != 1:
                    raise PointFileError(f"{f} is not a multiple of 1/{den}", lineno)
                num = int(scaled)
            if not (0 < num < den):
                raise PointFileError(f"coordinate {f} is not strictly inside (0,1)", lineno)
            row.append(num)
        rows.append(row)
    if len(rows) != n:
        raise PointFileError(f"header announces {n} points, file has {len(rows)}")
    arr = np.array(rows, dtype=np.int64).reshape(-1, d)
    pts = UnitPointSet(arr, m, d)
    if len(pts) != n:
        raise PointFileError("file contains duplicate points")
    return PointFile(pts, algo, seed, fmt or "rational")


def read_points(path):
    with open(path, encoding="ascii") as fh:
        return parse_points(fh.read())
