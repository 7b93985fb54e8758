"""(n, k, k^2)-splitters from Reed-Solomon codes, and composition with them.

Index ``i`` is assigned a polynomial of degree below ``K`` over the prime
field ``GF(q)``, ``q >= k^2``; map ``h_x`` sends ``i`` to the value of its
polynomial at ``x``. Two distinct polynomials agree on at most ``K - 1``
points, so with ``L > (K - 1) * k(k-1)/2`` evaluation points every ``k``-set
of indices is separated by some ``h_x``.

Only polynomials whose ``L`` values all lie below ``k^2`` are used, so the
maps land in ``{1..k^2}`` without any symbol folding and the distance
argument holds verbatim.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, CertificationError, DomainError
from .krestriction import WordSet

DEFAULT_SUBSET_BUDGET = 5_000_000
DEFAULT_MESSAGE_BUDGET = 20_000_000


@dataclass(frozen=True)
class RSCode:
    q: int
    message_length: int
    block_length: int

    @property
    def distance_fraction(self):
        """Lower bound on the normalized Hamming distance, ``1 - (K-1)/L``."""
        return 1 - (self.message_length - 1) / self.block_length


@dataclass(frozen=True, eq=False)
class SplitterFamily:
    """Maps ``{1..n} -> {1..l}``; row ``j`` of ``maps`` is the ``j``-th map."""

    n: int
    k: int
    l: int
    maps: np.ndarray
    code: RSCode = None

    def __len__(self):
        return len(self.maps)


def _is_prime(v):
    if v < 2:
        return False
    return all(v % p for p in range(2, math.isqrt(v) + 1))


def _next_prime(v):
    while not _is_prime(v):
        v += 1
    return v


def _codewords_below(q, K, L, limit, want, budget):
    """First ``want`` codewords (message order) whose symbols are all ``< limit``."""
    total = q**K
    if total > budget:
        raise BudgetExceeded("message", total, budget, f"q={q}, K={K}")
    points = np.arange(L, dtype=np.int64)
    powers = np.ones((K, L), dtype=np.int64)
    for t in range(1, K):
        powers[t] = powers[t - 1] * points % q
    found = []
    step = max(1, 2_000_000 // max(1, K * L))
    for start in range(0, total, step):
        msgs = np.arange(start, min(total, start + step), dtype=np.int64)
        coeffs = np.stack([(msgs // q**t) % q for t in range(K)], axis=1)
        words = coeffs @ powers % q
        ok = words[(words < limit).all(axis=1)]
        found.append(ok[: want - sum(len(f) for f in found)])
        if sum(len(f) for f in found) >= want:
            break
    return np.concatenate(found) if found else np.zeros((0, L), np.int64)


def build_rs_splitter(n, k, certify=True, budget=DEFAULT_SUBSET_BUDGET):
    if k < 1 or n < k:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    l = k * k
    if k == 1:
        fam = SplitterFamily(n, k, l, np.ones((1, n), dtype=np.int64))
        return fam
    pairs = k * (k - 1) // 2
    q = _next_prime(l)
    K = 1
    while q**K < n:
        K += 1
    while True:
        L = (K - 1) * pairs + 1
        if L > q:
            # not enough evaluation points in this field
            q = _next_prime(q + 1)
            K = 1
            while q**K < n:
                K += 1
            continue
        words = _codewords_below(q, K, L, l, n, DEFAULT_MESSAGE_BUDGET)
        if len(words) >= n:
            break
        K += 1
    maps = np.ascontiguousarray(words.T + 1)
    maps.flags.writeable = False
    fam = SplitterFamily(n, k, l, maps, RSCode(q, K, L))
    if certify and math.comb(n, k) <= budget and not is_splitter(fam, budget):
        raise CertificationError(f"Reed-Solomon family failed to split for n={n}, k={k}")
    return fam


def _splits(vals, l, k):
    """``vals``: (..., k) symbols; True where the k symbols are split perfectly."""
    if l >= k:
        srt = np.sort(vals, axis=-1)
        return (np.diff(srt, axis=-1) != 0).all(axis=-1)
    counts = np.zeros(vals.shape[:-1] + (l,), dtype=np.int64)
    for r in range(k):
        np.put_along_axis(
            counts,
            vals[..., r : r + 1] - 1,
            np.take_along_axis(counts, vals[..., r : r + 1] - 1, axis=-1) + 1,
            axis=-1,
        )
    return counts.max(axis=-1) - counts.min(axis=-1) <= 1


def is_splitter(a, budget=DEFAULT_SUBSET_BUDGET):
    """Every ``k``-subset is split perfectly by at least one map."""
    total = math.comb(a.n, a.k)
    if total > budget:
        raise BudgetExceeded("subset", total, budget, f"n={a.n}, k={a.k}")
    maps = np.asarray(a.maps, dtype=np.int64)
    if len(maps) == 0:
        return False
    subsets = itertools.combinations(range(a.n), a.k)
    step = max(1, 1_000_000 // (len(maps) * a.k))
    while True:
        chunk = list(itertools.islice(subsets, step))
        if not chunk:
            return True
        vals = maps[:, np.array(chunk, dtype=np.int64)]  # (L, B, k)
        if not _splits(vals, a.l, a.k).any(axis=0).all():
            return False


def compose(t, a):
    """``{tau o h : tau in t, h in a}`` as words of length ``a.n``, tau-major order."""
    if t.n != a.l:
        raise DomainError(f"word length {t.n} does not match splitter codomain {a.l}")
    maps = np.asarray(a.maps, dtype=np.int64) - 1
    words = t.words[:, maps].reshape(-1, a.n)
    return WordSet(words, a.n, t.b)
