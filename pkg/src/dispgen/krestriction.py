"""Generic k-restriction problems.

A problem over words of length ``n`` and alphabet ``{0..b-1}`` lists demand
sets ``C_1..C_M`` of length-``k`` patterns. A word set solves it when, for
every ``k``-subset ``S`` of positions (read in increasing order) and every
demand set ``C_j``, some word restricted to ``S`` lies in ``C_j``.

Demand sets are either *boxes* (products of per-position symbol ranges; the
singleton demands of universal sets and the core cells of the dispersion
construction are of this kind) or *explicit* pattern lists.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, CertificationError, DomainError

DEFAULT_CONSTRAINT_BUDGET = 20_000_000
DEFAULT_PATTERN_BUDGET = 10_000_000

__all__ = [
    "WordSet",
    "RestrictionSet",
    "RestrictionProblem",
    "RestrictionSolution",
    "RetryCapExceeded",
    "singleton_problem",
    "union_bound_size",
    "solve_greedy",
    "solve_randomized",
    "verify_solution",
]


class RetryCapExceeded(RuntimeError):
    """The randomized solver drew its maximum number of batches without success."""


class WordSet:
    """Duplicate-free list of words in ``{0..b-1}^n``; first occurrence wins."""

    def __init__(self, words, n, b):
        arr = np.asarray(words, dtype=np.int64).reshape(-1, n)
        if arr.size and (arr.min() < 0 or arr.max() >= b):
            raise DomainError(f"word entries must lie in [0, {b - 1}]")
        if len(arr) > 1:
            _, first = np.unique(arr, axis=0, return_index=True)
            if len(first) < len(arr):
                arr = arr[np.sort(first)]
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.n = int(n)
        self.b = int(b)
        self.words = arr

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return (tuple(int(v) for v in row) for row in self.words)

    def __eq__(self, other):
        if not isinstance(other, WordSet):
            return NotImplemented
        return (self.n, self.b) == (other.n, other.b) and np.array_equal(
            self.words, other.words
        )

    def __repr__(self):
        return f"WordSet(n={self.n}, b={self.b}, size={len(self)})"


def _decode(codes, b, k):
    """Big-endian base-``b`` digits of ``codes`` as a ``(len, k)`` array."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((codes.size, k), dtype=np.int64)
    rest = codes.copy()
    for r in range(k - 1, -1, -1):
        out[:, r] = rest % b
        rest //= b
    return out


def _encode(patterns, b):
    patterns = np.asarray(patterns, dtype=np.int64)
    code = np.zeros(patterns.shape[:-1], dtype=np.int64)
    for r in range(patterns.shape[-1]):
        code = code * b + patterns[..., r]
    return code


class RestrictionSet:
    """One demand set of length-``k`` patterns over ``{0..b-1}``."""

    def __init__(self, k, b, lows=None, highs=None, patterns=None):
        self.k = int(k)
        self.b = int(b)
        if patterns is None:
            self.lows = tuple(int(v) for v in lows)
            self.highs = tuple(int(v) for v in highs)
            if len(self.lows) != self.k or len(self.highs) != self.k:
                raise DomainError("box bounds must have length k")
            if any(not (0 <= lo <= hi < self.b) for lo, hi in zip(self.lows, self.highs)):
                raise DomainError("box bounds must satisfy 0 <= low <= high < b")
            self._patterns = None
        else:
            pats = np.asarray(patterns, dtype=np.int64).reshape(-1, self.k)
            if len(pats) == 0:
                raise DomainError("a demand set must be nonempty")
            if pats.min() < 0 or pats.max() >= self.b:
                raise DomainError(f"pattern entries must lie in [0, {self.b - 1}]")
            pats = np.unique(pats, axis=0)
            pats.flags.writeable = False
            self.lows = self.highs = None
            self._patterns = pats

    @classmethod
    def box(cls, lows, highs, b):
        return cls(len(lows), b, lows=lows, highs=highs)

    @classmethod
    def singleton(cls, pattern, b):
        return cls(len(pattern), b, lows=pattern, highs=pattern)

    @classmethod
    def explicit(cls, patterns, b, k=None):
        pats = [tuple(p) for p in patterns]
        if k is None:
            if not pats:
                raise DomainError("a demand set must be nonempty")
            k = len(pats[0])
        return cls(k, b, patterns=pats)

    @classmethod
    def from_predicate(cls, k, b, predicate, budget=DEFAULT_PATTERN_BUDGET):
        """Materialize ``{x in {0..b-1}^k : predicate(x)}`` by enumeration."""
        if b**k > budget:
            raise BudgetExceeded("pattern", b**k, budget, "predicate enumeration")
        pats = [x for x in itertools.product(range(b), repeat=k) if predicate(x)]
        return cls(k, b, patterns=pats)

    @property
    def is_box(self):
        return self._patterns is None

    @property
    def size(self):
        if self.is_box:
            return math.prod(hi - lo + 1 for lo, hi in zip(self.lows, self.highs))
        return len(self._patterns)

    def contains(self, pattern):
        if self.is_box:
            return all(lo <= x <= hi for lo, x, hi in zip(self.lows, pattern, self.highs))
        row = np.asarray(pattern, dtype=np.int64)
        return bool((self._patterns == row).all(axis=1).any())

    def patterns(self):
        """All member patterns, sorted lexicographically."""
        if not self.is_box:
            return self._patterns
        grids = [np.arange(lo, hi + 1) for lo, hi in zip(self.lows, self.highs)]
        mesh = np.meshgrid(*grids, indexing="ij")
        return np.stack([g.ravel() for g in mesh], axis=1).astype(np.int64)

    def permuted(self, perm):
        """The set obtained by moving position ``perm[r]`` to position ``r``."""
        perm = list(perm)
        if self.is_box:
            return RestrictionSet(
                self.k,
                self.b,
                lows=[self.lows[p] for p in perm],
                highs=[self.highs[p] for p in perm],
            )
        return RestrictionSet(self.k, self.b, patterns=self._patterns[:, perm])

    def key(self):
        if self.is_box:
            return ("box", self.lows, self.highs)
        return ("explicit", self._patterns.tobytes())

    def __repr__(self):
        kind = "box" if self.is_box else "explicit"
        return f"RestrictionSet({kind}, k={self.k}, b={self.b}, size={self.size})"


class RestrictionProblem:
    """Parameters ``(b, k, n)`` plus the demand sets; ``c`` is the smallest set size."""

    def __init__(self, b, k, n, sets):
        if not (1 <= k <= n):
            raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
        if b < 1:
            raise DomainError(f"alphabet size must be positive, got {b}")
        sets = list(sets)
        for cs in sets:
            if cs.k != k or cs.b != b:
                raise DomainError("demand set parameters do not match the problem")
        self.b, self.k, self.n = int(b), int(k), int(n)
        self.sets = sets
        self.M = len(sets)
        self.c = min((cs.size for cs in sets), default=b**k)

    @property
    def constraint_count(self):
        return math.comb(self.n, self.k) * self.M

    def is_permutation_invariant(self, samples=24, seed=0):
        """Spot-check that permuting the ``k`` positions maps the system onto itself.

        Checks all ``k!`` permutations when there are at most ``samples`` of
        them, otherwise ``samples`` random ones.
        """
        keys = {cs.key() for cs in self.sets}
        if math.factorial(self.k) <= samples:
            perms = itertools.permutations(range(self.k))
        else:
            rng = np.random.default_rng(seed)
            perms = (rng.permutation(self.k) for _ in range(samples))
        return all(
            cs.permuted(perm).key() in keys for perm in perms for cs in self.sets
        )

    def with_length(self, n):
        return RestrictionProblem(self.b, self.k, n, self.sets)

    def __repr__(self):
        return (
            f"RestrictionProblem(b={self.b}, k={self.k}, n={self.n}, "
            f"M={self.M}, c={self.c})"
        )


@dataclass
class RestrictionSolution:
    problem: RestrictionProblem
    words: WordSet
    # uncovered constraint count after each accepted word
    history: tuple = field(default=())

    def __len__(self):
        return len(self.words)


def singleton_problem(n, k, b):
    """Universal-set demands: all ``b^k`` singleton pattern sets."""
    sets = [RestrictionSet.singleton(p, b) for p in itertools.product(range(b), repeat=k)]
    return RestrictionProblem(b, k, n, sets)


def union_bound_size(problem):
    """``ceil((b^k / c) * ln(n^k * M))``, and at least one word."""
    b, k, n, M, c = problem.b, problem.k, problem.n, problem.M, problem.c
    if M == 0:
        return 0
    log_term = k * math.log(n) + math.log(M)
    return max(1, math.ceil(b**k / c * log_term))


class _System:
    """Vectorized view of a problem's demand sets and position subsets."""

    def __init__(self, problem, budget, with_subsets=True):
        total = problem.constraint_count
        if total > budget:
            raise BudgetExceeded("constraint", total, budget, repr(problem))
        b, k, n = problem.b, problem.k, problem.n
        self.b, self.k, self.n, self.M = b, k, n, problem.M
        self.bk = b**k
        if total * self.bk >= 2**62:
            raise BudgetExceeded("weight", total * self.bk, 2**62, "int64 accumulator")
        self.U = math.comb(n, k)
        if with_subsets:
            self.subsets = np.array(
                list(itertools.combinations(range(n), k)), dtype=np.int64
            ).reshape(-1, k)
        self.is_box = all(cs.is_box for cs in problem.sets)
        if self.is_box:
            self.lows = np.array([cs.lows for cs in problem.sets], dtype=np.int64).reshape(-1, k)
            self.highs = np.array([cs.highs for cs in problem.sets], dtype=np.int64).reshape(-1, k)
            sizes = self.highs - self.lows + 1
            suffix = np.ones((self.M, k + 1), dtype=np.int64)
            for r in range(k - 1, -1, -1):
                suffix[:, r] = suffix[:, r + 1] * sizes[:, r]
            self.suffix = suffix
        else:
            n_pat = sum(cs.size for cs in problem.sets)
            if n_pat > DEFAULT_PATTERN_BUDGET:
                raise BudgetExceeded("pattern", n_pat, DEFAULT_PATTERN_BUDGET)
            keys = [
                j * self.bk + _encode(cs.patterns(), b) for j, cs in enumerate(problem.sets)
            ]
            self.keys = np.sort(np.concatenate(keys)) if keys else np.zeros(0, np.int64)
        self._posmap = None

    @property
    def posmap(self):
        """``posmap[u, i]`` is the position of coordinate ``i`` in subset ``u``, or -1."""
        if self._posmap is None:
            pm = np.full((self.U, self.n), -1, dtype=np.int8 if self.k < 127 else np.int64)
            rows = np.repeat(np.arange(self.U), self.k)
            pm[rows, self.subsets.ravel()] = np.tile(np.arange(self.k), self.U)
            self._posmap = pm
        return self._posmap

    def all_constraints(self):
        con_u = np.repeat(np.arange(self.U, dtype=np.int64), self.M)
        con_j = np.tile(np.arange(self.M, dtype=np.int64), self.U)
        return con_u, con_j

    def covers(self, word, con_u, con_j):
        """Which constraints ``(S_u, C_j)`` the word satisfies."""
        pats = np.asarray(word, dtype=np.int64)[self.subsets[con_u]]
        if self.is_box:
            return ((pats >= self.lows[con_j]) & (pats <= self.highs[con_j])).all(axis=1)
        key = con_j * self.bk + _encode(pats, self.b)
        idx = np.searchsorted(self.keys, key)
        idx = np.minimum(idx, len(self.keys) - 1)
        return self.keys[idx] == key

    def member_rows(self, codes):
        """Boolean table ``[len(codes), M]``: pattern ``codes[i]`` lies in ``C_j``."""
        codes = np.asarray(codes, dtype=np.int64)
        out = np.zeros((codes.size, self.M), dtype=bool)
        if self.is_box:
            pats = _decode(codes, self.b, self.k)
            step = max(1, 20_000_000 // max(1, self.M * self.k))
            for a in range(0, len(pats), step):
                chunk = pats[a : a + step, None, :]
                out[a : a + step] = ((chunk >= self.lows) & (chunk <= self.highs)).all(axis=2)
        else:
            j = self.keys // self.bk
            pc = self.keys % self.bk
            idx = np.searchsorted(codes, pc)
            idx_c = np.minimum(idx, max(codes.size - 1, 0))
            hit = (codes.size > 0) & (codes[idx_c] == pc)
            out[idx_c[hit], j[hit]] = True
        return out


def solve_greedy(problem, budget=DEFAULT_CONSTRAINT_BUDGET):
    """Build a solution word by word with the method of conditional expectations.

    Each coordinate of the next word is fixed to the symbol maximizing the
    expected number of still-uncovered constraints the finished word will
    satisfy when the remaining coordinates are uniform; ties go to the
    smallest symbol. A finished word covers at least a ``c / b^k`` share of
    what was uncovered, so the output never exceeds :func:`union_bound_size`.
    """
    sysm = _System(problem, budget)
    b, k, n = sysm.b, sysm.k, sysm.n
    powb = b ** np.arange(k + 1, dtype=np.int64)
    con_u, con_j = sysm.all_constraints()
    posmap = sysm.posmap
    words, history = [], []
    while con_u.size:
        word = np.zeros(n, dtype=np.int64)
        if sysm.is_box:
            alive = np.ones(con_u.size, dtype=bool)
        else:
            prefix = np.zeros(con_u.size, dtype=np.int64)
        for i in range(n):
            r = posmap[con_u, i].astype(np.int64)
            if sysm.is_box:
                sel = np.flatnonzero((r >= 0) & alive)
            else:
                sel = np.flatnonzero(r >= 0)
            if sel.size == 0:
                continue
            rs, js = r[sel], con_j[sel]
            scale = powb[rs + 1]
            gains = np.empty(b, dtype=np.int64)
            if sysm.is_box:
                lo, hi = sysm.lows[js, rs], sysm.highs[js, rs]
                weight = sysm.suffix[js, rs + 1] * scale
                for v in range(b):
                    gains[v] = weight[(lo <= v) & (v <= hi)].sum()
                best = int(np.argmax(gains))
                alive[sel] = (lo <= best) & (best <= hi)
            else:
                base = js * sysm.bk
                span = powb[k - rs - 1]
                pcs = prefix[sel] * b
                for v in range(b):
                    start = base + (pcs + v) * span
                    cnt = np.searchsorted(sysm.keys, start + span) - np.searchsorted(
                        sysm.keys, start
                    )
                    gains[v] = (cnt * scale).sum()
                best = int(np.argmax(gains))
                prefix[sel] = pcs + best
            word[i] = best
        if sysm.is_box:
            done = alive
        else:
            key = con_j * sysm.bk + prefix
            idx = np.minimum(np.searchsorted(sysm.keys, key), len(sysm.keys) - 1)
            done = sysm.keys[idx] == key
        if not done.any():
            raise CertificationError("greedy word covered no constraint")
        keep = ~done
        con_u, con_j = con_u[keep], con_j[keep]
        words.append(word)
        history.append(int(con_u.size))
    return RestrictionSolution(
        problem, WordSet(np.array(words).reshape(-1, n), n, b), tuple(history)
    )


def solve_randomized(problem, seed, batch, max_batches=64, budget=DEFAULT_CONSTRAINT_BUDGET):
    """Draw uniform words from a seeded PCG64 stream until every constraint is met.

    Returns the shortest prefix of the stream that covers everything, so the
    result is certified by construction and reproducible from ``seed``.
    """
    if batch < 1:
        raise DomainError("batch must be positive")
    sysm = _System(problem, budget)
    rng = np.random.default_rng(seed)
    con_u, con_j = sysm.all_constraints()
    words, history = [], []
    for _ in range(max_batches):
        draws = rng.integers(0, sysm.b, size=(batch, sysm.n), dtype=np.int64)
        for word in draws:
            if not con_u.size:
                break
            hit = sysm.covers(word, con_u, con_j)
            con_u, con_j = con_u[~hit], con_j[~hit]
            words.append(word)
            history.append(int(con_u.size))
        if not con_u.size:
            ws = WordSet(np.array(words).reshape(-1, sysm.n), sysm.n, sysm.b)
            return RestrictionSolution(problem, ws, tuple(history))
    raise RetryCapExceeded(
        f"{con_u.size} constraints still uncovered after {max_batches} batches of {batch}"
    )


def verify_solution(candidate, problem, budget=DEFAULT_CONSTRAINT_BUDGET, workers=1):
    """Exhaustively check every ``(S, C_j)`` pair.

    Subsets are processed in chunks; ``workers > 1`` spreads chunks over a
    thread pool and reduces with a conjunction, so the answer never depends
    on the worker count.
    """
    words = candidate.words if isinstance(candidate, WordSet) else candidate
    words = np.asarray(words, dtype=np.int64).reshape(-1, problem.n)
    sysm = _System(problem, budget, with_subsets=False)
    if problem.M == 0:
        return True
    if len(words) == 0:
        return False
    k = problem.k
    powers = problem.b ** np.arange(k - 1, -1, -1, dtype=np.int64)
    full_table = None
    if sysm.bk * sysm.M <= 50_000_000:
        full_table = sysm.member_rows(np.arange(sysm.bk, dtype=np.int64))

    def check(chunk):
        sub = np.array(chunk, dtype=np.int64)
        codes = words[:, sub] @ powers  # (N, B)
        uniq, inv = np.unique(codes, return_inverse=True)
        inv = inv.reshape(codes.shape)
        table = full_table[uniq] if full_table is not None else sysm.member_rows(uniq)
        if uniq.size * sysm.M <= 5_000_000:
            present = np.zeros((codes.shape[1], uniq.size), dtype=np.float32)
            present[np.broadcast_to(np.arange(codes.shape[1]), inv.shape), inv] = 1.0
            return bool(((present @ table.astype(np.float32)) > 0).all())
        for col in range(codes.shape[1]):
            if not table[np.unique(inv[:, col])].any(axis=0).all():
                return False
        return True

    subsets = itertools.combinations(range(problem.n), k)
    step = max(1, 200_000 // len(words))
    chunks = iter(lambda: list(itertools.islice(subsets, step)), [])
    if workers <= 1:
        return all(check(c) for c in chunks)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return all(pool.map(check, chunks))
