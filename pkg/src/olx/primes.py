"""Prime generation and the Kronecker symbol.

Every Euler product in this package iterates over the primes produced
here; the quadratic characters chi_d(n) = kronecker(d, n) drive the
degree-2 field models.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

SIEVE_LIMIT_MAX = 1 << 32
SEGMENT_SIZE = 1 << 20


@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, ascending, as an immutable int64 array."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes)


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def sieve_primes(limit: int, segment_size: int = SEGMENT_SIZE) -> PrimeTable:
    """Segmented sieve of Eratosthenes.

    Memory is bounded by segment_size, not limit, so scans can ask for
    primes up to 1e8 without holding a mask of that size. Segments are
    processed in ascending order; the result is deterministic.
    """
    if not (2 <= limit <= SIEVE_LIMIT_MAX):
        raise DomainError(f"sieve limit must satisfy 2 <= limit <= 2^32, got {limit}")
    limit = int(limit)
    base = _simple_sieve(math.isqrt(limit))
    chunks = [base]
    lo = int(base[-1]) + 1 if base.size else 2
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        mask = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                mask[start - lo :: p] = False
        if lo < 2:
            mask[: 2 - lo] = False
        chunks.append((np.flatnonzero(mask) + lo).astype(np.int64))
        lo = hi
    primes = np.concatenate(chunks)
    return PrimeTable(limit=limit, primes=primes[primes <= limit])


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for nonzero d and n >= 1.

    Computed with the reciprocity algorithm (no factorization of n), so
    n may be large. Completely multiplicative in n with period |d|.
    """
    if d == 0:
        raise DomainError("kronecker symbol requires d != 0")
    if n < 1:
        raise DomainError(f"kronecker symbol requires n >= 1, got {n}")
    a, b = d, n
    result = 1
    if b % 2 == 0:
        if a % 2 == 0:
            return 0
        # (a/2) factor: +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
        while b % 2 == 0:
            b //= 2
            if a % 8 in (3, 5):
                result = -result
    a %= b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def character_table(d: int) -> np.ndarray:
    """chi_d over one period: int8 array c of length |d| with c[n mod |d|] = chi_d(n).

    Requires |d| >= 2 (every fundamental discriminant d != 1 qualifies);
    residue 0 maps to 0 since any n = 0 mod |d| shares a factor with d.
    """
    q = abs(d)
    if q < 2:
        raise DomainError("character table needs |d| >= 2")
    table = np.zeros(q, dtype=np.int8)
    for r in range(1, q):
        table[r] = kronecker(d, r)
    table.setflags(write=False)
    return table
