"""Exact big-integer polynomial products via number-theoretic transforms over several primes.

Residues are kept below 2^31 so that products fit in int64; enough primes are
chosen for their product to exceed the largest possible output coefficient,
and coefficients are rebuilt by Garner's mixed-radix CRT.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache

import numba
import numpy as np

MAX_LOG_SIZE = 22
_MAX_PRIMES = 24


def _is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin for p < 3.4e14."""
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17):
        if p % q == 0:
            return p == q
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def _factor(n: int) -> list[int]:
    out, i = [], 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def usable_primes() -> tuple[int, ...]:
    """Largest primes below 2^31 of the form k * 2^MAX_LOG_SIZE + 1, in decreasing order."""
    step = 1 << MAX_LOG_SIZE
    out: list[int] = []
    k = ((1 << 31) - 2) // step
    while len(out) < _MAX_PRIMES and k > 0:
        if _is_prime(k * step + 1):
            out.append(k * step + 1)
        k -= 1
    return tuple(out)


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    fs = _factor(p - 1)
    g = 2
    while any(pow(g, (p - 1) // f, p) == 1 for f in fs):
        g += 1
    return g


def primes_for_bound(bound: int) -> tuple[int, ...]:
    """Fewest primes whose product exceeds `bound`."""
    chosen: list[int] = []
    prod = 1
    for p in usable_primes():
        if prod > bound:
            break
        chosen.append(p)
        prod *= p
    if prod <= bound:
        raise ValueError("coefficient bound too large for the prime table")
    return tuple(chosen)


@lru_cache(maxsize=None)
def _bitrev(log_n: int) -> np.ndarray:
    n = 1 << log_n
    rev = np.zeros(n, dtype=np.int64)
    for b in range(log_n):
        rev |= ((np.arange(n) >> b) & 1) << (log_n - 1 - b)
    return rev


@lru_cache(maxsize=None)
def _twiddles(p: int, log_n: int, inverse: bool) -> np.ndarray:
    """Concatenated per-stage twiddle factors; stage with half-length h starts at offset h - 1."""
    g = _primitive_root(p)
    n = 1 << log_n
    root = pow(g, (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    out = np.empty(max(n - 1, 1), dtype=np.int64)
    h = 1
    while h < n:
        w = pow(root, n // (2 * h), p)
        acc = 1
        for j in range(h):
            out[h - 1 + j] = acc
            acc = acc * w % p
        h *= 2
    return out


@numba.njit(cache=True)
def _ntt_rows(x: np.ndarray, p: int, rev: np.ndarray, tw: np.ndarray, scale: int) -> None:
    rows, n = x.shape
    tmp = np.empty(n, dtype=np.int64)
    for r in range(rows):
        for i in range(n):
            tmp[i] = x[r, rev[i]]
        h = 1
        while h < n:
            for start in range(0, n, 2 * h):
                for j in range(h):
                    u = tmp[start + j]
                    v = tmp[start + j + h] * tw[h - 1 + j] % p
                    s = u + v
                    tmp[start + j] = s - p if s >= p else s
                    d = u - v
                    tmp[start + j + h] = d + p if d < 0 else d
            h *= 2
        if scale != 1:
            for i in range(n):
                x[r, i] = tmp[i] * scale % p
        else:
            for i in range(n):
                x[r, i] = tmp[i]


def ntt(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """Transform each row of a 2-D int64 array (entries in [0, p)); length must be a power of two."""
    n = a.shape[-1]
    log_n = n.bit_length() - 1
    if 1 << log_n != n:
        raise ValueError("transform length must be a power of two")
    x = np.ascontiguousarray(a, dtype=np.int64).reshape(-1, n).copy()
    scale = pow(n, p - 2, p) if inverse else 1
    _ntt_rows(x, p, _bitrev(log_n), _twiddles(p, log_n, inverse), scale)
    return x.reshape(a.shape)


@numba.njit(cache=True)
def _accumulate_by_sum(fa: np.ndarray, fb: np.ndarray, p: int) -> np.ndarray:
    """out[t] = sum over i + j = t of fa[i] * fb[j], pointwise mod p."""
    na, n = fa.shape
    nb = fb.shape[0]
    out = np.zeros((na + nb - 1, n), dtype=np.int64)
    for i in range(na):
        for j in range(nb):
            t = i + j
            for k in range(n):
                out[t, k] = (out[t, k] + fa[i, k] * fb[j, k]) % p
    return out


def convolve_buckets(a_rows: np.ndarray, b_rows: np.ndarray, p: int) -> np.ndarray:
    """For row-indexed polynomial families A_i, B_j (zero padded to a power-of-two length
    at least twice their degree bound), return R_t = sum_{i+j=t} A_i * B_j mod p."""
    fa = ntt(a_rows, p)
    fb = ntt(b_rows, p)
    return ntt(_accumulate_by_sum(fa, fb, p), p, inverse=True)


def _residues(values: Sequence[int], p: int) -> np.ndarray:
    return np.fromiter((v % p for v in values), dtype=np.int64, count=len(values))


class CrtReconstructor:
    """Garner's algorithm for a fixed prime list."""

    def __init__(self, primes: Sequence[int]) -> None:
        self.primes = tuple(primes)
        self.inv: list[list[int]] = []
        for i, pi in enumerate(self.primes):
            self.inv.append([pow(pj, pi - 2, pi) for pj in self.primes[:i]])

    def mixed_radix(self, residues: Sequence[np.ndarray]) -> list[np.ndarray]:
        digits: list[np.ndarray] = []
        for i, pi in enumerate(self.primes):
            x = residues[i] % pi
            for j in range(i):
                x = (x - digits[j]) % pi * self.inv[i][j] % pi
            digits.append(x)
        return digits

    def value(self, digits: Sequence[np.ndarray], idx: int) -> int:
        out = 0
        for i in range(len(self.primes) - 1, -1, -1):
            out = out * self.primes[i] + int(digits[i][idx])
        return out
