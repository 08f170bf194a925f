"""Segmented sieve and exact prime sums.

All sums are over prime powers ``p**k <= x`` (or primes ``p <= x``) in
ascending order of the prime power.  Real cutoffs ``x`` are converted to the
integer cutoff ``floor(x)``; when ``x`` lies within one ulp below an integer
that integer is included.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import cached_property
import math

import numpy as np

from .errors import InputError, RangeError
from .precision import DEFAULT_POLICY, Interval, PrecisionPolicy, cumulative, total

SEGMENT_ODDS = 1 << 20
HARD_CAP = 10**9


def _small_primes(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags)


def _sieve_segment(start: int, count: int, base: np.ndarray) -> np.ndarray:
    # odd numbers start, start + 2, ..., start + 2 (count - 1); start is odd
    flags = np.ones(count, dtype=bool)
    end = start + 2 * count
    for q in base:
        q = int(q)
        if q * q >= end:
            break
        first = max(q * q, ((start + q - 1) // q) * q)
        if first % 2 == 0:
            first += q
        flags[(first - start) // 2 :: q] = False
    if start == 1:
        flags[0] = False
    return np.packbits(flags)


class PrimeTable:
    """Primality up to ``limit``, stored as packed bitsets over odd numbers.

    Instances are immutable after construction; all derived arrays are
    read-only and shared safely between threads.
    """

    def __init__(self, limit: int, segments: tuple[tuple[int, int, np.ndarray], ...]):
        self.limit = int(limit)
        # (first odd number, number of odd slots, packed flags)
        self.segments = segments

    def __repr__(self):
        return f"PrimeTable(limit={self.limit})"

    def __contains__(self, n) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        n = int(n)
        if n > self.limit or n < 0:
            raise RangeError(f"{n} outside sieved range [0, {self.limit}]")
        if n < 3:
            return n == 2
        if n % 2 == 0:
            return False
        idx = (n - 1) // 2
        seg, off = divmod(idx, SEGMENT_ODDS)
        packed = self.segments[seg][2]
        return bool((packed[off >> 3] >> (7 - (off & 7))) & 1)

    @cached_property
    def primes(self) -> np.ndarray:
        parts = [np.array([2], dtype=np.int64)] if self.limit >= 2 else []
        for start, count, packed in self.segments:
            flags = np.unpackbits(packed, count=count).astype(bool)
            parts.append(start + 2 * np.flatnonzero(flags).astype(np.int64))
        out = np.concatenate(parts)
        out = out[out <= self.limit]
        out.setflags(write=False)
        return out

    @cached_property
    def prime_powers(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Arrays ``(n, p, k)`` of all prime powers ``n = p**k <= limit``, sorted by ``n``."""
        ps = self.primes
        ns, bases, exps = [ps], [ps], [np.ones(len(ps), dtype=np.int64)]
        small = ps[ps <= math.isqrt(self.limit)]
        power = small.copy()
        k = 1
        while len(small):
            k += 1
            power = power * small
            keep = power <= self.limit
            small, power = small[keep], power[keep]
            ns.append(power)
            bases.append(small)
            exps.append(np.full(len(small), k, dtype=np.int64))
        n = np.concatenate(ns)
        order = np.argsort(n, kind="stable")
        arrays = tuple(a[order] for a in (n, np.concatenate(bases), np.concatenate(exps)))
        for a in arrays:
            a.setflags(write=False)
        return arrays

    def iter_primes(self):
        for p in self.primes.tolist():
            yield p

    def iter_prime_powers(self):
        """Yield ``(n, p, k)`` with ``n = p**k`` in increasing order of ``n``."""
        n, p, k = self.prime_powers
        yield from zip(n.tolist(), p.tolist(), k.tolist())


def sieve(limit: int, *, hard_cap: int = HARD_CAP, workers: int = 1) -> PrimeTable:
    """Sieve of Eratosthenes up to ``limit`` in cache-sized segments."""
    if isinstance(limit, float):
        if not limit.is_integer():
            raise InputError(f"sieve limit must be an integer, got {limit}")
        limit = int(limit)
    if not 2 <= limit <= hard_cap:
        raise InputError(f"sieve limit {limit} outside [2, {hard_cap}]")
    base = _small_primes(math.isqrt(limit) + 1)[1:]
    n_odds = (limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
    jobs = [(1 + 2 * s, min(SEGMENT_ODDS, n_odds - s)) for s in range(0, n_odds, SEGMENT_ODDS)]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            packed = list(pool.map(lambda job: _sieve_segment(job[0], job[1], base), jobs))
    else:
        packed = [_sieve_segment(start, count, base) for start, count in jobs]
    segments = tuple((start, count, bits) for (start, count), bits in zip(jobs, packed))
    for *_, bits in segments:
        bits.setflags(write=False)
    return PrimeTable(limit, segments)


def cutoff(x) -> int:
    """Integer cutoff for a real bound ``x``: ``floor(x)``, rounding up within 1 ulp."""
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    n = math.floor(x)
    if math.nextafter(x, math.inf) >= n + 1:
        n += 1
    return n


def cutoffs(xs) -> np.ndarray:
    """Vectorised :func:`cutoff` for a float array."""
    xs = np.atleast_1d(np.asarray(xs))
    if xs.dtype.kind in "iu":
        return xs.astype(np.int64)
    xs = xs.astype(np.float64)
    n = np.floor(xs)
    n = np.where(np.nextafter(xs, np.inf) >= n + 1, n + 1, n)
    return n.astype(np.int64)


def _check_range(table: PrimeTable, x, lowest: float, name: str) -> int:
    if isinstance(x, Interval):
        raise InputError("cutoffs are real numbers, not intervals")
    if not x >= lowest:
        raise RangeError(f"{name}: x = {x} below {lowest}")
    if x > table.limit:
        raise RangeError(f"{name}: x = {x} exceeds table limit {table.limit}")
    return cutoff(x)


# --- per-term values ----------------------------------------------------------

def _as_real(values: np.ndarray, interval: bool):
    values = values.astype(np.float64)
    return Interval(values) if interval else values


def prime_power_terms(kind: str, p: np.ndarray, k: np.ndarray, *, interval: bool = False):
    """Summands indexed by prime powers ``p**k``.

    ``psi``: ln p.  ``big_psi``: Lambda(n)/(n ln n) = 1/(k p**k).
    """
    if kind == "psi":
        return np.log(_as_real(p, interval))
    if kind == "big_psi":
        # k * p**k is an exact integer below 2**53 for every table we build
        return 1.0 / _as_real(k * p**k, interval)
    raise InputError(f"unknown prime-power sum {kind!r}")


def prime_terms(kind: str, p: np.ndarray, *, n: int = 2, interval: bool = False):
    """Summands indexed by primes.

    ``log_mertens``: ln(1 - 1/p).  ``log_zeta``: -ln(1 - p**-n).
    ``S1``/``S2``/``S3``: ln p, ln p / p, ln p / (p (p - 1)).
    """
    P = _as_real(p, interval)
    if kind == "log_mertens":
        return np.log1p(-(1.0 / P))
    if kind == "log_zeta":
        return -np.log1p(-(1.0 / P**n))
    if kind in ("S1", "S2", "S3"):
        logp = np.log(P)
        if kind == "S1":
            return logp
        if kind == "S2":
            return logp / P
        return logp / _as_real(p * (p - 1), interval)
    raise InputError(f"unknown prime sum {kind!r}")


def _prime_power_sum(table, kind, x, policy, lowest, name):
    c = _check_range(table, x, lowest, name)
    ns, ps, ks = table.prime_powers
    m = int(np.searchsorted(ns, c, side="right"))
    if m == 0:
        return Interval(0.0) if policy.interval else 0.0
    return total(prime_power_terms(kind, ps[:m], ks[:m], interval=policy.interval), policy)


def _prime_sum(table, kind, x, policy, lowest, name, n=2):
    c = _check_range(table, x, lowest, name)
    ps = table.primes
    m = int(np.searchsorted(ps, c, side="right"))
    if m == 0:
        return Interval(0.0) if policy.interval else 0.0
    return total(prime_terms(kind, ps[:m], n=n, interval=policy.interval), policy)


# --- public operations ------------------------------------------------------

def psi(table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Chebyshev's function: sum of ln p over prime powers p**k <= x."""
    if not x > 0:
        raise RangeError("psi requires x > 0")
    return _prime_power_sum(table, "psi", x, policy, 0.0, "psi")


def big_psi(table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Sum of Lambda(n) / (n ln n) over n <= x, i.e. of 1/(k p**k)."""
    return _prime_power_sum(table, "big_psi", x, policy, 2.0, "big_psi")


def mertens_product(table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Product of (1 - 1/p) over primes p <= x."""
    return np.exp(_prime_sum(table, "log_mertens", x, policy, 2.0, "mertens_product"))


def zeta_truncated_product(table: PrimeTable, x, n: int, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Product of (1 - p**-n)**-1 over primes p <= x."""
    if int(n) != n or n < 2:
        raise InputError("zeta_truncated_product requires an integer n >= 2")
    return np.exp(_prime_sum(table, "log_zeta", x, policy, 2.0, "zeta_truncated_product", n=int(n)))


def prime_log_sums(table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """``(sum ln p, sum ln p / p, sum ln p / (p (p - 1)))`` over primes p <= x."""
    return tuple(_prime_sum(table, kind, x, policy, 2.0, "prime_log_sums") for kind in ("S1", "S2", "S3"))


def pi_count(table: PrimeTable, x) -> int:
    """Number of primes <= x."""
    c = _check_range(table, x, 0.0, "pi_count")
    return int(np.searchsorted(table.primes, c, side="right"))


# --- step functions for sweeps ------------------------------------------------

def step_function(table: PrimeTable, kind: str, policy: PrecisionPolicy = DEFAULT_POLICY, *, n: int = 2):
    """Jump points and running values of a prime (power) sum over the whole table.

    Returns ``(jumps, values)`` where ``values[i]`` is the sum over all jump
    points ``<= jumps[i]``.  For the product kinds the running value is the
    logarithm of the product.
    """
    if kind in ("psi", "big_psi"):
        jumps, ps, ks = table.prime_powers
        terms = prime_power_terms(kind, ps, ks, interval=policy.interval)
    else:
        jumps = table.primes
        terms = prime_terms(kind, jumps, n=n, interval=policy.interval)
    return jumps, cumulative(terms, policy)


def evaluate_step(jumps: np.ndarray, values, xs, *, left: bool = False):
    """Evaluate a running-sum step function at real points ``xs``.

    With ``left=True`` the value just below each point is returned.
    """
    cut = cutoffs(xs)
    idx = np.searchsorted(jumps, cut, side="left" if left else "right") - 1
    if isinstance(values, Interval):
        lo = np.where(idx >= 0, values.lo[np.maximum(idx, 0)], 0.0)
        hi = np.where(idx >= 0, values.hi[np.maximum(idx, 0)], 0.0)
        return Interval(lo, hi)
    return np.where(idx >= 0, values[np.maximum(idx, 0)], 0.0)
