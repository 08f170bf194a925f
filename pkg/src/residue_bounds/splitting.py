"""Splitting profiles from a defining polynomial and the Artin coefficients.

For a prime p not dividing the index of Z[alpha], the residue degrees of the
primes above p are the degrees of the irreducible factors of f mod p.  Only
factor degrees are needed, so a distinct-degree factorisation suffices.  A
prime where f mod p is not squarefree might divide the index; its profile is
marked untrusted and explicit decomposition data must be supplied.

With zeta_K = zeta * L(s, rho), the coefficient of the logarithm at p^m is

    a_rho(p^m) = (sum of residue degrees f with f | m) - 1.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import BadPrimeError, InputError, RangeError
from .precision import DEFAULT_POLICY, Interval, PrecisionPolicy, cumulative, total
from .primes import PrimeTable, cutoff

# deterministic Miller-Rabin witnesses for n < 3.3e24
# products of two residues must fit in int64
_BATCH_PRIME_MAX = 3_000_000_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# --- dense polynomials over GF(p), constant term first ---------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _rem(a, m, p):
    """Remainder of a modulo m (m nonzero, any leading coefficient)."""
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv % p
        shift = len(a) - 1 - dm
        if coef:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - coef * mi) % p
        a.pop()
        _trim(a)
    return a


def _divexact(a, m, p):
    """Quotient a / m for m dividing a."""
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    q = [0] * (len(a) - dm)
    for shift in range(len(a) - 1 - dm, -1, -1):
        coef = a[shift + dm] * inv % p
        q[shift] = coef
        if coef:
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - coef * mi) % p
    return _trim(q)


def _monic(a, p):
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _rem(a, b, p)
    return _monic(a, p) if a else a


def _powmod(base, e, m, p):
    result = [1]
    base = _rem(base, m, p)
    while e:
        if e & 1:
            result = _rem(_mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _rem(_mul(base, base, p), m, p)
    return result


def _derivative(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _compose(a, b, m, p):
    """a(b) mod m, by Horner's rule."""
    out: list[int] = []
    for c in reversed(a):
        out = _rem(_mul(out, b, p), m, p)
        out = _sub(out, [(-c) % p], p)
    return out


def distinct_degree_degrees(f_mod_p: list[int], p: int, frobenius: list[int] | None = None) -> list[int]:
    """Degrees of the irreducible factors of a monic squarefree polynomial over GF(p).

    ``frobenius`` may supply x**p mod f to skip the exponentiation.
    """
    g = list(f_mod_p)
    degrees: list[int] = []
    if len(g) - 1 < 2:
        return [len(g) - 1] if len(g) > 1 else []
    frob = _powmod([0, 1], p, g, p) if frobenius is None else _trim(list(frobenius))
    h = frob
    i = 1
    while len(g) - 1 >= 2 * i:
        d = _gcd(g, _sub(h, [0, 1], p), p)
        dd = len(d) - 1
        if dd > 0:
            degrees.extend([i] * (dd // i))
            g = _divexact(g, d, p)
            if len(g) - 1 < 2 * (i + 1):
                break
            frob = _rem(frob, g, p)
        i += 1
        # x^(p^i) = (x^(p^(i-1)))(x^p) modulo any factor of f
        h = _compose(_rem(h, g, p), frob, g, p)
    if len(g) - 1 > 0:
        degrees.append(len(g) - 1)
    return sorted(degrees)


def _batch_mulmod(a: np.ndarray, b: np.ndarray, fc: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Rowwise product of residues mod (f, p); rows hold degree < n coefficients."""
    n = a.shape[1]
    conv = np.zeros((a.shape[0], 2 * n - 1), dtype=np.int64)
    for i in range(n):
        conv[:, i : i + n] = (conv[:, i : i + n] + a[:, i : i + 1] * b % p[:, None]) % p[:, None]
    for k in range(2 * n - 2, n - 1, -1):
        top = conv[:, k]
        conv[:, k - n : k] = (conv[:, k - n : k] - top[:, None] * fc[:, :n] % p[:, None]) % p[:, None]
    return conv[:, :n]


def _batch_powmod_scalar(a: np.ndarray, e: np.ndarray, p: np.ndarray) -> np.ndarray:
    result = np.ones_like(a)
    a = a % p
    e = e.copy()
    while np.any(e):
        odd = (e & 1).astype(bool)
        result[odd] = result[odd] * a[odd] % p[odd]
        e >>= 1
        a = a * a % p
    return result


def _batch_times_x(a: np.ndarray, fc: np.ndarray, p: np.ndarray) -> np.ndarray:
    n = a.shape[1]
    top = a[:, n - 1 : n]
    out = np.zeros_like(a)
    out[:, 1:] = a[:, :-1]
    return (out - top * fc[:, :n] % p[:, None]) % p[:, None]


def _batch_rank(mats: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Rank over GF(p) of each square matrix in a (len, n, n) stack."""
    a = mats % p[:, None, None]
    count, n, _ = a.shape
    used = np.zeros((count, n), dtype=bool)
    rank = np.zeros(count, dtype=np.int64)
    rows = np.arange(count)
    for col in range(n):
        candidates = (a[:, :, col] != 0) & ~used
        has = candidates.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(candidates, axis=1)
        pivot_row = a[rows, piv]  # (count, n)
        inv = _batch_powmod_scalar(pivot_row[:, col], p - 2, p)
        pivot_row = pivot_row * inv[:, None] % p[:, None]
        factor = a[:, :, col].copy()
        factor[rows, piv] = 0
        factor[~has] = 0
        factor[used] = 0
        a = (a - factor[:, :, None] * pivot_row[:, None, :] % p[:, None, None]) % p[:, None, None]
        used[rows[has], piv[has]] = True
        rank += has
    return rank


def frobenius_images(f: "DefiningPolynomial", primes: np.ndarray) -> np.ndarray:
    """x**p mod (f, p) for every prime in ``primes``, as an (len, deg) coefficient array."""
    p = np.asarray(primes, dtype=np.int64)
    n = f.degree
    if len(p) and int(p.max()) >= _BATCH_PRIME_MAX:
        raise RangeError("primes too large for the vectorised Frobenius")
    fc = np.asarray(f.coefficients, dtype=np.int64)[None, :] % p[:, None]
    result = np.zeros((len(p), n), dtype=np.int64)
    result[:, 0] = 1
    base = np.zeros((len(p), n), dtype=np.int64)
    base[:, 1] = 1
    e = p.copy()
    while np.any(e):
        odd = (e & 1).astype(bool)
        if odd.any():
            result[odd] = _batch_mulmod(result[odd], base[odd], fc[odd], p[odd])
        e >>= 1
        live = e > 0
        if live.any():
            base[live] = _batch_mulmod(base[live], base[live], fc[live], p[live])
    return result


def batch_degree_counts(f: "DefiningPolynomial", primes: np.ndarray) -> np.ndarray:
    """Number of irreducible factors of each degree 1..n of f mod p, for primes not dividing disc(f).

    Uses root counts N_i = deg gcd(f, x^(p^i) - x) for i <= n/2 and Moebius
    inversion; whatever degree is left is a single factor of degree > n/2.
    """
    p = np.asarray(primes, dtype=np.int64)
    n = f.degree
    fc = np.asarray(f.coefficients, dtype=np.int64)[None, :] % p[:, None]
    frob = frobenius_images(f, p)
    roots = {}
    h = frob
    for i in range(1, n // 2 + 1):
        if i > 1:
            # x^(p^i) = h(x^p) with h = x^(p^(i-1)), Horner on the coefficient rows
            acc = np.zeros_like(h)
            for j in range(n - 1, -1, -1):
                acc = _batch_mulmod(acc, frob, fc, p)
                acc[:, 0] = (acc[:, 0] + h[:, j]) % p
            h = acc
        g = h.copy()
        g[:, 1] = (g[:, 1] - 1) % p
        cols = [g]
        for _ in range(n - 1):
            cols.append(_batch_times_x(cols[-1], fc, p))
        roots[i] = n - _batch_rank(np.stack(cols, axis=1), p)
    counts = np.zeros((len(p), n + 1), dtype=np.int64)
    for d in range(1, n // 2 + 1):
        acc = np.zeros(len(p), dtype=np.int64)
        for e in range(1, d + 1):
            if d % e == 0:
                acc += _mobius(d // e) * roots[e]
        counts[:, d] = acc // d
    rest = n - (counts * np.arange(n + 1)).sum(axis=1)
    counts[np.arange(len(p)), rest] += rest > 0
    counts[:, 0] = 0
    return counts[:, 1:]


def _mobius(k: int) -> int:
    result, q = 1, 2
    while q * q <= k:
        if k % q == 0:
            k //= q
            if k % q == 0:
                return 0
            result = -result
        q += 1
    return -result if k > 1 else result


# --- domain types -----------------------------------------------------------

@dataclass(frozen=True)
class DefiningPolynomial:
    """Monic integer polynomial; ``coefficients`` are constant term first."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 3:
            raise InputError("defining polynomial must have degree >= 2")
        if coeffs[-1] != 1:
            raise InputError("defining polynomial must be monic")
        root = self.rational_root()
        if root is not None:
            raise InputError(f"defining polynomial has the rational root {root}")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def rational_root(self) -> int | None:
        """An integer root if one exists (a monic integer polynomial has no other rational roots)."""
        c0 = self.coefficients[0]
        if c0 == 0:
            return 0
        c0 = abs(c0)
        for d in _divisors(c0):
            for r in (d, -d):
                if self(r) == 0:
                    return r
        return None

    def discriminant(self) -> int:
        """Polynomial discriminant via the resultant of f and f'."""
        n = self.degree
        res = _resultant(list(self.coefficients), [i * c for i, c in enumerate(self.coefficients)][1:])
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * res

    @classmethod
    def parse(cls, text: str) -> "DefiningPolynomial":
        """Space-separated coefficients, constant term first."""
        return cls(tuple(int(t) for t in text.split()))

    def format(self) -> str:
        return " ".join(str(c) for c in self.coefficients)


def _divisors(n: int) -> list[int]:
    if n > 10**12:
        # only a spot check is promised; large constant terms get trial roots ±1
        return [1]
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _resultant(a: list[int], b: list[int]) -> int:
    """Resultant of integer polynomials via the Sylvester determinant (exact, fractions-free Bareiss)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_det(rows)


def _bareiss_det(mat: list[list[int]]) -> int:
    mat = [row[:] for row in mat]
    n = len(mat)
    sign, prev = 1, 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            for r in range(k + 1, n):
                if mat[r][k]:
                    mat[k], mat[r] = mat[r], mat[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1]


@dataclass(frozen=True)
class SplittingProfile:
    p: int
    degrees: tuple[int, ...]
    trusted: bool


@dataclass(frozen=True)
class BadPrimeDecomposition:
    """User-supplied residue degrees for a prime dividing the discriminant or index."""

    p: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(int(d) for d in self.degrees)))
        if not self.degrees or any(d < 1 for d in self.degrees):
            raise InputError(f"decomposition for p={self.p} needs positive residue degrees")

    def check_degree(self, n_K: int):
        if sum(self.degrees) > n_K:
            raise InputError(f"residue degrees {self.degrees} at p={self.p} exceed the degree {n_K}")

    @classmethod
    def parse_list(cls, text: str) -> list["BadPrimeDecomposition"]:
        """Parse ``p:f1+f2+...;q:...``."""
        out = []
        for item in filter(None, (t.strip() for t in text.split(";"))):
            p, _, degs = item.partition(":")
            if not degs:
                raise InputError(f"malformed bad-prime entry {item!r}")
            out.append(cls(int(p), tuple(int(d) for d in degs.split("+"))))
        return out

    @staticmethod
    def format_list(items) -> str:
        return ";".join(f"{b.p}:{'+'.join(str(d) for d in b.degrees)}" for b in items)


# --- operations -----------------------------------------------------------------

def degree_profile(f: DefiningPolynomial, p: int, *, check_prime: bool = True) -> SplittingProfile:
    """Residue-degree profile of p read off the factorisation of f mod p."""
    p = int(p)
    if check_prime and not is_prime(p):
        raise InputError(f"{p} is not prime")
    fp = _trim([c % p for c in f.coefficients])
    if not _gcd(fp, _derivative(fp, p), p) == [1]:
        return SplittingProfile(p, (), False)
    return SplittingProfile(p, tuple(distinct_degree_degrees(fp, p)), True)


def a_rho(profile, m: int) -> int:
    """Coefficient a_rho(p^m) = (sum of residue degrees dividing m) - 1."""
    if isinstance(profile, SplittingProfile) and not profile.trusted:
        raise BadPrimeError([profile.p])
    if m < 1:
        raise InputError("m must be a positive integer")
    return sum(f for f in profile.degrees if m % f == 0) - 1


def profiles(f: DefiningPolynomial, bad, table: PrimeTable, x) -> dict:
    """Profiles for every prime p <= x, with supplied decompositions taking precedence.

    Raises :class:`BadPrimeError` listing every untrusted prime without data.
    """
    bad_map = {int(b.p): b for b in (bad or ())}
    for b in bad_map.values():
        b.check_degree(f.degree)
    c = cutoff(x)
    if c > table.limit:
        raise RangeError(f"x = {x} exceeds table limit {table.limit}")
    ps = table.primes[: int(np.searchsorted(table.primes, c, side="right"))]
    disc = f.discriminant()
    out = {}
    missing = []
    good = []
    for p in ps.tolist():
        if p in bad_map:
            out[p] = bad_map[p]
        elif disc % p == 0:
            missing.append(p)
        else:
            good.append(p)
    if missing:
        raise BadPrimeError(missing)
    if good:
        counts = batch_degree_counts(f, np.asarray(good, dtype=np.int64))
        for p, row in zip(good, counts.tolist()):
            degrees = tuple(d for d, k in enumerate(row, start=1) for _ in range(k))
            out[p] = SplittingProfile(p, degrees, True)
    return dict(sorted(out.items()))


def sigma_terms(f: DefiningPolynomial, bad, table: PrimeTable, x):
    """Prime powers n <= x (ascending) and the summands a_rho(n) / (m p^m) as exact pairs.

    Returns ``(n, numerator, denominator)`` integer arrays with the summand
    equal to numerator / denominator.
    """
    profs = profiles(f, bad, table, x)
    c = cutoff(x)
    ns, nums, dens = [], [], []
    for p, prof in profs.items():
        pm, m = p, 1
        while pm <= c:
            ns.append(pm)
            nums.append(a_rho(prof, m))
            dens.append(m * pm)
            pm *= p
            m += 1
    order = np.argsort(np.asarray(ns, dtype=np.int64), kind="stable")
    return (
        np.asarray(ns, dtype=np.int64)[order],
        np.asarray(nums, dtype=np.int64)[order],
        np.asarray(dens, dtype=np.int64)[order],
    )


def sigma(f: DefiningPolynomial, bad, table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Truncated sum of Lambda(n) a_rho(n) / (n ln n) over prime powers n <= x."""
    _, num, den = sigma_terms(f, bad, table, x)
    if len(num) == 0:
        return Interval(0.0) if policy.interval else 0.0
    if policy.interval:
        terms = Interval(num.astype(np.float64)) / Interval(den.astype(np.float64))
    else:
        terms = num / den
    return total(terms, policy)


def sigma_step(f: DefiningPolynomial, bad, table: PrimeTable, x, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Sigma as a step function: prime powers n <= x and the running sums at each n.

    ``values[i]`` equals ``sigma(f, bad, table, n[i])``; between consecutive
    prime powers the sum is constant.
    """
    n, num, den = sigma_terms(f, bad, table, x)
    if policy.interval:
        terms = Interval(num.astype(np.float64)) / Interval(den.astype(np.float64))
    else:
        terms = num / den
    return n, cumulative(terms, policy)
