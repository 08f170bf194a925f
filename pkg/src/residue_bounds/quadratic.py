"""Quadratic fields generated from their discriminants.

Class numbers come from the exponentially convergent series for L(1, chi_D)
(Cohen, *A Course in Computational Algebraic Number Theory*, 5.3-5.6),
evaluated for a whole block of discriminants at once.  Regulators of real
fields come from the continued fraction of the reduced number (b + sqrt D)/2.
The resulting records carry h, R and w, so that the residue is obtained from
the class number formula like for any other field.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc, exp1

from .errors import InputError
from .splitting import BadPrimeDecomposition, DefiningPolynomial

# erfc(6.5) ~ 4e-20: the series is truncated once n sqrt(pi/|D|) exceeds this
_SERIES_CUT = 6.5
_BLOCK = 1024


def _squarefree_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    for q in range(2, math.isqrt(limit) + 1):
        flags[q * q :: q * q] = False
    return flags


def fundamental_discriminants(bound: int) -> list[int]:
    """All fundamental discriminants D with |D| <= bound, sorted by |D| then sign."""
    if bound < 3:
        return []
    sf = _squarefree_flags(bound)
    out = []
    for a in range(3, bound + 1):
        for D in (-a, a):
            if is_fundamental(D, sf):
                out.append(D)
    return out


def is_fundamental(D: int, squarefree: np.ndarray | None = None) -> bool:
    """Whether D is the discriminant of a quadratic field."""
    def sqf(m):
        m = abs(m)
        if squarefree is not None and m < len(squarefree):
            return bool(squarefree[m])
        return all(m % (q * q) for q in range(2, math.isqrt(m) + 1))

    if D in (0, 1):
        return False
    if D % 4 == 1:
        return sqf(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and sqf(m)
    return False


def torsion(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def kronecker_table(discs: np.ndarray, n_max: int) -> np.ndarray:
    """chi_D(n) for every D in ``discs`` and 0 <= n <= n_max, shape (len, n_max + 1)."""
    discs = np.asarray(discs, dtype=np.int64)
    chi = np.zeros((len(discs), n_max + 1), dtype=np.int8)
    if n_max >= 1:
        chi[:, 1] = 1
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for q in range(2, n_max + 1):
        if spf[q] == 0:
            spf[q::q] = np.where(spf[q::q] == 0, q, spf[q::q])
            chi[:, q] = _prime_character(discs, q)
    for n in range(4, n_max + 1):
        q = spf[n]
        if q != n:
            chi[:, n] = chi[:, q] * chi[:, n // q]
    return chi


def _prime_character(discs: np.ndarray, p: int) -> np.ndarray:
    if p == 2:
        r = discs % 8
        return np.where(discs % 2 == 0, 0, np.where((r == 1) | (r == 7), 1, -1)).astype(np.int8)
    base = discs % p
    result = np.ones_like(base)
    e = (p - 1) // 2
    b = base.copy()
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return np.where(base == 0, 0, np.where(result == 1, 1, -1)).astype(np.int8)


def l_one_series(discs) -> np.ndarray:
    """L(1, chi_D) for an array of fundamental discriminants (all of one sign)."""
    discs = np.asarray(discs, dtype=np.int64)
    out = np.empty(len(discs), dtype=np.float64)
    if len(discs) == 0:
        return out
    if not (np.all(discs < 0) or np.all(discs > 0)):
        raise InputError("l_one_series needs discriminants of a single sign")
    order = np.argsort(np.abs(discs))
    for start in range(0, len(discs), _BLOCK):
        idx = order[start : start + _BLOCK]
        block = discs[idx]
        q = np.abs(block).astype(np.float64)
        n_max = int(_SERIES_CUT * math.sqrt(q.max() / math.pi)) + 2
        chi = kronecker_table(block, n_max)[:, 1:].astype(np.float64)
        n = np.arange(1, n_max + 1, dtype=np.float64)[None, :]
        qc = q[:, None]
        if block[0] < 0:
            # h = (w/2) sum chi(n) [erfc(n sqrt(pi/q)) + sqrt(q)/(pi n) exp(-pi n^2/q)]
            terms = erfc(n * np.sqrt(math.pi / qc)) + np.sqrt(qc) / (math.pi * n) * np.exp(-math.pi * n**2 / qc)
            h_over_w = 0.5 * np.einsum("ij,ij->i", chi, terms)
            # L(1) = 2 pi h / (w sqrt q)
            out[idx] = 2.0 * math.pi * h_over_w / np.sqrt(q)
        else:
            # 2hR = sum chi(n) [sqrt(D)/n erfc(n sqrt(pi/D)) + E1(pi n^2/D)]
            terms = np.sqrt(qc) / n * erfc(n * np.sqrt(math.pi / qc)) + exp1(math.pi * n**2 / qc)
            two_hR = np.einsum("ij,ij->i", chi, terms)
            # L(1) = 2 h R / sqrt D
            out[idx] = two_hR / np.sqrt(q)
    return out


def l_one_finite(D: int) -> float:
    """L(1, chi_D) from the finite closed forms (O(|D|) work, for cross-checks)."""
    q = abs(D)
    chi = kronecker_table(np.array([D]), q)[0, :q].astype(np.float64)
    a = np.arange(q, dtype=np.float64)
    if D < 0:
        return -math.pi / q**1.5 * float(np.dot(chi, a))
    with np.errstate(divide="ignore"):
        logs = np.log(np.sin(np.pi * a / q))
    logs[0] = 0.0
    return -float(np.dot(chi, logs)) / math.sqrt(q)


def regulator(D: int) -> float:
    """ln of the fundamental unit of the real quadratic field of discriminant D > 0.

    The complete quotients (P + sqrt D)/Q of the purely periodic expansion of
    (b + sqrt D)/2 multiply over one period to the fundamental unit.
    """
    if D <= 0 or not is_fundamental(D):
        raise InputError(f"{D} is not a positive fundamental discriminant")
    s = math.isqrt(D)
    b = s if (s - D) % 2 == 0 else s - 1
    P, Q = b, 2
    start = (P, Q)
    root = math.sqrt(D)
    logs = []
    while True:
        logs.append(math.log((P + root) / Q))
        a = (P + s) // Q
        P = a * Q - P
        Q = (D - P * P) // Q
        if (P, Q) == start:
            break
    return math.fsum(logs)


def defining_polynomial(D: int) -> DefiningPolynomial:
    """Monic generator of the ring of integers (so no prime divides the index)."""
    if D % 4 == 1:
        return DefiningPolynomial(((1 - D) // 4, -1, 1))
    return DefiningPolynomial((-D // 4, 0, 1))


def bad_primes(D: int) -> list[BadPrimeDecomposition]:
    """Ramified primes: each has one prime above it with residue degree 1."""
    out, m, q = [], abs(D), 2
    while q * q <= m:
        if m % q == 0:
            out.append(BadPrimeDecomposition(q, (1,)))
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(BadPrimeDecomposition(m, (1,)))
    return out


def label(D: int) -> str:
    return f"2.{2 if D > 0 else 0}.{abs(D)}.1"


def class_numbers(discs) -> np.ndarray:
    """Class numbers for a list of fundamental discriminants (mixed signs allowed)."""
    discs = np.asarray(discs, dtype=np.int64)
    h = np.empty(len(discs), dtype=np.int64)
    neg = discs < 0
    for mask in (neg, ~neg):
        if not mask.any():
            continue
        ds = discs[mask]
        L = l_one_series(ds)
        if ds[0] < 0:
            w = np.array([torsion(int(d)) for d in ds], dtype=np.float64)
            raw = L * w * np.sqrt(np.abs(ds)) / (2.0 * math.pi)
        else:
            R = np.array([regulator(int(d)) for d in ds])
            raw = L * np.sqrt(ds) / (2.0 * R)
        rounded = np.rint(raw)
        if np.any(np.abs(raw - rounded) > 1e-6) or np.any(rounded < 1):
            bad = ds[np.abs(raw - rounded) > 1e-6]
            raise ArithmeticError(f"class number series did not round cleanly for {bad[:5].tolist()}")
        h[mask] = rounded.astype(np.int64)
    return h


def quadratic_records(bound: int, *, min_abs: int = 3, with_poly: bool = True):
    """FieldRecords for all quadratic fields with min_abs <= |disc| <= bound."""
    from .fields import FieldRecord

    discs = [D for D in fundamental_discriminants(bound) if abs(D) >= min_abs]
    hs = class_numbers(discs)
    records = []
    for D, h in zip(discs, hs.tolist()):
        reg = regulator(D) if D > 0 else 1.0
        records.append(
            FieldRecord(
                label=label(D),
                n_K=2,
                r1=2 if D > 0 else 0,
                r2=0 if D > 0 else 1,
                disc=D,
                h=h,
                reg=reg,
                w=torsion(D),
                poly=defining_polynomial(D) if with_poly else None,
                bad_primes=tuple(bad_primes(D)) if with_poly else (),
                reg_text=repr(reg),
            )
        )
    return records
