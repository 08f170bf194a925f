"""Numeric policy, outward-rounded interval arithmetic and compensated sums.

Every real-valued operation in the package accepts a :class:`PrecisionPolicy`.

* ``fast``: plain float64, numpy pairwise summation.
* ``extended``: float64 terms, error-free (Shewchuk) summation via
  :func:`math.fsum` and Neumaier running sums for prefix arrays.
* ``interval``: :class:`Interval` enclosures.  Arithmetic is rounded outward
  by one ulp after each correctly rounded operation; elementary functions are
  widened by ``ELEMENTARY_ULPS`` ulps, which covers the accuracy of the libm /
  numpy SIMD kernels on IEEE doubles.

:class:`Interval` implements ``__array_ufunc__`` so that the closed-form bound
functions, written with ``np.log``/``np.sqrt``/``np.exp``, evaluate unchanged
on floats, arrays and intervals.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .constants import decimal_enclosure
from .errors import InputError

MODES = ("fast", "extended", "interval")
ELEMENTARY_ULPS = 4
_U = 2.0 ** -53


@dataclass(frozen=True)
class PrecisionPolicy:
    mode: str = "extended"
    slack: float = 1e-12

    def __post_init__(self):
        mode = "fast" if self.mode == "fast-float" else self.mode
        if mode not in MODES:
            raise InputError(f"unknown precision mode {self.mode!r}; expected one of {MODES}")
        object.__setattr__(self, "mode", mode)
        if not self.slack > 0:
            raise InputError("slack must be positive")

    @property
    def interval(self) -> bool:
        return self.mode == "interval"


DEFAULT_POLICY = PrecisionPolicy()


def _down(a):
    return np.nextafter(a, -np.inf)


def _up(a):
    return np.nextafter(a, np.inf)


def _widen(lo, hi, ulps=ELEMENTARY_ULPS):
    lo = lo - ulps * np.abs(np.spacing(lo))
    hi = hi + ulps * np.abs(np.spacing(hi))
    return _down(lo), _up(hi)


class Interval:
    """Closed interval (or elementwise array of intervals) with float64 endpoints."""

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo = np.asarray(lo, dtype=np.float64)
        hi = lo if hi is None else np.asarray(hi, dtype=np.float64)
        if np.any(lo > hi):
            raise ValueError("interval with lo > hi")
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_decimal(cls, text: str) -> "Interval":
        return cls(*decimal_enclosure(text))

    def __repr__(self):
        if self.lo.ndim == 0:
            return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"
        return f"Interval(shape={self.lo.shape})"

    @property
    def mid(self):
        m = 0.5 * self.lo + 0.5 * self.hi
        return float(m) if m.ndim == 0 else m

    @property
    def width(self):
        w = self.hi - self.lo
        return float(w) if w.ndim == 0 else w

    def contains(self, value) -> bool:
        return bool(np.all((self.lo <= value) & (value <= self.hi)))

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, key):
        return Interval(self.lo[key], self.hi[key])

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other):
        return _iadd(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return _isub(self, other)

    def __rsub__(self, other):
        return _isub(as_interval(other), self)

    def __mul__(self, other):
        return _imul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _idiv(self, other)

    def __rtruediv__(self, other):
        return _idiv(as_interval(other), self)

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pow__(self, other):
        return _ipow(self, other)

    def __rpow__(self, other):
        return _ipow(as_interval(other), self)

    def __abs__(self):
        return _iabs(self)

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs.get("out") is not None:
            return NotImplemented
        func = _UFUNCS.get(ufunc)
        if func is None:
            return NotImplemented
        return func(*inputs)


def as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval(value)


def lower(value):
    """Lower endpoint of an interval, or the value itself."""
    return value.lo if isinstance(value, Interval) else value


def upper(value):
    return value.hi if isinstance(value, Interval) else value


def _iadd(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(_down(a.lo + b.lo), _up(a.hi + b.hi))


def _isub(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(_down(a.lo - b.hi), _up(a.hi - b.lo))


def _imul(a, b):
    a, b = as_interval(a), as_interval(b)
    p = np.stack(np.broadcast_arrays(a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi))
    return Interval(_down(p.min(axis=0)), _up(p.max(axis=0)))


def _idiv(a, b):
    a, b = as_interval(a), as_interval(b)
    if np.any((b.lo <= 0) & (b.hi >= 0)):
        raise ZeroDivisionError("interval divisor contains zero")
    p = np.stack(np.broadcast_arrays(a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi))
    return Interval(_down(p.min(axis=0)), _up(p.max(axis=0)))


def _monotone(fn, domain_lo=None):
    def apply(a):
        a = as_interval(a)
        if domain_lo is not None and np.any(a.lo < domain_lo):
            raise ValueError(f"{fn.__name__} argument below {domain_lo}")
        with np.errstate(divide="ignore"):
            return Interval(*_widen(fn(a.lo), fn(a.hi)))
    return apply


_ilog = _monotone(np.log, 0.0)
_ilog1p = _monotone(np.log1p, -1.0)
_iexp = _monotone(np.exp)
_iexpm1 = _monotone(np.expm1)


def _isqrt(a):
    a = as_interval(a)
    if np.any(a.lo < 0):
        raise ValueError("sqrt of interval with negative part")
    # sqrt is correctly rounded in IEEE arithmetic
    return Interval(_down(np.sqrt(a.lo)), _up(np.sqrt(a.hi)))


def _iabs(a):
    a = as_interval(a)
    lo = np.where(a.lo >= 0, a.lo, np.where(a.hi <= 0, -a.hi, 0.0))
    hi = np.maximum(np.abs(a.lo), np.abs(a.hi))
    return Interval(lo, hi)


def _ipow(a, b):
    a = as_interval(a)
    if not isinstance(b, Interval) and np.ndim(b) == 0 and float(b) == int(b) and 0 <= int(b) <= 64:
        k = int(b)
        if np.all(a.lo >= 0):
            result = Interval(np.ones_like(a.lo))
            for _ in range(k):
                result = _imul(result, a)
            return result
    if np.any(a.lo <= 0):
        raise ValueError("non-integer power of interval requires a positive base")
    return _iexp(_imul(as_interval(b), _ilog(a)))


def _imax(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.maximum(a.lo, b.lo), np.maximum(a.hi, b.hi))


def _iminimum(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.minimum(a.lo, b.lo), np.minimum(a.hi, b.hi))


_UFUNCS = {
    np.add: _iadd,
    np.subtract: _isub,
    np.multiply: _imul,
    np.true_divide: _idiv,
    np.negative: lambda a: -as_interval(a),
    np.log: _ilog,
    np.log1p: _ilog1p,
    np.exp: _iexp,
    np.expm1: _iexpm1,
    np.sqrt: _isqrt,
    np.absolute: _iabs,
    np.power: _ipow,
    np.maximum: _imax,
    np.minimum: _iminimum,
}


# --- constants --------------------------------------------------------------

def constant(text: str, policy: PrecisionPolicy):
    """A decimal constant as a float, or as its enclosure in interval mode."""
    if policy.interval:
        return Interval.from_decimal(text)
    return float(text)


# --- summation ---------------------------------------------------------------

def total(terms, policy: PrecisionPolicy):
    """Sum a 1-d array of terms (or an :class:`Interval` of terms) under ``policy``."""
    if isinstance(terms, Interval):
        lo = math.fsum(terms.lo.tolist())
        hi = math.fsum(terms.hi.tolist())
        return Interval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))
    if policy.mode == "fast":
        return float(np.sum(terms))
    if policy.interval:
        return total(Interval(terms), policy)
    return math.fsum(np.asarray(terms, dtype=np.float64).tolist())


def neumaier_cumsum(terms) -> np.ndarray:
    """Running sums with Neumaier compensation (error O(u) per prefix, not O(n u))."""
    out = np.empty(len(terms), dtype=np.float64)
    s = 0.0
    c = 0.0
    for i, t in enumerate(np.asarray(terms, dtype=np.float64).tolist()):
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
        out[i] = s + c
    return out


def interval_cumsum(lo, hi) -> Interval:
    """Prefix sums enclosing the exact prefix sums of the term intervals.

    Uses float cumsum plus the a-priori bound |err_k| <= gamma_k * sum |t_j|
    with gamma_k = k u / (1 - k u).
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    k = np.arange(1, len(lo) + 1, dtype=np.float64)
    gamma = k * _U / (1.0 - k * _U)
    # 1.01 absorbs rounding in the error bound itself
    err_lo = 1.01 * gamma * np.cumsum(np.abs(lo))
    err_hi = 1.01 * gamma * np.cumsum(np.abs(hi))
    return Interval(_down(np.cumsum(lo) - err_lo), _up(np.cumsum(hi) + err_hi))


def cumulative(terms, policy: PrecisionPolicy):
    """Prefix sums of ``terms`` (array or Interval) under ``policy``."""
    if isinstance(terms, Interval):
        return interval_cumsum(terms.lo, terms.hi)
    if policy.interval:
        return interval_cumsum(terms, terms)
    if policy.mode == "fast":
        return np.cumsum(terms)
    return neumaier_cumsum(terms)


def verdict_le(lhs, rhs, policy: PrecisionPolicy) -> bool:
    """Whether ``lhs <= rhs`` holds under the policy (one-sided relative slack)."""
    if isinstance(lhs, Interval) or isinstance(rhs, Interval) or policy.interval:
        return bool(np.all(upper(lhs) <= lower(rhs)))
    return bool(np.all(np.asarray(lhs) <= np.asarray(rhs) + policy.slack * np.abs(rhs)))
