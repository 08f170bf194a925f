import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from residue_bounds.constants import EULER_GAMMA_STR, PI_STR, ZETA_STR, decimal_enclosure
from residue_bounds.errors import InputError
from residue_bounds.precision import (
    Interval,
    PrecisionPolicy,
    constant,
    cumulative,
    neumaier_cumsum,
    total,
    verdict_le,
)

INTERVAL = PrecisionPolicy("interval")
finite = st.floats(-1e6, 1e6, allow_nan=False)
positive = st.floats(1e-6, 1e6)


def test_policy_validation():
    assert PrecisionPolicy("fast-float").mode == "fast"
    with pytest.raises(InputError):
        PrecisionPolicy("quad")
    with pytest.raises(InputError):
        PrecisionPolicy("fast", slack=0)


def test_decimal_enclosure():
    lo, hi = decimal_enclosure("0.1")
    assert Fraction(lo) <= Fraction(1, 10) <= Fraction(hi)
    assert hi == math.nextafter(lo, math.inf)
    assert decimal_enclosure("0.5") == (0.5, 0.5)


def test_constants_against_mpmath():
    mpmath.mp.dps = 50
    for text, value in ((PI_STR, mpmath.pi), (EULER_GAMMA_STR, mpmath.euler), (ZETA_STR[3], mpmath.zeta(3))):
        assert abs(mpmath.mpf(text) - value) < mpmath.mpf(10) ** -38
        iv = Interval.from_decimal(text)
        assert mpmath.mpf(float(iv.lo)) <= value <= mpmath.mpf(float(iv.hi))
    assert constant(PI_STR, PrecisionPolicy()) == math.pi
    assert isinstance(constant(PI_STR, INTERVAL), Interval)


@settings(max_examples=300, deadline=None)
@given(finite, finite, finite, finite)
def test_arithmetic_encloses_exact_results(a, b, c, d):
    x = Interval(min(a, b), max(a, b))
    y = Interval(min(c, d), max(c, d))
    def encloses(iv, exact):
        # an infinite endpoint is a valid (if useless) enclosure
        lo, hi = float(iv.lo), float(iv.hi)
        return (lo == -math.inf or Fraction(lo) <= exact) and (hi == math.inf or exact <= Fraction(hi))

    for u in (x.lo, x.hi):
        for v in (y.lo, y.hi):
            fu, fv = Fraction(float(u)), Fraction(float(v))
            assert encloses(x + y, fu + fv)
            assert encloses(x - y, fu - fv)
            assert encloses(x * y, fu * fv)
            if not (y.lo <= 0 <= y.hi):
                with np.errstate(over="ignore"):
                    q = x / y
                assert encloses(q, fu / fv)


@settings(max_examples=300, deadline=None)
@given(positive, positive)
def test_elementary_functions_enclose_mpmath(a, b):
    mpmath.mp.dps = 40
    x = Interval(min(a, b), max(a, b))
    for fn, ref in ((np.log, mpmath.log), (np.exp, mpmath.exp), (np.sqrt, mpmath.sqrt)):
        if fn is np.exp and x.hi > 700:
            continue
        out = fn(x)
        for end in (float(x.lo), float(x.hi)):
            exact = ref(mpmath.mpf(end))
            assert mpmath.mpf(float(out.lo)) <= exact <= mpmath.mpf(float(out.hi))
    p = x ** 1.5
    assert mpmath.mpf(float(p.lo)) <= mpmath.mpf(float(x.lo)) ** 1.5
    assert mpmath.mpf(float(x.hi)) ** 1.5 <= mpmath.mpf(float(p.hi))


def test_interval_with_numpy_ufuncs_and_arrays():
    x = Interval(np.array([1.0, 2.0]), np.array([1.5, 3.0]))
    y = np.log(x) * 2.0 + 1.0
    assert isinstance(y, Interval) and y.lo.shape == (2,)
    assert y[1].contains(2 * math.log(2.5) + 1)
    assert abs(Interval(-2.0, 1.0)).lo == 0.0
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)


def test_summation_modes():
    rng = np.random.default_rng(3)
    terms = rng.standard_normal(10**4) * 10.0 ** rng.integers(-8, 8, 10**4)
    exact = float(sum(Fraction(t) for t in terms.tolist()))
    assert total(terms, PrecisionPolicy("extended")) == exact
    assert total(terms, PrecisionPolicy("fast")) == pytest.approx(exact, rel=1e-6)
    assert total(terms, INTERVAL).contains(exact)


def test_prefix_sums():
    rng = np.random.default_rng(5)
    terms = 1.0 / rng.integers(1, 10**6, 5000)
    exact = np.cumsum([Fraction(t) for t in terms.tolist()])
    exact_f = np.array([float(v) for v in exact])
    assert np.max(np.abs(neumaier_cumsum(terms) - exact_f) / exact_f) <= 2**-52
    iv = cumulative(terms, INTERVAL)
    for k in (0, 17, 999, 4999):
        assert Fraction(float(iv.lo[k])) <= exact[k] <= Fraction(float(iv.hi[k]))
    assert np.array_equal(cumulative(terms, PrecisionPolicy("fast")), np.cumsum(terms))


def test_verdicts():
    ext = PrecisionPolicy("extended", slack=1e-12)
    assert verdict_le(1.0 + 1e-13, 1.0, ext)
    assert not verdict_le(1.0 + 1e-11, 1.0, ext)
    assert not verdict_le(Interval(0.9, 1.0 + 1e-13), 1.0, INTERVAL)
    assert verdict_le(Interval(0.9, 1.0), Interval(1.0, 2.0), INTERVAL)
