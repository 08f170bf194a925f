import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from residue_bounds.errors import BadPrimeError, InputError, RangeError
from residue_bounds.precision import Interval, PrecisionPolicy
from residue_bounds.primes import big_psi
from residue_bounds.quadratic import bad_primes as quad_bad_primes
from residue_bounds.quadratic import defining_polynomial, fundamental_discriminants
from residue_bounds.splitting import (
    BadPrimeDecomposition,
    DefiningPolynomial,
    SplittingProfile,
    a_rho,
    batch_degree_counts,
    degree_profile,
    distinct_degree_degrees,
    is_prime,
    profiles,
    sigma,
    sigma_terms,
)

X2_MINUS_5 = DefiningPolynomial((-5, 0, 1))
BAD_X2_MINUS_5 = BadPrimeDecomposition.parse_list("2:2;5:1")


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p, by Euler's criterion."""
    if p == 2:
        return 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
    r = pow(D % p, (p - 1) // 2, p)
    return 0 if D % p == 0 else (1 if r == 1 else -1)


def test_degree_profile_examples():
    assert degree_profile(X2_MINUS_5, 11) == SplittingProfile(11, (1, 1), True)
    assert degree_profile(X2_MINUS_5, 3) == SplittingProfile(3, (2,), True)
    assert degree_profile(X2_MINUS_5, 5) == SplittingProfile(5, (), False)
    with pytest.raises(InputError):
        degree_profile(X2_MINUS_5, 9)


def test_a_rho_examples():
    assert a_rho(SplittingProfile(7, (1, 1), True), 1) == 1
    inert = SplittingProfile(3, (2,), True)
    assert a_rho(inert, 1) == -1
    assert a_rho(inert, 2) == 1
    assert a_rho(SplittingProfile(5, (1, 2), True), 2) == 2
    with pytest.raises(BadPrimeError) as err:
        a_rho(SplittingProfile(5, (), False), 1)
    assert err.value.primes == [5]
    assert a_rho(BadPrimeDecomposition(5, (1,)), 3) == 0


def test_sigma_single_term(table_1e4):
    # 2 divides the index of Z[sqrt 5], so both 2 and 5 need explicit data
    assert sigma(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 2) == -0.5


def test_sigma_missing_bad_primes(table_1e4):
    with pytest.raises(BadPrimeError) as err:
        sigma(X2_MINUS_5, [BadPrimeDecomposition(5, (1,))], table_1e4, 100)
    assert err.value.primes == [2]
    with pytest.raises(BadPrimeError) as err:
        sigma(X2_MINUS_5, [], table_1e4, 100)
    assert err.value.primes == [2, 5]
    # primes above x are not needed: 2 and 3 are inert in Q(sqrt 5), so -1/2 - 1/3 + 1/8
    assert sigma(DefiningPolynomial((-1, -1, 1)), [], table_1e4, 4) == pytest.approx(-17 / 24, rel=1e-15)


def test_sigma_x2_minus_5_to_100(table_1e4):
    exact = Fraction(-7799555899169635163977647087295606820219, 9296050030628330288604507858041640474240)
    assert sigma(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 100) == pytest.approx(float(exact), rel=1e-15)


def test_sigma_interval_and_range(table_1e4):
    value = sigma(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 1000)
    iv = sigma(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 1000, PrecisionPolicy("interval"))
    assert isinstance(iv, Interval) and iv.contains(value)
    with pytest.raises(RangeError):
        sigma(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 10**5)


def test_sigma_terms_are_ordered(table_1e4):
    n, num, den = sigma_terms(X2_MINUS_5, BAD_X2_MINUS_5, table_1e4, 1000)
    assert np.all(np.diff(n) > 0)
    assert n[:5].tolist() == [2, 3, 4, 5, 7]
    assert num[:4].tolist() == [-1, -1, 1, 0]


def test_polynomial_validation():
    with pytest.raises(InputError):
        DefiningPolynomial((1, 2))
    with pytest.raises(InputError):
        DefiningPolynomial((1, 0, 2))
    with pytest.raises(InputError):
        DefiningPolynomial((-4, 0, 1))  # root 2
    with pytest.raises(InputError):
        DefiningPolynomial((0, 1, 1))
    f = DefiningPolynomial.parse("1 1 1 1 1")
    assert f.degree == 4 and f.format() == "1 1 1 1 1"


@pytest.mark.parametrize(
    "coeffs, disc",
    [((-5, 0, 1), 20), ((-1, -1, 1), 5), ((-1, -1, 0, 1), -23), ((1, -2, -1, 1), 49), ((1, 1, 1, 1, 1), 125), ((2, 0, 0, 1), -108)],
)
def test_polynomial_discriminant(coeffs, disc):
    assert DefiningPolynomial(coeffs).discriminant() == disc


def test_bad_prime_parsing():
    items = BadPrimeDecomposition.parse_list("23:1+1; 7:3")
    assert [(b.p, b.degrees) for b in items] == [(23, (1, 1)), (7, (3,))]
    assert BadPrimeDecomposition.format_list(items) == "23:1+1;7:3"
    with pytest.raises(InputError):
        BadPrimeDecomposition.parse_list("23")
    with pytest.raises(InputError):
        BadPrimeDecomposition(5, ())
    with pytest.raises(InputError):
        BadPrimeDecomposition(5, (2, 1)).check_degree(2)


def test_cyclotomic_degrees_follow_multiplicative_order():
    phi5 = DefiningPolynomial((1, 1, 1, 1, 1))
    for p in (2, 3, 11, 19, 29, 31, 101, 9973):
        order = next(k for k in range(1, 5) if pow(p, k, 5) == 1)
        assert degree_profile(phi5, p).degrees == (order,) * (4 // order)


def test_is_prime():
    assert [n for n in range(50) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


polys = st.lists(st.integers(-9, 9), min_size=2, max_size=6).map(lambda c: tuple(c) + (1,))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_batched_profiles_match_reference(table_1e4, coeffs):
    try:
        f = DefiningPolynomial(coeffs)
    except InputError:
        return
    disc = f.discriminant()
    if disc == 0:
        return
    good = [p for p in table_1e4.primes[:150].tolist() if disc % p]
    counts = batch_degree_counts(f, np.array(good))
    for p, row in zip(good, counts.tolist()):
        reference = distinct_degree_degrees([c % p for c in coeffs], p)
        assert tuple(d for d, k in enumerate(row, start=1) for _ in range(k)) == tuple(reference)
        assert sum(reference) == f.degree


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(fundamental_discriminants(3000)))
def test_quadratic_sigma_matches_kronecker_oracle(table_1e4, D):
    f = defining_polynomial(D)
    bad = quad_bad_primes(D)
    x = 10**4
    terms = []
    for p in table_1e4.primes.tolist():
        k, pk = 1, p
        while pk <= x:
            terms.append(kronecker(D, p) ** k / (k * pk))
            k, pk = k + 1, pk * p
    assert sigma(f, bad, table_1e4, x) == pytest.approx(math.fsum(terms), rel=1e-12, abs=1e-15)
    assert abs(sigma(f, bad, table_1e4, x)) <= big_psi(table_1e4, x)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["-1 -1 0 1", "1 -2 -1 1", "1 1 1 1 1", "3 0 0 0 0 1"]), st.floats(2, 10**4))
def test_sigma_bounded_by_big_psi(table_1e4, poly, x):
    f = DefiningPolynomial.parse(poly)
    disc = f.discriminant()
    bad = []
    for p in table_1e4.primes.tolist():
        if disc % p == 0:
            bad.append(BadPrimeDecomposition(p, (1,)))
    value = sigma(f, bad, table_1e4, x)
    assert abs(value) <= (f.degree - 1) * big_psi(table_1e4, x) + 1e-12


def test_profiles_are_deterministic(table_1e4):
    f = DefiningPolynomial((1, 1, 1, 1, 1))
    bad = [BadPrimeDecomposition(5, (1,))]
    a = profiles(f, bad, table_1e4, 5000)
    b = profiles(f, bad, table_1e4, 5000)
    assert a == b
    assert all(sum(p.degrees) == 4 for q, p in a.items() if q != 5)


def test_sigma_constant_between_prime_powers(table_1e4):
    f = DefiningPolynomial((-1, -1, 0, 1))
    bad = [BadPrimeDecomposition(23, (1, 1))]
    assert sigma(f, bad, table_1e4, 90) == sigma(f, bad, table_1e4, 96.9)
    for p in (97, 101, 103):
        jump = sigma(f, bad, table_1e4, p) - sigma(f, bad, table_1e4, p - 0.5)
        assert jump == pytest.approx(a_rho(degree_profile(f, p), 1) / p, abs=1e-15)
