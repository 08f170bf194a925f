import math

import numpy as np
import pytest

from residue_bounds.errors import InputError
from residue_bounds.fields import residue
from residue_bounds.quadratic import (
    bad_primes,
    class_numbers,
    defining_polynomial,
    fundamental_discriminants,
    is_fundamental,
    kronecker_table,
    l_one_finite,
    l_one_series,
    label,
    quadratic_records,
    regulator,
    torsion,
)


def reduced_form_count(D: int) -> int:
    """Number of reduced primitive forms ax^2 + bxy + cy^2 of discriminant D < 0."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                count += 1
        a += 1
    return count


def pell_unit(D: int) -> tuple[int, int]:
    """Smallest (t, u), u > 0, with t^2 - D u^2 = +-4."""
    u = 1
    while True:
        for sign in (-4, 4):
            t2 = D * u * u + sign
            t = math.isqrt(t2) if t2 > 0 else -1
            if t > 0 and t * t == t2:
                return t, u
        u += 1


def test_fundamental_discriminants():
    assert fundamental_discriminants(20) == [-3, -4, 5, -7, -8, 8, -11, 12, 13, -15, 17, -19, -20]
    assert not is_fundamental(1) and not is_fundamental(-16) and is_fundamental(-163)
    # 3 |D| / pi^2 asymptotics for the count of each sign, loosely
    discs = fundamental_discriminants(10**4)
    assert len(discs) == len(set(discs))
    assert abs(sum(d < 0 for d in discs) - 3e4 / math.pi**2) < 100


def test_torsion_and_labels():
    assert [torsion(D) for D in (-3, -4, -7, 5)] == [6, 4, 2, 2]
    assert label(-163) == "2.0.163.1" and label(5) == "2.2.5.1"


def test_class_number_one_imaginary():
    discs = [D for D in fundamental_discriminants(10**4) if D < 0]
    h = class_numbers(discs)
    ones = [D for D, k in zip(discs, h.tolist()) if k == 1]
    assert ones == [-3, -4, -7, -8, -11, -19, -43, -67, -163]
    twos = sorted((D for D, k in zip(discs, h.tolist()) if k == 2), reverse=True)
    assert twos == [-15, -20, -24, -35, -40, -51, -52, -88, -91, -115, -123, -148, -187, -232, -235, -267, -403, -427]


def test_imaginary_class_numbers_match_form_counts():
    discs = [D for D in fundamental_discriminants(3000) if D < 0]
    assert class_numbers(discs).tolist() == [reduced_form_count(D) for D in discs]


def test_series_matches_finite_formula():
    discs = fundamental_discriminants(2000)
    for sign in (-1, 1):
        ds = [D for D in discs if D * sign > 0]
        series = l_one_series(ds)
        finite = np.array([l_one_finite(D) for D in ds])
        assert series == pytest.approx(finite, rel=1e-12)
    assert l_one_series([-4])[0] == pytest.approx(math.pi / 4, rel=1e-15)
    with pytest.raises(InputError):
        l_one_series([-4, 5])


def test_regulators_are_fundamental_units():
    for D in [D for D in fundamental_discriminants(300) if D > 0]:
        t, u = pell_unit(D)
        assert regulator(D) == pytest.approx(math.log((t + u * math.sqrt(D)) / 2), rel=1e-13)
    assert regulator(5) == pytest.approx(math.log((1 + math.sqrt(5)) / 2), rel=1e-15)
    with pytest.raises(InputError):
        regulator(-4)


def test_real_class_numbers_from_finite_formula():
    ds = [D for D in fundamental_discriminants(3000) if D > 0]
    h = class_numbers(ds)
    oracle = [round(l_one_finite(D) * math.sqrt(D) / (2 * regulator(D))) for D in ds]
    assert h.tolist() == oracle
    assert dict(zip(ds, h.tolist()))[229] == 3


def test_kronecker_table_is_multiplicative():
    discs = np.array([-163, -4, 5, 12, 229])
    chi = kronecker_table(discs, 200).astype(int)
    for m in range(1, 15):
        for n in range(1, 15):
            assert np.array_equal(chi[:, m * n], chi[:, m] * chi[:, n])


def test_polynomials_and_bad_primes():
    for D in fundamental_discriminants(500):
        f = defining_polynomial(D)
        assert f.discriminant() == D
        ramified = [b.p for b in bad_primes(D)]
        assert ramified == [p for p in range(2, abs(D) + 1) if abs(D) % p == 0 and all(p % q for q in range(2, p))]


def test_quadratic_records():
    records = quadratic_records(200)
    assert records[0].disc == -3 and records[0].w == 6
    assert {r.label for r in records} == {label(D) for D in fundamental_discriminants(200)}
    by_disc = {r.disc: r for r in records}
    assert residue(by_disc[-163]) == pytest.approx(math.pi / math.sqrt(163), rel=1e-15)
    for r in records:
        assert residue(r) == pytest.approx(l_one_finite(r.disc), rel=1e-12)
    assert all(r.poly is None for r in quadratic_records(50, with_poly=False))
    assert min(abs(r.disc) for r in quadratic_records(50, min_abs=14)) == 15
