import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from residue_bounds import bounds as B
from residue_bounds.constants import THEOREM_CONSTANTS as TC, ZETA
from residue_bounds.errors import DomainError, InputError, PoleError
from residue_bounds.precision import Interval

E_E = math.e**math.e


def test_theorem_bound_examples():
    assert B.theorem_upper(2, 14) == pytest.approx(1.920308195560237098561, rel=1e-13)
    assert B.theorem_lower(2, 14) == pytest.approx(0.8565989931466849267504, rel=1e-13)
    assert B.theorem_lower(2, 163, 0) == pytest.approx(0.2836473274346497142453, rel=1e-13)


def test_theorem_domain():
    with pytest.raises(DomainError):
        B.theorem_upper(2, 13)
    with pytest.raises(DomainError):
        B.theorem_lower(1, 100)
    # below 14 only the non-strict form is available
    assert B.theorem_upper(2, 13, strict=False) > 0
    with pytest.raises(DomainError):
        B.theorem_upper(2, 2, strict=False)


def test_theorem_bounds_accept_huge_integers():
    big = 10**400
    ll = math.log(400 * math.log(10))
    expected = (2 * math.exp(0.5772156649015329) * ll ** (1 + 19 / ll)) ** 2
    assert B.theorem_upper(3, big) == pytest.approx(expected, rel=1e-13)


def test_zeta_values():
    assert B.zeta_value(3) == pytest.approx(1.202056903159594285400, rel=1e-15)
    assert B.zeta_value(20) == pytest.approx(1.0000009539620338728, rel=1e-15)
    assert B.zeta_series(3).contains(ZETA[3])
    with pytest.raises(DomainError):
        B.zeta_value(1)


def test_min_constant_examples():
    kappa = math.pi / math.sqrt(163)
    assert B.min_constant_upper(kappa, 2, 163) == pytest.approx(-10.555443440593084945, rel=1e-12)
    assert B.min_constant_lower(kappa, 2, 163) == pytest.approx(0.47475272476574694721, rel=1e-12)
    kappa5 = 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5)
    assert B.min_constant_lower(kappa5, 2, 5, strict=False) == pytest.approx(-0.52097355274740366191, rel=1e-12)
    with pytest.raises(InputError):
        B.min_constant_upper(0.0, 2, 163)


def test_min_constant_pole():
    with pytest.raises(PoleError):
        B.min_constant_upper(0.5, 2, E_E, strict=False)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(2, 12),
    st.floats(20.0, 1e200),
    st.floats(-30.0, 60.0),
)
def test_min_constant_inverts_theorem(n, disc, const):
    upper = B.theorem_upper(n, disc, const)
    lower = B.theorem_lower(n, disc, const)
    assert B.min_constant_upper(upper, n, disc) == pytest.approx(const, rel=1e-8, abs=1e-8)
    assert B.min_constant_lower(lower, n, disc) == pytest.approx(const, rel=1e-8, abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10), st.floats(14.0, 1e100), st.floats(0.0, 40.0), st.floats(0.0, 40.0))
def test_bounds_monotone_in_constant(n, disc, c1, c2):
    lo_c, hi_c = min(c1, c2), max(c1, c2)
    ll = math.log(math.log(disc))
    if ll > 1:
        assert B.theorem_upper(n, disc, lo_c) <= B.theorem_upper(n, disc, hi_c)
        assert B.theorem_lower(n, disc, lo_c) >= B.theorem_lower(n, disc, hi_c)
    assert B.theorem_lower(n, disc, c1) < B.theorem_upper(n, disc, c1) or ll < 1


def test_M_maximum():
    ts = np.exp(np.exp(np.geomspace(1.0001, 6.5, 20001)))
    values = B.M(ts)
    assert values.max() <= 1 + 4 / math.e + 1e-12
    assert B.M(math.exp(E_E)) == pytest.approx(1 + 4 / math.e, rel=1e-15)
    with pytest.raises(DomainError):
        B.M(E_E)


def test_x_of_disc():
    assert B.x_of_disc(1.6e6) == pytest.approx(510340.35337170479561, rel=1e-13)
    assert B.x_of_disc(1.6e6) >= 5e5
    with pytest.raises(DomainError):
        B.x_of_disc(10)


def test_short_sum_bound_examples():
    assert B.short_sum_bound(5e5, 2, math.log(1.6e6)) == pytest.approx(5.240851786757082075, rel=1e-13)
    with pytest.raises(DomainError):
        B.short_sum_bound(4e5, 2, 10.0)


def test_short_sum_bounds_are_ordered():
    xs = np.geomspace(5e5, 1e12, 200)
    for n in (2, 3, 6):
        for ln_d in (1.0, 10.0, 100.0):
            direct = B.short_sum_bound_direct(xs, n, ln_d)
            via_f = B.short_sum_bound_F(xs, n, ln_d)
            sharp = B.short_sum_bound_sharp(xs, n, ln_d)
            stated = B.short_sum_bound(xs, n, ln_d)
            assert np.all(direct <= via_f * (1 + 1e-12))
            assert np.all(via_f <= sharp)
            assert np.all(sharp <= stated)


def test_sigma_envelopes():
    assert B.sigma_lower_bound(59, 2) == pytest.approx(-1.8388726402623084942, rel=1e-13)
    assert B.sigma_upper_bound(5e5, 2) == pytest.approx(3.1540863633843331775, rel=1e-13)
    with pytest.raises(DomainError):
        B.sigma_lower_bound(58, 2)
    with pytest.raises(DomainError):
        B.sigma_upper_bound(2, 2)


def test_helper_function_examples():
    x = 5e5
    assert B.mu_star(x) == pytest.approx(0.1076441676353576031, rel=1e-13)
    assert B.G(x, math.sqrt(x) * math.log(x) ** 2) == pytest.approx(0.023745633426106178835, rel=1e-13)
    assert B.J(x, B.mu_star(x)) == pytest.approx(0.46026770736072769249, rel=1e-13)
    assert B.H(0) == pytest.approx(3.873181111154984611563, rel=1e-13)
    with pytest.raises(DomainError):
        B.G(x, x)
    with pytest.raises(DomainError):
        B.J(5.0, 0.2)
    with pytest.raises(DomainError):
        B.F1(x, 0.3)  # x^mu too large


def test_f_residuals_on_grid():
    xs = np.geomspace(5e5, 1e10, 4000)
    mu = B.mu_star(xs)
    f1, f2, f3 = B.F_limits()
    lx = np.log(xs)
    assert np.all(B.F1(xs, mu) <= f1 + TC["F1_residual"] / lx)
    assert np.all(B.F2(xs, mu) <= f2 + TC["F2_residual"] / lx)
    assert np.all(B.F3(xs, mu) <= f3 + TC["F3_residual"] / lx)


def test_chase_caps_on_grid():
    discs = np.geomspace(1.6e6, 1e12, 4000)
    quartic, disc, square = B.chase_caps(discs)
    assert np.all(quartic <= TC["cap_quartic"])
    assert np.all(disc <= TC["cap_disc"])
    assert np.all(square <= TC["cap_square"])
    assert 1 + TC["cap_quartic"] + TC["cap_disc"] + TC["cap_square"] == pytest.approx(TC["cap_total"])
    assert np.all(B.upper_chain_exponent(discs) <= TC["upper_exponent"])
    assert np.all(B.lower_chain_exponent(discs) <= TC["lower_exponent"])


def test_collapsed_coefficients():
    n_coeff, d_coeff = B.short_sum_chase_coefficients(np.geomspace(5e5, 1e15, 500))
    assert np.all(n_coeff <= TC["chase_cubic"])
    assert np.all(d_coeff <= TC["chase_disc"])


def test_bound_params():
    params = B.BoundParams.for_short_sum(5e5, 3, 10**6).validate()
    assert params.d == 2 and params.alpha == 0.5
    assert params.c == pytest.approx(1 / math.log(5e5))
    with pytest.raises(DomainError):
        B.BoundParams(4e5, 3, 10**6, 0.1, 1e5).validate()
    with pytest.raises(DomainError):
        B.BoundParams(5e5, 3, 10**6, 0.1, 10.0).validate()


def test_unconditional_and_comparators():
    lo, hi = B.uncond_bounds(2, 163)
    assert lo == pytest.approx(0.36232 / math.sqrt(163))
    assert hi == pytest.approx(math.e * math.log(163) / 2)
    comps = B.comparison_bounds(2, 163)
    assert "pal_simonic_upper" not in comps
    assert "pal_simonic_upper" in B.comparison_bounds(3, 10**7)
    with pytest.raises(DomainError):
        B.uncond_bounds(2, 2)


def test_elementary_envelopes():
    assert B.psi_error_bound(math.e) > 0
    with pytest.raises(DomainError):
        B.mertens_lower_envelope(23)
    with pytest.raises(DomainError):
        B.zeta_product_lower_envelope(58, 2)
    lo, hi = B.chebyshev_pi_envelope(1e6)
    assert lo < 78498 < hi


@pytest.mark.parametrize(
    "fn, x",
    [
        (lambda d: B.theorem_upper(3, d), 10**5),
        (lambda d: B.theorem_lower(3, d), 10**5),
        (B.psi_error_bound, 1e4),
        (B.mertens_lower_envelope, 1e4),
        (lambda x: B.sigma_lower_bound(x, 3), 1e4),
        (B.x_of_disc, 1e7),
        (B.M, 1e7),
    ],
)
def test_interval_versions_enclose_floats(fn, x):
    point = fn(x)
    iv = fn(Interval(float(x)))
    assert isinstance(iv, Interval)
    assert iv.contains(point)
    assert iv.width < 1e-12 * abs(point)


def test_array_inputs_match_scalars():
    discs = np.array([14.0, 100.0, 1e6, 1e30])
    arr = B.theorem_upper(3, discs)
    assert arr.shape == (4,)
    assert arr.tolist() == pytest.approx([B.theorem_upper(3, d) for d in discs], rel=1e-15)
