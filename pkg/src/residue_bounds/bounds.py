"""Closed-form bound functions and their inversion.

Functions here are written once with numpy ufuncs and accept Python floats,
numpy arrays or :class:`~residue_bounds.precision.Interval` objects.  When any
argument is an interval, transcendental constants are replaced by rigorous
enclosures and the result is an interval.

Discriminants enter only through ``ln|disc|``; integer discriminants of any
size are accepted (``math.log`` on a Python int uses the exact bit length).
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import constants as C
from .errors import DomainError, InputError, PoleError
from .precision import DEFAULT_POLICY, ELEMENTARY_ULPS, Interval, PrecisionPolicy, lower, upper

TC = C.THEOREM_CONSTANTS


def _interval_mode(*args) -> bool:
    return any(isinstance(a, Interval) for a in args)


def _const(text: str, iv: bool):
    return Interval.from_decimal(text) if iv else float(text)


def _pi(iv):
    return _const(C.PI_STR, iv)


def _gamma(iv):
    return _const(C.EULER_GAMMA_STR, iv)


def _e(iv):
    return _const(C.E_STR, iv)


def _require(condition, message: str):
    if not np.all(condition):
        raise DomainError(message)


def _out(value):
    if isinstance(value, Interval):
        return value
    value = np.asarray(value, dtype=np.float64)
    return float(value) if value.ndim == 0 else value


def log_abs_disc(abs_disc, interval: bool = False):
    """ln|disc| for ints of any size, floats, arrays or intervals."""
    if isinstance(abs_disc, Interval):
        return np.log(abs(abs_disc))
    if isinstance(abs_disc, (int, np.integer)):
        value = math.log(abs(int(abs_disc)))
        if interval:
            spread = ELEMENTARY_ULPS * math.ulp(value)
            return Interval(value - spread, value + spread)
        return value
    value = np.log(np.abs(np.asarray(abs_disc, dtype=np.float64)))
    return np.log(Interval(np.abs(np.asarray(abs_disc, dtype=np.float64)))) if interval else _out(value)


def _loglog_disc(abs_disc, interval=False):
    ln_d = log_abs_disc(abs_disc, interval)
    _require(lower(ln_d) > 1.0, "need |disc| > e so that ln ln|disc| > 0")
    return ln_d, np.log(ln_d)


# --- zeta values ------------------------------------------------------------

def zeta_series(n: int, terms: int = 10**5) -> Interval:
    """Enclosure of zeta(n) from a partial sum plus integral tail bounds.

    The tail satisfies (K+1)^(1-n)/(n-1) <= sum_{k>K} k^-n <= K^(1-n)/(n-1).
    """
    if int(n) != n or n < 2:
        raise DomainError("zeta_series requires an integer n >= 2")
    n = int(n)
    k = np.arange(1, terms + 1, dtype=np.float64)
    head = math.fsum((k ** -float(n)).tolist())
    # each term carries at most ~2 ulp of rounding from the power
    head_err = 4.0 * terms * math.ulp(1.0) * 2.0 ** -1
    tail_lo = (terms + 1) ** (1 - n) / (n - 1)
    tail_hi = terms ** (1 - n) / (n - 1)
    return Interval(
        math.nextafter(head + tail_lo - head_err, -math.inf),
        math.nextafter(head + tail_hi + head_err, math.inf),
    )


def zeta_value(n: int, policy: PrecisionPolicy = DEFAULT_POLICY):
    """Riemann zeta at an integer n >= 2."""
    if int(n) != n or n < 2:
        raise DomainError("zeta_value requires an integer n >= 2")
    n = int(n)
    if n in C.ZETA_STR:
        return _const(C.ZETA_STR[n], policy.interval)
    # for n > 16 a short series already pins zeta(n) below one ulp
    enclosure = zeta_series(n, terms=64)
    return enclosure if policy.interval else enclosure.mid


def _zeta_generic(n, iv):
    if np.ndim(n) == 0:
        return zeta_value(int(n), PrecisionPolicy("interval") if iv else DEFAULT_POLICY)
    values = [zeta_value(int(k)) for k in np.asarray(n).ravel()]
    return np.asarray(values).reshape(np.shape(n))


# --- prime sum envelopes -----------------------------------------------------

def psi_error_bound(x):
    """3 (ln x + 2) / (8 pi sqrt x): deviation allowed for Psi(x) - ln ln x - gamma."""
    _require(lower(x) >= math.e, "psi_error_bound requires x >= e")
    iv = _interval_mode(x)
    return _out(3.0 * (np.log(x) + 2.0) / (8.0 * _pi(iv) * np.sqrt(x)))


def schoenfeld_psi_bound(x):
    """sqrt(x) (ln x)^2 / (8 pi): envelope for |psi(x) - x| (x >= 73.2)."""
    iv = _interval_mode(x)
    return _out(np.sqrt(x) * np.log(x) ** 2 / (8.0 * _pi(iv)))


def mertens_lower_envelope(x):
    """e^-gamma / ln x * (1 - 3 ln x / (8 pi sqrt x)), valid for x >= 23.8."""
    _require(lower(x) >= 23.8, "mertens envelope requires x >= 23.8")
    iv = _interval_mode(x)
    lx = np.log(x)
    return _out(np.exp(-_gamma(iv)) / lx * (1.0 - 3.0 * lx / (8.0 * _pi(iv) * np.sqrt(x))))


def zeta_product_lower_envelope(x, n: int):
    """zeta(n) exp(-(1 + 1/(2 ln x)) / (x ln x)), valid for x >= 59."""
    _require(lower(x) >= 59, "zeta product envelope requires x >= 59")
    iv = _interval_mode(x)
    lx = np.log(x)
    return _out(_zeta_generic(n, iv) * np.exp(-(1.0 + 0.5 / lx) / (x * lx)))


def chebyshev_pi_envelope(x):
    """(x/ln x + x/(2 ln^2 x), x/ln x + 3x/(2 ln^2 x)); the lower side needs x >= 59."""
    lx = np.log(x)
    return _out(x / lx + x / (2.0 * lx**2)), _out(x / lx + 3.0 * x / (2.0 * lx**2))


def sigma_upper_bound(x, n_K):
    """(n_K - 1)(ln ln x + gamma + psi_error_bound(x))."""
    _require(lower(x) >= math.e, "sigma_upper_bound requires x >= e")
    iv = _interval_mode(x)
    return _out((n_K - 1) * (np.log(np.log(x)) + _gamma(iv) + psi_error_bound(x)))


def sigma_lower_bound(x, n_K):
    """Lower bound for the truncated sum of Lambda(n) a(n) / (n ln n), x >= 59."""
    _require(lower(x) >= 59, "sigma_lower_bound requires x >= 59")
    iv = _interval_mode(x)
    pi = _pi(iv)
    lx = np.log(x)
    inner = 1.0 - 3.0 * lx / (8.0 * pi * np.sqrt(x))
    _require(lower(inner) > 0, "1 - 3 ln x / (8 pi sqrt x) must be positive")
    main = np.log(_zeta_generic(n_K, iv) / (np.exp(_gamma(iv)) * lx) * inner)
    tail = (n_K - 1) / lx * (1.0 + lx**2 / (8.0 * pi * np.sqrt(x)) + TC["sigma_lower_lnx"] * lx / x)
    return _out(main - tail)


# --- helper functions of the short-sum estimate ------------------------------

def G(x, h):
    """Error from replacing the truncated sum by its average over [x, x + h]."""
    _require(lower(x) > 1, "G requires x > 1")
    _require((lower(h) > 0) & (upper(h) < lower(x)), "G requires 0 < h < x")
    iv = _interval_mode(x, h)
    lx = np.log(x)
    return _out(h / (x * lx) + 3.0 * (lx + h / x + 2.0) / (4.0 * _pi(iv) * np.sqrt(x)))


def _log_C2(iv):
    pi = _pi(iv)
    z32 = _const(C.ZETA_3_2_STR, iv)
    return np.log(pi ** 1.5 * z32 / (6.0 * np.sqrt(_const("2", iv))))


def H(t):
    """Convexity-bound factor at alpha = 1/2: 3 [ln(pi^1.5 zeta(3/2) / (6 sqrt 2)) + ln(3/2 + |3 + it|) / 2]."""
    _require(lower(t) >= 0, "H requires t >= 0")
    iv = _interval_mode(t)
    return _out(3.0 * (_log_C2(iv) + np.log(1.5 + np.sqrt(9.0 + t * t)) / 2.0))


def _check_x_mu(x, mu, name):
    _require(lower(x) > math.e**2, f"{name} requires x > e^2")
    _require((lower(mu) > 0) & (upper(mu) < 1), f"{name} requires 0 < mu < 1")


def J(x, mu):
    _check_x_mu(x, mu, "J")
    lx = np.log(x)
    return _out((mu + 2.0 / (lx - 2.0)) + 2.0 * (1.0 + x ** (-mu)) ** (0.5 + 1.0 / lx) / lx)


def _check_F_domain(x, mu, name):
    _check_x_mu(x, mu, name)
    _require(upper(mu) < 0.5, f"{name} requires mu < 1/2")
    lx = np.log(lower(x))
    # x^mu <= sqrt(x) / (ln x)^2, with relative slack for the defining choice of mu
    _require(
        upper(mu) * lx <= 0.5 * lx - 2.0 * np.log(lx) + 1e-12 * lx,
        f"{name} requires x^mu <= sqrt(x) / (ln x)^2",
    )


def F1(x, mu):
    _check_F_domain(x, mu, "F1")
    iv = _interval_mode(x, mu)
    lx = np.log(x)
    return _out(1.0 + 3.0 * x ** (mu - 0.5) * (lx + x ** (-mu) + 2.0) * lx / (4.0 * _pi(iv)))


def F2(x, mu):
    _check_F_domain(x, mu, "F2")
    iv = _interval_mode(x, mu)
    pi, e = _pi(iv), _e(iv)
    lx = np.log(x)
    h_part = _log_C2(iv) + np.log(1.5 + np.sqrt(9.0 + x ** (2.0 * mu))) / 2.0
    j_part = 0.5 + 2.0 / (lx - 2.0) + 2.0 * (1.0 + x ** (-mu)) ** (0.5 + 1.0 / lx) / lx
    return _out(3.0 * e / (pi * lx) * h_part * j_part * (1.0 + 1.0 / (mu * lx)))


def F3(x, mu):
    _check_F_domain(x, mu, "F3")
    iv = _interval_mode(x, mu)
    lx = np.log(x)
    return _out(
        3.0 * _e(iv) / (4.0 * _pi(iv))
        * (1.0 + 4.0 / (lx - 2.0) + 4.0 * (1.0 + x ** (-mu)) ** (0.5 + 1.0 / lx) / lx)
    )


def F_limits(iv: bool = False):
    """Limits of (F1, F2, F3) as x -> infinity along mu = mu_star(x)."""
    pi, e = _pi(iv), _e(iv)
    return 1.0 + 3.0 / (4.0 * pi), 3.0 * e / (8.0 * pi), 3.0 * e / (4.0 * pi)


def mu_star(x):
    """1/2 - 2 ln ln x / ln x, the choice making x^mu = sqrt(x) / (ln x)^2."""
    _require(lower(x) > math.e**math.e, "mu_star requires x > e^e")
    lx = np.log(x)
    mu = 0.5 - 2.0 * np.log(lx) / lx
    _require((lower(mu) > 0) & (upper(mu) < 0.5), "mu_star(x) must lie in (0, 1/2)")
    return _out(mu)


def short_sum_bound(x, n_K, ln_abs_disc):
    """Bound for |ln kappa - Sigma(x)| as stated for x >= 5e5 (constants 1.45, 6.01)."""
    _require(lower(x) >= C.SHORT_SUM_X_MIN, "short_sum_bound requires x >= 5e5")
    iv = _interval_mode(x, ln_abs_disc)
    pi, e = _pi(iv), _e(iv)
    lx = np.log(x)
    sx = np.sqrt(x)
    return _out(
        (3.0 * e / (8.0 * pi) + TC["short_sum_n"] / lx) * lx**3 / sx * (n_K - 1)
        + (3.0 * e / (4.0 * pi) + TC["short_sum_disc"] / lx) * lx**2 / sx * ln_abs_disc
    )


def short_sum_bound_sharp(x, n_K, ln_abs_disc):
    """The slightly stronger composite obtained from the F-residuals."""
    _require(lower(x) >= C.SHORT_SUM_X_MIN, "short_sum_bound_sharp requires x >= 5e5")
    iv = _interval_mode(x, ln_abs_disc)
    f1, f2, f3 = F_limits(iv)
    lx = np.log(x)
    sx = np.sqrt(x)
    coeff_n = f2 + TC["F2_residual"] / lx + f1 / lx**2 + TC["F1_residual"] / lx**3
    return _out(coeff_n * lx**3 / sx * (n_K - 1) + (f3 + TC["F3_residual"] / lx) * lx**2 / sx * ln_abs_disc)


def short_sum_bound_direct(x, n_K, ln_abs_disc, mu=None):
    """d G(x, x^(1-mu)) + J(x, mu) e (ln x)^2/(pi sqrt x) (H(x^mu)(1 + 1/(mu ln x)) d + 3/2 ln|disc|).

    This is the estimate before the F-functions are introduced; it is valid
    whenever 0 < mu < 1/2 and x^mu <= sqrt(x)/(ln x)^2.
    """
    if mu is None:
        mu = mu_star(x)
    _check_F_domain(x, mu, "short_sum_bound_direct")
    iv = _interval_mode(x, mu, ln_abs_disc)
    d = n_K - 1
    lx = np.log(x)
    xm = x**mu
    integral = J(x, mu) * _e(iv) * lx**2 / (_pi(iv) * np.sqrt(x)) * (
        H(xm) * (1.0 + 1.0 / (mu * lx)) * d + 1.5 * ln_abs_disc
    )
    return _out(d * G(x, x / xm) + integral)


def short_sum_bound_F(x, n_K, ln_abs_disc, mu=None):
    """(F1/(x^mu ln x) + F2 (ln x)^3/sqrt x)(n_K - 1) + F3 (ln x)^2/sqrt x ln|disc|."""
    if mu is None:
        mu = mu_star(x)
    lx = np.log(x)
    sx = np.sqrt(x)
    return _out(
        (F1(x, mu) / (x**mu * lx) + F2(x, mu) * lx**3 / sx) * (n_K - 1)
        + F3(x, mu) * lx**2 / sx * ln_abs_disc
    )


@dataclass(frozen=True)
class BoundParams:
    """Parameters of the short-sum estimate; alpha is fixed at its limit 1/2."""

    x: float
    n_K: int
    abs_disc: int
    mu: float
    h: float

    alpha = 0.5

    @property
    def c(self) -> float:
        return 1.0 / math.log(self.x)

    @property
    def d(self) -> int:
        return self.n_K - 1

    @classmethod
    def for_short_sum(cls, x: float, n_K: int, abs_disc: int) -> "BoundParams":
        mu = mu_star(x)
        return cls(x, n_K, abs_disc, mu, x ** (1.0 - mu))

    def validate(self) -> "BoundParams":
        lx = math.log(self.x)
        if self.x < C.SHORT_SUM_X_MIN:
            raise DomainError("x must be at least 5e5")
        if not (math.sqrt(self.x) * lx**2 * (1 - 1e-12) <= self.h < self.x):
            raise DomainError("need sqrt(x) (ln x)^2 <= h < x")
        if not 0 < self.mu < 1:
            raise DomainError("mu must lie in (0, 1)")
        if self.n_K < 2:
            raise DomainError("degree must be at least 2")
        return self


# --- main theorem -------------------------------------------------------------

def M(t):
    """1 + 4 ln ln ln t / ln ln t; maximal (1 + 4/e) at t = exp(e^e)."""
    _require(lower(t) > math.e**math.e, "M requires t > e^e")
    llt = np.log(np.log(t))
    return _out(1.0 + 4.0 * np.log(llt) / llt)


def M_of_disc(abs_disc, interval: bool = False):
    ln_d, ll = _loglog_disc(abs_disc, interval)
    _require(lower(ll) > 1.0, "M requires |disc| > e^e")
    return _out(1.0 + 4.0 * np.log(ll) / ll)


def x_of_disc(abs_disc, interval: bool = False):
    """(ln|disc|)^2 (ln ln|disc|)^8, the truncation point used for a field."""
    ln_d, ll = _loglog_disc(abs_disc, interval)
    _require(lower(ll) > 1.0, "x_of_disc requires |disc| > e^e")
    return _out(ln_d**2 * ll**8)


def _disc_below(abs_disc, threshold) -> bool:
    if isinstance(abs_disc, (int, np.integer)):
        return abs(int(abs_disc)) < threshold
    return bool(np.any(np.asarray(lower(abs_disc), dtype=float) < threshold))


def _theorem_domain(n_K, abs_disc, strict):
    if np.any(np.asarray(n_K) < 2):
        raise DomainError("degree must be at least 2")
    if strict and _disc_below(abs_disc, C.MAIN_DISC_MIN):
        raise DomainError("the main theorem needs |disc| >= 14")


def theorem_upper(n_K, abs_disc, const=TC["main"], *, strict: bool = True, interval: bool = False):
    """(2 e^gamma (ln ln|disc|)^(1 + const / ln ln|disc|))^(n_K - 1)."""
    _theorem_domain(n_K, abs_disc, strict)
    iv = interval or _interval_mode(abs_disc, const)
    _, ll = _loglog_disc(abs_disc, iv)
    return _out((2.0 * np.exp(_gamma(iv)) * ll ** (1.0 + const / ll)) ** (n_K - 1))


def theorem_lower(n_K, abs_disc, const=TC["main"], *, strict: bool = True, interval: bool = False):
    """zeta(n_K) / (2 e^gamma (ln ln|disc|)^(1 + const (n_K - 1) / ln ln|disc|))."""
    _theorem_domain(n_K, abs_disc, strict)
    iv = interval or _interval_mode(abs_disc, const)
    _, ll = _loglog_disc(abs_disc, iv)
    return _out(_zeta_generic(n_K, iv) / (2.0 * np.exp(_gamma(iv)) * ll ** (1.0 + const * (n_K - 1) / ll)))


def uncond_bounds(n_K, abs_disc):
    """(0.36232 / sqrt|disc|, (e ln|disc| / (2 (n_K - 1)))^(n_K - 1))."""
    if np.any(np.asarray(n_K) < 2) or _disc_below(abs_disc, 3):
        raise DomainError("unconditional bounds need n_K >= 2 and |disc| >= 3")
    iv = _interval_mode(abs_disc)
    ln_d = log_abs_disc(abs_disc, iv)
    lo = TC["uncond_lower"] / np.exp(ln_d / 2.0)
    hi = (_e(iv) * ln_d / (2.0 * (n_K - 1))) ** (n_K - 1)
    return _out(lo), _out(hi)


def comparison_bounds(n_K: int, abs_disc) -> dict:
    """Comparator values for reports.

    The Cho-Kim values drop their unspecified o(1) terms and are therefore
    only asymptotic.  The Palojarvi-Simonic upper bound is included only when
    |disc| >= 5.4e6.
    """
    out = {}
    lo, hi = uncond_bounds(n_K, abs_disc)
    out["uncond_lower"] = lo
    out["uncond_upper"] = hi
    ln_d = log_abs_disc(abs_disc)
    if ln_d > 1.0:
        ll = math.log(ln_d)
        two_eg = 2.0 * math.exp(C.EULER_GAMMA)
        out["cho_kim_upper_asymptotic"] = (two_eg * ll) ** (n_K - 1)
        out["cho_kim_lower_asymptotic"] = zeta_value(n_K) / (two_eg * ll)
        if not _disc_below(abs_disc, C.PALSIM_DISC_MIN):
            out["pal_simonic_upper"] = (2.0 * math.exp(C.EULER_GAMMA + TC["palsim"] / ll) * ll) ** (n_K - 1)
    return out


def _inversion_logs(n_K, abs_disc, strict):
    _theorem_domain(n_K, abs_disc, strict)
    _, ll = _loglog_disc(abs_disc)
    lll = np.log(ll)
    if np.any(lll == 0):
        raise PoleError("ln ln ln|disc| = 0: the constant cannot be recovered at |disc| = e^e")
    return ll, lll


def min_constant_upper(kappa, n_K, abs_disc, *, strict: bool = True):
    """The constant c for which the upper bound is an equality at ``kappa``.

    For |disc| > e^e the upper bound holds exactly when const >= c.
    """
    if np.any(np.asarray(kappa) <= 0):
        raise InputError("kappa must be positive")
    ll, lll = _inversion_logs(n_K, abs_disc, strict)
    a = np.log(kappa) / (n_K - 1) - math.log(2.0) - C.EULER_GAMMA
    return _out(ll * (a - lll) / lll)


def min_constant_lower(kappa, n_K, abs_disc, *, strict: bool = True):
    """The constant c for which the lower bound is an equality at ``kappa``."""
    if np.any(np.asarray(kappa) <= 0):
        raise InputError("kappa must be positive")
    ll, lll = _inversion_logs(n_K, abs_disc, strict)
    zeta = _zeta_generic(n_K, False)
    b = np.log(zeta) - math.log(2.0) - C.EULER_GAMMA - np.log(kappa)
    return _out(ll * (b - lll) / ((n_K - 1) * lll))


# --- constant chasing for |disc| >= 1.6e6 ------------------------------------

def chase_caps(abs_disc, interval: bool = False):
    """The three quantities capped by 18.38, 50.4 and 0.06 in the lower-bound chase."""
    ln_d, ll = _loglog_disc(abs_disc, interval)
    two_m = 2.0 * M_of_disc(abs_disc, interval)
    iv = interval or _interval_mode(abs_disc)
    quartic = TC["chase_cubic"] * two_m**4 / ln_d
    disc = TC["chase_disc"] * two_m**3 / ll
    square = 3.0 * two_m**2 / (4.0 * _pi(iv) * ln_d * ll**2)
    return _out(quartic), _out(disc), _out(square)


def upper_chain_exponent(abs_disc, interval: bool = False):
    """Effective constant of the upper-bound chase; the argument shows it is <= 18.3."""
    ln_d, ll = _loglog_disc(abs_disc, interval)
    two_m = 2.0 * M_of_disc(abs_disc, interval)
    extra = TC["chase_cubic"] * two_m**3 / ln_d + TC["chase_disc"] * two_m**2 / ll
    return _out(4.0 + extra / np.log(ll))


def lower_chain_exponent(abs_disc, interval: bool = False):
    """Effective constant of the lower-bound chase; the argument shows it is <= 18.5."""
    _, ll = _loglog_disc(abs_disc, interval)
    two_m = 2.0 * M_of_disc(abs_disc, interval)
    return _out(4.0 + TC["cap_total"] / (two_m * np.log(ll)))


def short_sum_chase_coefficients(x):
    """(3e/(8 pi) + 1.45/ln x, 3e/(4 pi) + 6.01/ln x); collapsed to 0.44 and 1.11 for x >= 5e5."""
    iv = _interval_mode(x)
    lx = np.log(x)
    pi, e = _pi(iv), _e(iv)
    return (
        _out(3.0 * e / (8.0 * pi) + TC["short_sum_n"] / lx),
        _out(3.0 * e / (4.0 * pi) + TC["short_sum_disc"] / lx),
    )
