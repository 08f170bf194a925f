"""Numerical constants.

Transcendental constants are stored as 40-digit decimal strings (computed
with mpmath at 45 digits) so that interval mode can build rigorous float
enclosures from them.  Float versions are the correctly rounded doubles.

The explicit constants of the residue bounds are collected in
``THEOREM_CONSTANTS``; the comment next to each entry names the inequality
it belongs to.
"""

from __future__ import annotations

from fractions import Fraction
import math

EULER_GAMMA_STR = "0.5772156649015328606065120900824024310422"
PI_STR = "3.141592653589793238462643383279502884197"
E_STR = "2.718281828459045235360287471352662497757"
ZETA_3_2_STR = "2.612375348685488343348567567924071630571"

# zeta(n), n = 2..16
ZETA_STR = {
    2: "1.644934066848226436472415166646025189219",
    3: "1.202056903159594285399738161511449990765",
    4: "1.082323233711138191516003696541167902775",
    5: "1.036927755143369926331365486457034168057",
    6: "1.017343061984449139714517929790920527902",
    7: "1.0083492773819228268397975498497967596",
    8: "1.004077356197944339378685238508652465259",
    9: "1.002008392826082214417852769232412060486",
    10: "1.000994575127818085337145958900319017006",
    11: "1.000494188604119464558702282526469936469",
    12: "1.00024608655330804829863799804773967096",
    13: "1.000122713347578489146751836526357395714",
    14: "1.000061248135058704829258545105135333747",
    15: "1.000030588236307020493551728510645062588",
    16: "1.000015282259408651871732571487636722023",
}

EULER_GAMMA = float(EULER_GAMMA_STR)
ZETA_3_2 = float(ZETA_3_2_STR)
ZETA = {n: float(s) for n, s in ZETA_STR.items()}


def decimal_enclosure(text: str) -> tuple[float, float]:
    """Return the tightest pair of doubles ``lo <= value <= hi``.

    The decimal string is treated as exact; callers that know the string is
    itself rounded should widen the result further.
    """
    exact = Fraction(text)
    f = float(exact)
    lo = f if Fraction(f) <= exact else math.nextafter(f, -math.inf)
    hi = f if Fraction(f) >= exact else math.nextafter(f, math.inf)
    return lo, hi


THEOREM_CONSTANTS = {
    # main theorem, both bounds
    "main": 19.0,
    # upper-bound exponent before rounding up to 19
    "upper_exponent": 18.3,
    # lower-bound exponent before rounding up to 19
    "lower_exponent": 18.5,
    # short-sum statement, coefficient of (ln x)^3 (n-1)/sqrt(x)
    "short_sum_n": 1.45,
    # short-sum statement, coefficient of (ln x)^2 ln|disc|/sqrt(x)
    "short_sum_disc": 6.01,
    # sharper composite derived from the F-residuals
    "short_sum_n_sharp": 1.35,
    # F1 residual
    "F1_residual": 0.54,
    # F2 residual
    "F2_residual": 1.35,
    # F3 residual
    "F3_residual": 6.01,
    # collapsed coefficients used when chasing the main theorem
    "chase_cubic": 0.44,
    "chase_cubic_sigma": 0.435,
    "chase_disc": 1.11,
    # caps on |disc| >= 1.6e6 and their sum with 1
    "cap_quartic": 18.38,
    "cap_disc": 50.4,
    "cap_square": 0.06,
    "cap_total": 69.84,
    # sum_p ln p / (p (p - 1))
    "prime_log_tail": 0.8,
    # sigma lower bound, coefficient of ln x / x
    "sigma_lower_lnx": 1.3,
    # unconditional lower bound numerator
    "uncond_lower": 0.36232,
    # Palojarvi-Simonic comparator
    "palsim": 2.475,
}

# domain thresholds
SHORT_SUM_X_MIN = 5e5
CHASE_DISC_MIN = 1.6e6
PALSIM_DISC_MIN = 5.4e6
MAIN_DISC_MIN = 14
