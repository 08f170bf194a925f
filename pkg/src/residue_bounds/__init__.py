"""Explicit conditional bounds for the residue of a Dedekind zeta function at s = 1.

The package evaluates the bounds in closed form, checks the prime-sum
inequalities they rest on, and verifies them field by field.
"""

from .bounds import (
    BoundParams,
    M,
    comparison_bounds,
    min_constant_lower,
    min_constant_upper,
    psi_error_bound,
    short_sum_bound,
    sigma_lower_bound,
    sigma_upper_bound,
    theorem_lower,
    theorem_upper,
    uncond_bounds,
    x_of_disc,
    zeta_value,
)
from .errors import BadPrimeError, DomainError, InputError, RangeError, RecordError, ResidueBoundsError
from .fields import BoundReport, FieldRecord, parse_records, read_reports, residue, write_reports
from .precision import DEFAULT_POLICY, Interval, PrecisionPolicy
from .primes import PrimeTable, big_psi, mertens_product, pi_count, prime_log_sums, psi, sieve, zeta_truncated_product
from .splitting import BadPrimeDecomposition, DefiningPolynomial, SplittingProfile, a_rho, degree_profile, sigma, sigma_step
from .verifier import (
    run_corpus,
    verify_field,
    verify_mertens_lemma,
    verify_psi_theorem,
    verify_short_sum,
    verify_zeta_product_lemma,
)

__version__ = "0.1.0"
