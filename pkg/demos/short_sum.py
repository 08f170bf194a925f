"""Compare ln kappa with the truncated prime-power sum Sigma(x) for the bundled fields.

Also shows how the deviation shrinks as x grows, against the allowed error.
"""

import math

from residue_bounds import sieve
from residue_bounds.bounds import log_abs_disc, short_sum_bound
from residue_bounds.fields import bundled_fields, residue
from residue_bounds.splitting import sigma_step
from residue_bounds.verifier import verify_short_sum


def main() -> None:
    table = sieve(10**6)
    print(f"{'label':<12} {'ln kappa':>10} {'Sigma(5e5)':>11} {'deviation':>10} {'bound':>8}  pass")
    for rec in bundled_fields():
        r = verify_short_sum(rec, table, 5e5)
        print(f"{r.label:<12} {r.log_kappa:>10.6f} {r.sigma:>11.6f} {r.deviation:>10.2e} {r.bound:>8.3f}  {r.passed}")

    rec = next(r for r in bundled_fields() if r.label == "3.1.23.1")
    n, values = sigma_step(rec.poly, rec.bad_primes, table, 10**6)
    target = math.log(residue(rec))
    print(f"\nconvergence for {rec.label}:")
    for x in (10**3, 10**4, 10**5, 5 * 10**5, 10**6):
        i = int((n <= x).sum()) - 1
        bound = short_sum_bound(x, rec.n_K, log_abs_disc(rec.abs_disc)) if x >= 5e5 else math.nan
        print(f"  x = {x:>8}: |ln kappa - Sigma| = {abs(target - values[i]):.3e}   bound {bound:.3f}")


if __name__ == "__main__":
    main()
