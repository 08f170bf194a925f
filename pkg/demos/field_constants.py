"""Per-field residue bounds and minimal constants for the bundled fields and small quadratics.

For each field the script prints kappa, both bounds at 19 and the smallest
constants that would still make each bound hold.
"""

import math

from residue_bounds import bounds as B
from residue_bounds.fields import bundled_fields
from residue_bounds.quadratic import quadratic_records
from residue_bounds.verifier import exception_discriminants, run_corpus, verify_field


def main() -> None:
    print(f"{'label':<12} {'kappa':>10} {'lower@19':>10} {'upper@19':>10} {'c_min up':>10} {'c_min low':>10}  notes")
    for rec in bundled_fields():
        r = verify_field(rec)
        print(f"{r.label:<12} {r.kappa:>10.6f} {r.lower_19:>10.4g} {r.upper_19:>10.4g} "
              f"{r.c_min_upper:>10.3f} {r.c_min_lower:>10.3f}  {r.notes}")

    records = quadratic_records(5000, with_poly=False)
    summary = run_corpus(records)
    print()
    print(summary.digest(), end="")
    print("const-0 exceptions by discriminant:", exception_discriminants(summary, records))

    # the constant needed at const 0 for Q(sqrt -163)
    kappa = math.pi / math.sqrt(163)
    print(f"Q(sqrt -163): lower bound at const 0 = {B.theorem_lower(2, 163, 0):.6f} > kappa = {kappa:.6f}")


if __name__ == "__main__":
    main()
