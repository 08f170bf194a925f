"""Sweep the three prime-sum inequalities up to 10^7 and print a summary table.

Run with ``python demos/lemma_sweeps.py [limit] [precision]``.
"""

import sys
import time

from residue_bounds import PrecisionPolicy, sieve
from residue_bounds.verifier import verify_lemmas


def main() -> None:
    limit = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**7
    policy = PrecisionPolicy(sys.argv[2] if len(sys.argv) > 2 else "interval")
    start = time.perf_counter()
    table = sieve(limit)
    print(f"sieved {len(table.primes)} primes up to {limit} in {time.perf_counter() - start:.1f} s")
    reports = verify_lemmas(table, policy)
    print(f"{'inequality':<24} {'points':>9} {'violations':>10} {'min margin':>12} {'at x':>10} {'tightness':>14}")
    for r in reports:
        print(f"{r.name:<24} {r.points:>9} {r.violations:>10} {r.min_margin:>12.4e} {r.argmin:>10.4g} {r.tightness:>14.10f}")
    print(f"total {time.perf_counter() - start:.1f} s, mode {policy.mode}")


if __name__ == "__main__":
    main()
