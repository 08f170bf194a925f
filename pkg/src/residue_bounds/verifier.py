"""Lemma sweeps, per-field checks of the residue bounds and corpus runs.

Sweeps evaluate each inequality at every jump point of the step function
involved, from both sides, and on a geometric grid.  Margins are relative:
``(rhs - lhs) / |rhs|`` for an inequality ``lhs <= rhs``, so a point passes
when its margin is at least ``-slack`` (or, in interval mode, when the lower
end of the margin enclosure is nonnegative).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
import os
import re

import numpy as np

from . import bounds as B
from . import constants as C
from .errors import DomainError, PoleError
from .fields import BoundReport, FieldRecord, residue
from .precision import DEFAULT_POLICY, Interval, PrecisionPolicy, lower, upper, verdict_le
from .primes import PrimeTable, evaluate_step, step_function
from .splitting import sigma

MAX_LISTED_VIOLATIONS = 20


@dataclass
class SweepReport:
    name: str
    points: int
    violations: int
    min_margin: float
    argmin: float
    tightness: float
    violation_points: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def row(self) -> dict:
        return {
            "lemma": self.name,
            "points": self.points,
            "violations": self.violations,
            "min_margin": format(self.min_margin, ".17g"),
            "argmin": format(self.argmin, ".17g"),
            "tightness": format(self.tightness, ".17g"),
        }


def geometric_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if points <= 0 or hi < lo:
        return np.empty(0)
    if points == 1:
        return np.array([float(lo)])
    return np.geomspace(lo, hi, points)


def _sweep_points(table: PrimeTable, kind: str, policy: PrecisionPolicy, grid, x_min: float, n: int = 2,
                  with_jumps: bool = True):
    """Points and step-function values: right values at jumps, left limits at jumps, then the grid."""
    jumps, values = step_function(table, kind, policy, n=n)
    keep = (jumps >= x_min) & (jumps <= table.limit) & with_jumps
    idx = np.flatnonzero(keep)
    xs_jump = jumps[idx].astype(np.float64)
    right = values[idx]
    if isinstance(values, Interval):
        prev_lo = np.where(idx > 0, values.lo[np.maximum(idx - 1, 0)], 0.0)
        prev_hi = np.where(idx > 0, values.hi[np.maximum(idx - 1, 0)], 0.0)
        left = Interval(prev_lo, prev_hi)
    else:
        left = np.where(idx > 0, values[np.maximum(idx - 1, 0)], 0.0)
    grid = np.asarray(grid, dtype=np.float64)
    grid = grid[(grid >= x_min) & (grid <= table.limit)]
    at_grid = evaluate_step(jumps, values, grid)
    xs = np.concatenate([xs_jump, xs_jump, grid])
    if isinstance(values, Interval):
        vals = Interval(
            np.concatenate([right.lo, left.lo, at_grid.lo]),
            np.concatenate([right.hi, left.hi, at_grid.hi]),
        )
    else:
        vals = np.concatenate([right, left, at_grid])
    return xs, vals


def _summarise(name: str, xs: np.ndarray, margin, ratio, policy: PrecisionPolicy) -> SweepReport:
    m = lower(margin)
    r = upper(ratio)
    if len(xs) == 0:
        return SweepReport(name, 0, 0, math.inf, math.nan, math.nan)
    bad = m < 0 if policy.interval else m < -policy.slack
    order = np.argsort(xs[bad], kind="stable")
    listed = xs[bad][order][:MAX_LISTED_VIOLATIONS].tolist()
    i = int(np.argmin(m))
    return SweepReport(
        name=name,
        points=len(xs),
        violations=int(bad.sum()),
        min_margin=float(m[i]),
        argmin=float(xs[i]),
        tightness=float(np.max(r)),
        violation_points=listed,
    )


def _xs_for(xs: np.ndarray, policy: PrecisionPolicy):
    return Interval(xs) if policy.interval else xs


def default_grid(table: PrimeTable, x_min: float, points: int) -> np.ndarray:
    return geometric_grid(x_min, float(table.limit), points)


def _resolve_grid(table, grid, jumps, x_min, grid_points):
    # an explicit grid is evaluated as given unless jump points are requested
    if jumps is None:
        jumps = grid is None
    if grid is None:
        grid = default_grid(table, x_min, grid_points)
    return grid, bool(jumps)


def verify_psi_theorem(table: PrimeTable, grid=None, policy: PrecisionPolicy = DEFAULT_POLICY,
                       *, grid_points: int = 10**4, jumps: bool | None = None) -> SweepReport:
    """|Psi(x) - ln ln x - gamma| <= 3 (ln x + 2) / (8 pi sqrt x) on [e, limit].

    Without an explicit grid, every prime power (from both sides) and a
    geometric grid of ``grid_points`` points are checked.
    """
    x_min = math.e
    grid, jumps = _resolve_grid(table, grid, jumps, x_min, grid_points)
    xs, psi_vals = _sweep_points(table, "big_psi", policy, grid, x_min, with_jumps=jumps)
    X = _xs_for(xs, policy)
    main = np.log(np.log(X)) + B._gamma(policy.interval)
    dev = abs(psi_vals - main)
    bound = B.psi_error_bound(X)
    return _summarise("psi_theorem", xs, (bound - dev) / bound, dev / bound, policy)


def verify_mertens_lemma(table: PrimeTable, grid=None, policy: PrecisionPolicy = DEFAULT_POLICY,
                         *, grid_points: int = 10**4, jumps: bool | None = None) -> SweepReport:
    """prod_{p <= x} (1 - 1/p) >= e^-gamma / ln x (1 - 3 ln x / (8 pi sqrt x)) on [23.8, limit]."""
    x_min = 23.8
    grid, jumps = _resolve_grid(table, grid, jumps, x_min, grid_points)
    xs, log_prod = _sweep_points(table, "log_mertens", policy, grid, x_min, with_jumps=jumps)
    X = _xs_for(xs, policy)
    gap = log_prod - np.log(B.mertens_lower_envelope(X))
    return _summarise("mertens_lemma", xs, np.expm1(gap), np.exp(-gap), policy)


def verify_zeta_product_lemma(table: PrimeTable, grid=None, n_range=range(2, 9),
                              policy: PrecisionPolicy = DEFAULT_POLICY, *, grid_points: int = 10**4,
                              jumps: bool | None = None) -> list[SweepReport]:
    """prod_{p <= x} (1 - p^-n)^-1 >= zeta(n) exp(-(1 + 1/(2 ln x)) / (x ln x)) on [59, limit]."""
    x_min = 59.0
    grid, jumps = _resolve_grid(table, grid, jumps, x_min, grid_points)
    reports = []
    for n in n_range:
        if not 2 <= n <= 12:
            raise DomainError("the Euler-product lemma is checked for 2 <= n <= 12")
        xs, log_prod = _sweep_points(table, "log_zeta", policy, grid, x_min, n=n, with_jumps=jumps)
        X = _xs_for(xs, policy)
        gap = log_prod - np.log(B.zeta_product_lower_envelope(X, n))
        reports.append(_summarise(f"zeta_product_lemma_n{n}", xs, np.expm1(gap), np.exp(-gap), policy))
    return reports


def verify_lemmas(table: PrimeTable, policy: PrecisionPolicy = DEFAULT_POLICY, *, grid_points: int = 10**4,
                  n_range=range(2, 9)) -> list[SweepReport]:
    return [
        verify_psi_theorem(table, policy=policy, grid_points=grid_points),
        verify_mertens_lemma(table, policy=policy, grid_points=grid_points),
        *verify_zeta_product_lemma(table, n_range=n_range, policy=policy, grid_points=grid_points),
    ]


# --- single fields ----------------------------------------------------------

def _c_min(fn, kappa, n_K, abs_disc):
    # conservative end of the kappa enclosure: above e^e the bound holds for
    # const >= c_min, below e^e for const <= c_min
    values = [fn(k, n_K, abs_disc, strict=False) for k in {float(lower(kappa)), float(upper(kappa))}]
    return max(values) if abs_disc > math.e**math.e else min(values)


def verify_field(rec: FieldRecord, policy: PrecisionPolicy = DEFAULT_POLICY,
                 const: float = C.THEOREM_CONSTANTS["main"]) -> BoundReport:
    """Check both residue bounds at ``const`` for one field.

    Below |disc| = 14 the theorem makes no claim: the pass flags stay unset
    but the bounds and minimal constants are still reported.
    """
    kappa = residue(rec, policy)
    kappa_mid = kappa.mid if isinstance(kappa, Interval) else float(kappa)
    n, D = rec.n_K, rec.abs_disc
    notes = []
    report = BoundReport(label=rec.label, kappa=kappa_mid)
    in_domain = D >= C.MAIN_DISC_MIN
    if not in_domain:
        notes.append("|disc| < 14: outside the theorem's domain, flags unset")
    if policy.interval:
        notes.append("interval mode")
        if rec.kappa is None and rec.r1 + rec.r2 > 1:
            digits = len((rec.reg_text or "").replace(".", "").lstrip("-0"))
            notes.append(f"regulator given to {digits} significant digits")
    try:
        report.x_used = B.x_of_disc(D)
    except DomainError:
        notes.append("x(disc) undefined for |disc| <= e^e")
    iv = policy.interval
    upper_b = B.theorem_upper(n, D, const, strict=False, interval=iv)
    lower_b = B.theorem_lower(n, D, const, strict=False, interval=iv)
    report.upper_19 = float(upper(upper_b)) if iv else upper_b
    report.lower_19 = float(lower(lower_b)) if iv else lower_b
    if in_domain:
        report.pass_upper = verdict_le(kappa, upper_b, policy)
        report.pass_lower = verdict_le(lower_b, kappa, policy)
    try:
        report.c_min_upper = _c_min(B.min_constant_upper, kappa, n, D)
        report.c_min_lower = _c_min(B.min_constant_lower, kappa, n, D)
        if D < math.e**math.e:
            notes.append("|disc| < e^e: bounds hold for constants below c_min")
    except PoleError:
        notes.append("c_min undefined at |disc| = e^e")
    report.comparators = B.comparison_bounds(n, D)
    report.notes = "; ".join(notes)
    return report


def passes_at(rec: FieldRecord, const: float, policy: PrecisionPolicy = DEFAULT_POLICY) -> bool:
    """Whether kappa satisfies both bounds with ``const`` in place of 19 (domain not enforced)."""
    kappa = residue(rec, policy)
    iv = policy.interval
    up = B.theorem_upper(rec.n_K, rec.abs_disc, const, strict=False, interval=iv)
    lo = B.theorem_lower(rec.n_K, rec.abs_disc, const, strict=False, interval=iv)
    return verdict_le(kappa, up, policy) and verdict_le(lo, kappa, policy)


@dataclass
class ShortSumReport:
    label: str
    x: float
    log_kappa: float
    sigma: float
    deviation: float
    bound: float
    margin: float
    passed: bool


def verify_short_sum(rec: FieldRecord, table: PrimeTable, x: float = C.SHORT_SUM_X_MIN,
                     policy: PrecisionPolicy = DEFAULT_POLICY, *, kappa_factor: float = 1.0) -> ShortSumReport:
    """|ln kappa - Sigma(x)| <= the short-sum bound.

    ``kappa_factor`` multiplies kappa before the check; it exists to exercise
    the failure path.
    """
    if rec.poly is None:
        raise DomainError(f"{rec.label}: a defining polynomial is needed for Sigma(x)")
    kappa = residue(rec, policy) * kappa_factor
    s = sigma(rec.poly, rec.bad_primes, table, x, policy)
    iv = policy.interval
    X = Interval(float(x)) if iv else float(x)
    bound = B.short_sum_bound(X, rec.n_K, B.log_abs_disc(rec.abs_disc, iv))
    dev = abs(np.log(kappa) - s)
    margin = (bound - dev) / bound
    passed = bool(lower(margin) >= 0) if iv else bool(margin >= -policy.slack)

    def mid(v):
        return v.mid if isinstance(v, Interval) else float(v)

    return ShortSumReport(rec.label, float(x), mid(np.log(kappa)), mid(s), mid(dev), mid(bound),
                          float(lower(margin)), passed)


# --- corpus -------------------------------------------------------------------

def natural_key(label: str):
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", label))


@dataclass(frozen=True)
class CorpusOptions:
    policy: PrecisionPolicy = DEFAULT_POLICY
    threads: int | None = None
    const: float = C.THEOREM_CONSTANTS["main"]


@dataclass
class CorpusSummary:
    reports: list
    fields: int = 0
    in_domain: int = 0
    pass_const: int = 0
    failures: list = field(default_factory=list)
    pass_zero: int = 0
    zero_exceptions: list = field(default_factory=list)
    const: float = C.THEOREM_CONSTANTS["main"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def digest(self) -> str:
        lines = [
            f"fields: {self.fields}",
            f"fields with |disc| >= 14: {self.in_domain}",
            f"passing at const {self.const:g}: {self.pass_const}",
            f"failing at const {self.const:g}: {len(self.failures)}",
            f"passing at const 0 (all fields): {self.pass_zero}",
            f"const-0 exceptions: {len(self.zero_exceptions)}",
        ]
        lines += [f"  {label}" for label in self.zero_exceptions]
        if self.failures:
            lines.append("failures:")
            lines += [f"  {label}" for label in self.failures]
        return "\n".join(lines) + "\n"


def _check_one(rec: FieldRecord, options: CorpusOptions):
    report = verify_field(rec, options.policy, options.const)
    return report, passes_at(rec, 0.0, options.policy)


def run_corpus(records, table: PrimeTable | None = None, options: CorpusOptions = CorpusOptions()) -> CorpusSummary:
    """Verify every record; reports are ordered by label whatever the thread count.

    ``table`` is accepted for symmetry with the sweeps; the main-theorem check
    needs no prime data.
    """
    records = sorted(records, key=lambda r: natural_key(r.label))
    threads = options.threads or os.cpu_count() or 1
    if threads > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _check_one(r, options), records, chunksize=256))
    else:
        results = [_check_one(r, options) for r in records]
    summary = CorpusSummary(reports=[r for r, _ in results], fields=len(records), const=options.const)
    for rec, (report, zero_ok) in zip(records, results):
        if report.pass_upper is not None:
            summary.in_domain += 1
            if report.pass_upper and report.pass_lower:
                summary.pass_const += 1
            else:
                summary.failures.append(rec.label)
        if zero_ok:
            summary.pass_zero += 1
        else:
            summary.zero_exceptions.append(rec.label)
    return summary


def exception_discriminants(summary: CorpusSummary, records) -> list[int]:
    by_label = {r.label: r.disc for r in records}
    return sorted(by_label[label] for label in summary.zero_exceptions)


__all__ = [
    "CorpusOptions",
    "CorpusSummary",
    "ShortSumReport",
    "SweepReport",
    "exception_discriminants",
    "geometric_grid",
    "natural_key",
    "passes_at",
    "run_corpus",
    "verify_field",
    "verify_lemmas",
    "verify_mertens_lemma",
    "verify_psi_theorem",
    "verify_short_sum",
    "verify_zeta_product_lemma",
]
