"""Command-line front end.

Every subcommand writes CSV (or JSON lines with ``--format jsonl``) to
standard output or ``--output``; human-readable digests go to standard
error.  Exit status: 0 when every checked inequality holds, 1 when one is
violated, 2 on usage, input or IO errors.

Defaults for the shared flags can be set through environment variables
``RESIDUE_BOUNDS_LIMIT``, ``_PRECISION``, ``_SLACK``, ``_GRID_POINTS``,
``_THREADS`` and ``_FORMAT`` (all with the ``RESIDUE_BOUNDS`` prefix);
explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import bounds as B
from . import constants as C
from .errors import BadPrimeError, ResidueBoundsError
from .fields import bundled_fields, parse_records, read_reports, residue, write_reports
from .precision import Interval, PrecisionPolicy, lower, upper, verdict_le
from .primes import big_psi, mertens_product, sieve, zeta_truncated_product
from .splitting import BadPrimeDecomposition, DefiningPolynomial, sigma
from .verifier import CorpusOptions, run_corpus, verify_lemmas, verify_short_sum

ENV_PREFIX = "RESIDUE_BOUNDS_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name, default)


def _add_common(p: argparse.ArgumentParser, *, limit=True, grid=False, threads=False):
    p.add_argument("--precision", choices=["fast", "fast-float", "extended", "interval"],
                   default=_env("PRECISION", "extended"))
    p.add_argument("--slack", type=float, default=float(_env("SLACK", 1e-12)))
    p.add_argument("--format", choices=["csv", "jsonl"], default=_env("FORMAT", "csv"))
    p.add_argument("--output", help="write data here instead of standard output")
    if limit:
        p.add_argument("--limit", type=int, default=int(_env("LIMIT", 0)) or None,
                       help="sieve bound (default: enough for --x)")
    if grid:
        p.add_argument("--grid-points", type=int, default=int(_env("GRID_POINTS", 10**4)))
    if threads:
        p.add_argument("--threads", type=int, default=int(_env("THREADS", 0)) or None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="residue-bounds", description="Explicit bounds for the residue of Dedekind zeta functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("psi", help="Psi(x) against ln ln x + gamma")
    p.add_argument("--x", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("mertens", help="prod (1 - 1/p) against its lower envelope")
    p.add_argument("--x", type=float, required=True)
    _add_common(p)

    p = sub.add_parser("zeta-product", help="prod (1 - p^-n)^-1 against its lower envelope")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--n", type=int, default=2)
    _add_common(p)

    p = sub.add_parser("sigma", help="Sigma(x) for a defining polynomial, or for every record of --input")
    p.add_argument("--x", type=float, default=C.SHORT_SUM_X_MIN)
    p.add_argument("--poly", help="coefficients, constant term first, space separated")
    p.add_argument("--bad", default="", help="decompositions p:f1+f2;q:f1")
    p.add_argument("--input", help="field records (checks the short-sum inequality per field)")
    p.add_argument("--bundled", action="store_true", help="use the bundled fields")
    _add_common(p)

    p = sub.add_parser("bounds", help="theorem bounds and comparators for a degree and discriminant")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--const", type=float, default=C.THEOREM_CONSTANTS["main"])
    _add_common(p, limit=False)

    p = sub.add_parser("min-const", help="minimal constants replacing 19")
    p.add_argument("--kappa", type=float)
    p.add_argument("--degree", type=int)
    p.add_argument("--disc", type=int)
    p.add_argument("--input", help="field records instead of --kappa/--degree/--disc")
    _add_common(p, limit=False)

    p = sub.add_parser("verify-lemmas", help="sweep the three prime-sum inequalities")
    _add_common(p, grid=True)
    p.add_argument("--n-max", type=int, default=8)

    p = sub.add_parser("verify-fields", help="check the residue bounds over a corpus")
    p.add_argument("--input", help="field records")
    p.add_argument("--input-format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--quadratic", type=int, metavar="BOUND", help="add all quadratic fields with |disc| <= BOUND")
    p.add_argument("--bundled", action="store_true", help="add the bundled fields")
    _add_common(p, limit=False, threads=True)

    p = sub.add_parser("report", help="digest of a report file")
    p.add_argument("--input", required=True)
    _add_common(p, limit=False)
    return parser


# --- output helpers ------------------------------------------------------------

def _open_out(args):
    if args.output:
        return open(args.output, "w", encoding="utf-8", newline="")
    return sys.stdout


def _emit(args, rows: list[dict], columns: list[str]):
    out = _open_out(args)
    try:
        if args.format == "csv":
            writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        else:
            for row in rows:
                out.write(json.dumps(row) + "\n")
        out.flush()
    finally:
        if out is not sys.stdout:
            out.close()


def _real(value) -> str:
    if isinstance(value, (int, float)):
        return format(float(value), ".17g")
    return f"[{format(float(lower(value)), '.17g')}, {format(float(upper(value)), '.17g')}]"


def _policy(args) -> PrecisionPolicy:
    return PrecisionPolicy(args.precision, args.slack)


def _table_for(args, x):
    limit = args.limit or max(int(math.floor(x)) + 1, 2)
    if limit < x:
        raise UsageError(f"--limit {limit} is below --x {x}")
    return sieve(limit)


def _point(x: float, policy: PrecisionPolicy):
    return Interval(x) if policy.interval else x


def _check(flag: bool) -> int:
    return 0 if flag else 1


# --- subcommands --------------------------------------------------------------

def cmd_psi(args) -> int:
    policy = _policy(args)
    table = _table_for(args, args.x)
    value = big_psi(table, args.x, policy)
    X = _point(args.x, policy)
    main = np.log(np.log(X)) + B._gamma(policy.interval)
    bound = B.psi_error_bound(X)
    margin = bound - abs(value - main)
    ok = verdict_le(abs(value - main), bound, policy)
    _emit(args, [{"x": _real(args.x), "big_psi": _real(value), "main_term": _real(main),
                  "bound": _real(bound), "margin": _real(margin), "pass": str(ok).lower()}],
          ["x", "big_psi", "main_term", "bound", "margin", "pass"])
    return _check(ok)


def cmd_mertens(args) -> int:
    policy = _policy(args)
    table = _table_for(args, args.x)
    value = mertens_product(table, args.x, policy)
    row = {"x": _real(args.x), "product": _real(value), "envelope": "", "ratio": "", "pass": ""}
    ok = True
    if args.x >= 23.8:
        env = B.mertens_lower_envelope(_point(args.x, policy))
        ok = verdict_le(env, value, policy)
        row.update(envelope=_real(env), ratio=_real(value / env), **{"pass": str(ok).lower()})
    _emit(args, [row], list(row))
    return _check(ok)


def cmd_zeta_product(args) -> int:
    policy = _policy(args)
    table = _table_for(args, args.x)
    value = zeta_truncated_product(table, args.x, args.n, policy)
    zeta = B.zeta_value(args.n, policy)
    row = {"x": _real(args.x), "n": args.n, "product": _real(value), "zeta": _real(zeta),
           "envelope": "", "ratio": "", "pass": ""}
    ok = verdict_le(value, zeta, policy)
    if args.x >= 59:
        env = B.zeta_product_lower_envelope(_point(args.x, policy), args.n)
        ok = ok and verdict_le(env, value, policy)
        row.update(envelope=_real(env), ratio=_real(value / env))
    row["pass"] = str(ok).lower()
    _emit(args, [row], list(row))
    return _check(ok)


def _load_records(path: str, fmt: str = "csv"):
    with open(path, "rb") as fh:
        return parse_records(fh.read(), fmt)


def cmd_sigma(args) -> int:
    policy = _policy(args)
    table = _table_for(args, args.x)
    if args.input or args.bundled:
        records = _load_records(args.input) if args.input else bundled_fields()
        rows, ok = [], True
        for rec in records:
            r = verify_short_sum(rec, table, args.x, policy)
            ok &= r.passed
            rows.append({"label": r.label, "x": _real(r.x), "log_kappa": _real(r.log_kappa),
                         "sigma": _real(r.sigma), "deviation": _real(r.deviation),
                         "bound": _real(r.bound), "margin": _real(r.margin), "pass": str(r.passed).lower()})
        _emit(args, rows, ["label", "x", "log_kappa", "sigma", "deviation", "bound", "margin", "pass"])
        return _check(ok)
    if not args.poly:
        raise UsageError("sigma needs --poly, --input or --bundled")
    f = DefiningPolynomial.parse(args.poly)
    bad = BadPrimeDecomposition.parse_list(args.bad)
    value = sigma(f, bad, table, args.x, policy)
    row = {"x": _real(args.x), "sigma": _real(value), "upper": "", "lower": ""}
    if args.x >= math.e:
        row["upper"] = _real(B.sigma_upper_bound(args.x, f.degree))
    if args.x >= 59:
        row["lower"] = _real(B.sigma_lower_bound(args.x, f.degree))
    _emit(args, [row], list(row))
    return 0


def cmd_bounds(args) -> int:
    n, D = args.degree, abs(args.disc)
    iv = _policy(args).interval
    row = {
        "degree": n,
        "abs_disc": D,
        "const": _real(args.const),
        "upper": _real(B.theorem_upper(n, D, args.const, interval=iv)),
        "lower": _real(B.theorem_lower(n, D, args.const, interval=iv)),
    }
    row.update({k: _real(v) for k, v in B.comparison_bounds(n, D).items()})
    _emit(args, [row], list(row))
    return 0


def cmd_min_const(args) -> int:
    rows = []
    if args.input:
        policy = _policy(args)
        for rec in _load_records(args.input):
            kappa = float(residue(rec, policy).mid) if policy.interval else residue(rec, policy)
            rows.append(_min_const_row(rec.label, kappa, rec.n_K, rec.abs_disc))
    else:
        if None in (args.kappa, args.degree, args.disc):
            raise UsageError("min-const needs --kappa, --degree and --disc, or --input")
        rows.append(_min_const_row("", args.kappa, args.degree, abs(args.disc)))
    _emit(args, rows, ["label", "kappa", "degree", "abs_disc", "c_min_upper", "c_min_lower"])
    return 0


def _min_const_row(label, kappa, n, D):
    return {
        "label": label,
        "kappa": _real(kappa),
        "degree": n,
        "abs_disc": D,
        "c_min_upper": _real(B.min_constant_upper(kappa, n, D, strict=False)),
        "c_min_lower": _real(B.min_constant_lower(kappa, n, D, strict=False)),
    }


def cmd_verify_lemmas(args) -> int:
    limit = args.limit or 10**7
    table = sieve(limit)
    reports = verify_lemmas(table, _policy(args), grid_points=args.grid_points, n_range=range(2, args.n_max + 1))
    rows = [r.row() for r in reports]
    _emit(args, rows, list(rows[0]))
    for r in reports:
        print(f"{r.name}: {'pass' if r.passed else 'FAIL'} ({r.violations} violations, "
              f"min margin {r.min_margin:.3e} at x = {r.argmin:.6g})", file=sys.stderr)
    return _check(all(r.passed for r in reports))


def cmd_verify_fields(args) -> int:
    records = []
    if args.input:
        records += _load_records(args.input, args.input_format)
    if args.bundled:
        records += bundled_fields()
    if args.quadratic:
        from .quadratic import quadratic_records

        records += quadratic_records(args.quadratic, with_poly=False)
    if not args.input and not args.bundled and not args.quadratic:
        raise UsageError("verify-fields needs --input, --bundled or --quadratic")
    summary = run_corpus(records, options=CorpusOptions(policy=_policy(args), threads=args.threads))
    out = _open_out(args)
    try:
        write_reports(summary.reports, out, args.format)
    finally:
        if out is not sys.stdout:
            out.close()
    sys.stderr.write(summary.digest())
    return _check(summary.passed)


def cmd_report(args) -> int:
    fmt = "jsonl" if args.input.endswith(".jsonl") else "csv"
    with open(args.input, "rb") as fh:
        reports = read_reports(fh.read(), fmt)
    checked = [r for r in reports if r.pass_upper is not None]
    failing = [r.label for r in checked if not (r.pass_upper and r.pass_lower)]
    positive = [r.label for r in reports if r.c_min_upper > 0 or r.c_min_lower > 0]
    rows = [{
        "fields": len(reports),
        "checked": len(checked),
        "failing": len(failing),
        "max_c_min_upper": _real(max((r.c_min_upper for r in checked), default=math.nan)),
        "max_c_min_lower": _real(max((r.c_min_lower for r in checked), default=math.nan)),
        "positive_c_min": ";".join(positive),
    }]
    _emit(args, rows, list(rows[0]))
    return _check(not failing)


COMMANDS = {
    "psi": cmd_psi,
    "mertens": cmd_mertens,
    "zeta-product": cmd_zeta_product,
    "sigma": cmd_sigma,
    "bounds": cmd_bounds,
    "min-const": cmd_min_const,
    "verify-lemmas": cmd_verify_lemmas,
    "verify-fields": cmd_verify_fields,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"residue-bounds: error: {exc}", file=sys.stderr)
        return 2
    except BadPrimeError as exc:
        print(f"residue-bounds: {exc}", file=sys.stderr)
        return 2
    except (ResidueBoundsError, OSError, ValueError) as exc:
        print(f"residue-bounds: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
