"""Command-line interface.

    satake compute [--dataset F] [--form GLOB] [--prime LIST] [--json|--csv] [--tol X]
    satake krieg --n N --k K --p P
    satake verify-rp --dataset F [--tol X]
    satake selftest

Exit codes: 0 success, 1 computation failure, 2 dataset/parse error.
The environment variable SATAKE_PRECISION_BITS selects the working
precision (default: double).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .datasets import DatasetError, ParseError, resolve_dataset
from .krieg import DomainError, omega_matrix
from .numerics import context_from_env
from .pipeline import (ResultRow, Tolerances, csv_header, exit_status,
                       row_to_csv, row_to_dict, run_compute)

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_DATA = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satake",
        description="Satake p-parameters of Siegel modular Hecke eigenforms")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="compute parameters for dataset records")
    compute.add_argument("--dataset", default=None,
                         help="dataset JSON path or bundled name "
                              "(skoruppa_genus2, schottky_genus4); "
                              "default: both bundled datasets")
    compute.add_argument("--form", default=None, help="label glob, e.g. Y20 or 'Y2*'")
    compute.add_argument("--prime", default=None,
                         help="comma-separated primes, e.g. 2,3,5")
    fmt = compute.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output, fixed column order")
    compute.add_argument("--tol", type=float, default=None,
                         help="residual certification threshold (default 1e-8)")
    compute.add_argument("--convention", default="published-tables",
                         choices=("published-tables", "spherical-map"),
                         help="genus-2 aggregate translation (default: published-tables)")

    krieg = sub.add_parser("krieg", help="print the exact coefficient matrix")
    krieg.add_argument("--n", type=int, required=True)
    krieg.add_argument("--k", type=int, required=True)
    krieg.add_argument("--p", type=int, required=True)

    verify = sub.add_parser("verify-rp", help="unimodularity verdicts for a dataset")
    verify.add_argument("--dataset", required=True)
    verify.add_argument("--tol", type=float, default=None,
                        help="unimodularity tolerance (default 1e-6)")
    verify.add_argument("--convention", default="published-tables",
                        choices=("published-tables", "spherical-map"))

    sub.add_parser("selftest", help="run the symbolic golden checks")
    return parser


def _parse_primes(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise DatasetError(f"bad --prime list {text!r}: {exc}") from exc


def _print_rows(rows: list[ResultRow], genus: int, as_json: bool, as_csv: bool) -> None:
    if as_json:
        print(json.dumps({"rows": [row_to_dict(r) for r in rows]}, indent=2, sort_keys=True))
        return
    if as_csv:
        print(csv_header(genus))
        for row in rows:
            print(row_to_csv(row, genus))
        return
    for row in rows:
        head = f"{row.label} p={row.p}"
        if row.excluded:
            print(f"{head}: excluded ({row.note})")
            continue
        if row.error:
            print(f"{head}: ERROR {row.error}")
            continue
        sat = row.satake
        alphas = "  ".join(f"{z.real:+.6f}{z.imag:+.6f}i" for z in sat.alpha[1:])
        print(f"{head}: {alphas}")
        print(f"    alpha0 = {sat.alpha0.real:+.6f}{sat.alpha0.imag:+.6f}i  "
              f"residual = {sat.residual:.2e}  verdict = {row.verdict} "
              f"(max ||a|-1| = {row.max_deviation:.2e})")


def _cmd_compute(args) -> int:
    tol = Tolerances() if args.tol is None else Tolerances(residual_certify=args.tol)
    names = [args.dataset] if args.dataset else ["skoruppa_genus2", "schottky_genus4"]
    status = EXIT_OK
    for name in names:
        dataset = resolve_dataset(name)
        rows = run_compute(dataset, form=args.form, primes=_parse_primes(args.prime),
                           tolerances=tol, ctx=context_from_env(),
                           genus2_convention=args.convention)
        _print_rows(rows, dataset.genus, args.json, args.csv)
        status = max(status, exit_status(rows, tol))
    return status


def _cmd_krieg(args) -> int:
    matrix = omega_matrix(args.n, args.k, args.p)
    width = max(len(str(matrix.entry(i, j))) for i in range(args.n + 1)
                for j in range(args.n + 1))
    for i in range(args.n + 1):
        print("  ".join(str(matrix.entry(i, j)).rjust(width) for j in range(args.n + 1)))
    return EXIT_OK


def _cmd_verify_rp(args) -> int:
    tol = Tolerances() if args.tol is None else Tolerances(rp=args.tol)
    dataset = resolve_dataset(args.dataset)
    rows = run_compute(dataset, tolerances=tol, ctx=context_from_env(),
                       genus2_convention=args.convention)
    for row in rows:
        if row.excluded:
            print(f"{row.label} p={row.p}: excluded")
        elif row.error:
            print(f"{row.label} p={row.p}: ERROR {row.error}")
        else:
            print(f"{row.label} p={row.p}: {row.verdict} (max deviation {row.max_deviation:.3e})")
    return exit_status(rows, tol)


def _selftest() -> int:
    """Exact symbolic golden checks; prints one line per check."""
    from fractions import Fraction as F

    from .eliminate import symbolic_elimination
    from .hecke import build_system
    from .krieg import b_vector, c_coeff, spherical_image_t0p
    from .polynomials import MultiPoly, sym_sum, wn_symmetrize

    failures = 0

    def check(name: str, ok: bool):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1

    sym2 = symbolic_elimination(2)
    # P2 = x^4 - c2 x^3 + (2 + c1) x^2 - c2 x + 1, coefficients in (c1, c2)
    expect2 = [
        MultiPoly(2, {(0, 0): F(1)}),
        MultiPoly(2, {(0, 1): F(-1)}),
        MultiPoly(2, {(0, 0): F(2), (1, 0): F(1)}),
        MultiPoly(2, {(0, 1): F(-1)}),
        MultiPoly(2, {(0, 0): F(1)}),
    ]
    check("quartic elimination polynomial (2 variables)", list(sym2.p_coeffs) == expect2)

    sym3 = symbolic_elimination(3)
    expect3 = [
        MultiPoly(3, {(0, 0, 0): F(-1)}),
        MultiPoly(3, {(0, 0, 1): F(1)}),
        MultiPoly(3, {(0, 1, 0): F(-1), (0, 0, 0): F(-3)}),
        MultiPoly(3, {(0, 0, 1): F(2), (1, 0, 0): F(1)}),
        MultiPoly(3, {(0, 1, 0): F(-1), (0, 0, 0): F(-3)}),
        MultiPoly(3, {(0, 0, 1): F(1)}),
        MultiPoly(3, {(0, 0, 0): F(-1)}),
    ]
    check("sextic elimination polynomial (3 variables)", list(sym3.p_coeffs) == expect3)

    ok = True
    for n in range(1, 5):
        for j in range(n + 1):
            lhs = wn_symmetrize(n, 2, b_vector(n, j))
            rhs = MultiPoly.zero(n + 1)
            for t in range(0, n - j + 1):
                rhs = rhs + sym_sum(n, t, j, nvars=n + 1, offset=1).mul_monomial((2,) + (0,) * n)
            ok = ok and lhs == rhs
    check("orbit sums split into symmetric sums (n <= 4)", ok)

    ok = True
    for n in range(1, 5):
        lhs = spherical_image_t0p(n) * spherical_image_t0p(n)
        rhs = MultiPoly.zero(n + 1)
        for i in range(n + 1):
            rhs = rhs + wn_symmetrize(n, 2, b_vector(n, i)).scale(2 ** i)
        ok = ok and lhs == rhs
    check("square identity for the similitude-p generator (n <= 4)", ok)

    ok = True
    for p in (2, 3, 5):
        colsums = [sum(c_coeff(i, j, p) for i in range(j + 1)) for j in range(3)]
        ok = ok and colsums == [F(1), F(1), F(2 * p - 1, p)]
    check("genus-2 aggregate expansion coefficients", ok)

    f1 = build_system((F(3),), 1).polys[0]
    check("one-variable system is the quadratic x^2 - c x + 1",
          f1 == MultiPoly(1, {(2,): F(1), (0,): F(1), (1,): F(-3)}))
    print("selftest:", "all checks passed" if failures == 0 else f"{failures} check(s) FAILED")
    return EXIT_OK if failures == 0 else EXIT_COMPUTE


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return _cmd_compute(args)
        if args.command == "krieg":
            return _cmd_krieg(args)
        if args.command == "verify-rp":
            return _cmd_verify_rp(args)
        if args.command == "selftest":
            return _selftest()
    except (DatasetError, ParseError) as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
