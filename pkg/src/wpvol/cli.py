"""Command-line front end: correlators, volumes, series, verification, growth fits.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
All output is deterministic: identical invocations print identical bytes,
whatever the state of the optional correlator cache.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .asympt import fit_growth, predicted_growth_constant
from .genexp import (
    CheckReport,
    GenusExpansionContext,
    build_f,
    build_phi0,
    build_phi_g,
    check_derivative_formula,
    induction_sides,
    lemma_report,
    theorem_reports,
)
from .kappavol import enumerate_multiindices, volume, volume_table, wp_volume_display
from .qseries import factorial, format_rational
from .taucalc import CacheFormatError, MemoStore, TauCalculator, load_cache, save_cache

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

SUITES = ("lemma", "theorem1", "derivative", "induction", "all")


class UsageError(Exception):
    pass


def _parse_indices(text: str) -> List[int]:
    text = text.strip()
    if text in ("", "-"):
        return []
    try:
        ds = [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"--ds expects comma-separated integers, got {text!r}") from None
    if any(d < 0 for d in ds):
        raise UsageError("tau indices must be >= 0")
    return ds


def _add_cache_option(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--cache", metavar="PATH",
                     help="load the correlator memo from PATH if present and save it back after the run")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpvol",
        description="Exact Weil-Petersson volumes of moduli spaces and their "
                    "generating series, verified two independent ways.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tau = sub.add_parser("tau", help="one tau-correlator")
    p_tau.add_argument("--genus", type=int, required=True)
    p_tau.add_argument("--ds", required=True,
                       help="comma-separated tau indices, '-' for none")
    p_tau.add_argument("--format", choices=("plain", "json"), default="plain")
    _add_cache_option(p_tau)
    p_tau.set_defaults(handler=_cmd_tau)

    p_vol = sub.add_parser("volume", help="V_{g,n} records")
    p_vol.add_argument("--genus", type=int, required=True)
    p_vol.add_argument("--n", type=int)
    p_vol.add_argument("--table", type=int, metavar="N_MAX",
                       help="print records for n = 0..N_MAX instead of a single n")
    p_vol.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    p_vol.add_argument("--digits", type=int,
                       help="also render v * pi^(2 dim) to this many significant digits")
    _add_cache_option(p_vol)
    p_vol.set_defaults(handler=_cmd_volume)

    p_ser = sub.add_parser("series", help="generating series phi_g")
    p_ser.add_argument("--phi", type=int, required=True, metavar="G")
    p_ser.add_argument("--order", type=int, required=True)
    p_ser.add_argument("--format", choices=("plain", "json"), default="json")
    _add_cache_option(p_ser)
    p_ser.set_defaults(handler=_cmd_series)

    p_ver = sub.add_parser("verify", help="run the exact verification suites")
    p_ver.add_argument("--suite", choices=SUITES, required=True)
    p_ver.add_argument("--genus", type=int, required=True)
    p_ver.add_argument("--order", type=int, required=True)
    _add_cache_option(p_ver)
    p_ver.set_defaults(handler=_cmd_verify)

    p_asy = sub.add_parser("asympt", help="growth-law fit against the Bessel prediction")
    p_asy.add_argument("--genus", type=int, required=True)
    p_asy.add_argument("--n-max", type=int, required=True)
    p_asy.add_argument("--n-min", type=int,
                       help="lower end of the fit window (default: n_max // 2)")
    _add_cache_option(p_asy)
    p_asy.set_defaults(handler=_cmd_asympt)

    return parser


def _cmd_tau(args, calc: TauCalculator) -> int:
    ds = _parse_indices(args.ds)
    value = calc.tau(args.genus, ds)
    if args.format == "json":
        key_ds = sorted(ds, reverse=True)
        print(json.dumps({"g": args.genus, "ds": key_ds, "value": format_rational(value)}))
    else:
        print(format_rational(value))
    return EXIT_OK


def _volume_json(rec, digits, calc):
    data = rec.to_json_dict()
    if digits:
        _, _, rendered = wp_volume_display(rec.g, rec.n, digits, calc)
        data["wp_volume"] = rendered
    return data


def _volume_plain(rec, digits, calc):
    line = (f"g={rec.g} n={rec.n} dim={rec.dim} "
            f"V={format_rational(rec.V)} v={format_rational(rec.v)}")
    if digits:
        _, power, rendered = wp_volume_display(rec.g, rec.n, digits, calc)
        line += f" wp_volume={rendered} (v*pi^{power})"
    return line


def _cmd_volume(args, calc: TauCalculator) -> int:
    if args.n is None and args.table is None:
        raise UsageError("give --n or --table")
    if args.digits is not None and args.digits < 1:
        raise UsageError("--digits must be >= 1")
    if args.table is not None:
        if args.table < 0:
            raise UsageError("--table must be >= 0")
        records = volume_table(args.genus, args.table, calc)
    else:
        records = [volume(args.genus, args.n, calc)]
    if args.format == "csv":
        print("g,n,dim,V,v")
        for rec in records:
            print(rec.csv_row())
    elif args.format == "json":
        payload = [_volume_json(rec, args.digits, calc) for rec in records]
        print(json.dumps(payload if args.table is not None else payload[0]))
    else:
        for rec in records:
            print(_volume_plain(rec, args.digits, calc))
    return EXIT_OK


def _cmd_series(args, calc: TauCalculator) -> int:
    g, order = args.phi, args.order
    if g < 0 or order < 1:
        raise UsageError("--phi needs genus >= 0 and --order >= 1")
    if g == 1:
        raise UsageError("genus 1 has no closed generating series here; "
                         "its volumes stay available through `volume --genus 1`")
    if g == 0:
        phi = build_phi0(max(order, 3)).truncate(order)
    else:
        ctx = GenusExpansionContext(order=order, i_max=3 * g - 2)
        phi = build_phi_g(g, ctx, calc)
    if args.format == "plain":
        for k, coeff in enumerate(phi.coeffs):
            print(f"x^{k}: {format_rational(coeff)}")
    else:
        print(json.dumps(phi.to_json_dict()))
    return EXIT_OK


def _verify_reports(suite: str, g: int, order: int, calc: TauCalculator) -> List[CheckReport]:
    if g < 2:
        raise UsageError("verification suites need --genus >= 2")
    if order < 1:
        raise UsageError("--order must be >= 1")
    lemma_top = 3 * g - 2 + 4
    ctx = GenusExpansionContext(order=order, i_max=max(lemma_top, 10))
    reports: List[CheckReport] = []
    if suite in ("lemma", "all"):
        for i in range(2, lemma_top + 1):
            reports.append(lemma_report(i, ctx))
        for i in range(2, 11):
            expected = Fraction((-1) ** i, factorial(i - 1))
            actual = build_f(i, ctx)[0]
            mm = None if actual == expected else (0, actual, expected)
            reports.append(CheckReport("f_value_at_zero", mm is None, i=i, mismatch=mm))
    if suite in ("theorem1", "all"):
        reports.extend(theorem_reports(g, order, ctx, calc))
    if suite in ("derivative", "all"):
        for n in range(0, min(4, order) + 1):
            reports.append(check_derivative_formula(g, n, ctx, calc))
    if suite in ("induction", "all"):
        for n in range(1, min(4, order) + 1):
            for l in enumerate_multiindices(3 * g - 3 + n, 3 * g - 2 + n):
                lhs, rhs = induction_sides(g, n, l, calc)
                mm = None if lhs == rhs else (None, lhs, rhs)
                reports.append(CheckReport("index_shift_identity", lhs == rhs, g=g, n=n,
                                           mismatch=mm, detail={"l": l.to_json_dict()}))
    return reports


def _cmd_verify(args, calc: TauCalculator) -> int:
    reports = _verify_reports(args.suite, args.genus, args.order, calc)
    all_passed = True
    for report in reports:
        print(json.dumps(report.to_json_dict()))
        all_passed = all_passed and report.passed
    return EXIT_OK if all_passed else EXIT_VERIFY_FAILED


def _cmd_asympt(args, calc: TauCalculator) -> int:
    n_max = args.n_max
    n_min = args.n_min if args.n_min is not None else n_max // 2
    fit = fit_growth(args.genus, n_min, n_max, calc)
    print(json.dumps(fit.to_json_dict(predicted_growth_constant())))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    cache_path = getattr(args, "cache", None)
    if cache_path and os.path.exists(cache_path):
        try:
            store = load_cache(cache_path)
        except (OSError, CacheFormatError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        store = MemoStore(path=cache_path)
    calc = TauCalculator(store)

    try:
        code = args.handler(args, calc)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if cache_path:
        try:
            save_cache(calc.store, cache_path)
        except OSError as exc:
            print(f"error: saving cache failed: {exc}", file=sys.stderr)
            return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
