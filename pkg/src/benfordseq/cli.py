"""Command-line interface: analyze | simulate | bases | pisot | primes.

All subcommands emit one machine-readable JSON report (CSV for bulk
tables with --format csv).  Rational inputs are parsed exactly: 'p/q'
or decimal strings become Fractions with power-of-ten denominators;
floats are never parsed approximately.  In reports, exact rationals are
serialized as strings 'p/q' and floats as JSON numbers.

Exit codes: 0 verdict produced (including INCONCLUSIVE), 2 input error,
3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import re
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .basescope import BaseScopeError
from .classify import Rule, ScopeKind, Verdict, classify
from .companion import BoolMatrix, companion, imprimitivity_index, is_irreducible, is_primitive
from .engine import (
    NegativeTermError,
    benford_stats,
    cdf_rows,
    digit_histogram_rows,
    generate_log_stream,
    stream_cross_check,
    subsequence_stream,
    write_csv,
)
from .pisot import pisot_csv_rows, pisot_growth_scan
from .polynomials import poly_text
from .primes import SieveBudgetError, prime_csv_rows, prime_subsequence
from .recurrences import (
    ParseError,
    Recurrence,
    char_poly,
    format_recurrence,
    gcd_index,
    index_set,
    parse_rational,
    parse_recurrence,
    validate_recurrence,
)
from .spectral import SpectralError, all_roots, dominance_check, dominant_root, resolve_precision

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------


def _parse_rational_list(text: str, what: str) -> tuple:
    values = []
    col = 1
    for tok in text.split(","):
        stripped = tok.strip()
        try:
            values.append(parse_rational(stripped))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"invalid rational {stripped!r} in --{what}", 1, col) from None
        col += len(tok) + 1
    return tuple(values)


def _load_recurrence(args) -> Recurrence:
    if getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            data = json.loads(text)
            return validate_recurrence(
                [parse_rational(str(c)) for c in data["coeffs"]],
                [parse_rational(str(a)) for a in data["initials"]],
            )
        return parse_recurrence(text)
    if not args.coeffs or not args.init:
        raise ParseError("provide --coeffs and --init, or --file", 1, 1)
    return validate_recurrence(
        _parse_rational_list(args.coeffs, "coeffs"),
        _parse_rational_list(args.init, "init"),
    )


_TERM_RE = re.compile(r"^([+-]?\d*)n(?:\^(\d+))?$")
_CONST_RE = re.compile(r"^([+-]?\d+)$")


def parse_index_poly(text: str) -> list:
    """Integer polynomial in n, e.g. 'n^2+1', '2n+1', '3*n^3 - n + 4'.

    Returns coefficients lowest degree first.
    """
    s = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not s:
        raise ParseError("empty index polynomial", 1, 1)
    terms = re.findall(r"[+-]?[^+-]+", s)
    coeffs: dict = {}
    for term in terms:
        m = _TERM_RE.match(term)
        if m:
            raw, power = m.group(1), int(m.group(2) or 1)
            c = 1 if raw in ("", "+") else -1 if raw == "-" else int(raw)
        else:
            m = _CONST_RE.match(term)
            if not m:
                raise ParseError(f"cannot parse index-poly term {term!r}", 1, text.find(term) + 1)
            c, power = int(m.group(1)), 0
        coeffs[power] = coeffs.get(power, 0) + c
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


# ---------------------------------------------------------------------------
# Report building
# ---------------------------------------------------------------------------


def _rat(x: Fraction) -> str:
    return str(x)


def _recurrence_section(rec: Recurrence) -> dict:
    return {
        "order": rec.order,
        "coeffs": [_rat(c) for c in rec.coeffs],
        "initials": [_rat(a) for a in rec.initials],
        "flags": {
            "all_coeffs_nonnegative": rec.all_coeffs_nonnegative,
            "c0_positive": rec.c0_positive,
            "all_initials_positive": rec.all_initials_positive,
        },
        "text_record": format_recurrence(rec),
    }


def _structure_section(rec: Recurrence) -> dict:
    bm = BoolMatrix.from_companion(companion(rec))
    irred = is_irreducible(bm)
    prim = is_primitive(bm) if irred else None
    h = imprimitivity_index(bm) if irred else None
    return {
        "irreducible": irred,
        "primitive": prim,
        "imprimitivity_index": h,
        "pattern_level_only": not (rec.all_coeffs_nonnegative and rec.c0_positive),
    }


def _spectral_section(rec: Recurrence, verdict: Optional[Verdict], precision) -> dict:
    p = char_poly(rec)
    roots = all_roots(p, precision=precision)
    interval = None
    if rec.all_coeffs_nonnegative and rec.c0_positive:
        interval = dominant_root(p)
    elif verdict is not None and verdict.rho is not None and verdict.classes is None:
        interval = verdict.rho  # condition-2 bracket (split verdicts carry rho_q)
    section = {
        "roots": [
            {"re": z.real, "im": z.imag, "radius": r} for z, r in roots
        ],
        "rho": None,
        "dominance": None,
        "h_spectral": None,
    }
    if interval is not None:
        h_struct = None
        if rec.all_coeffs_nonnegative and rec.c0_positive:
            h_struct = gcd_index(index_set(rec))
        profile = dominance_check(p, interval, roots=roots, h_structural=h_struct)
        section["rho"] = {
            "float": interval.value,
            "interval": [_rat(interval.lo), _rat(interval.hi)],
        }
        section["dominance"] = profile.dominance.value
        section["h_spectral"] = profile.h_spectral
        section["h_matches_structure"] = profile.h_matches_structure
    return section


def _verdict_section(verdict: Verdict) -> dict:
    scope = verdict.base_scope
    out = {
        "rule": verdict.rule.value,
        "structural_rule": verdict.structural_rule.value if verdict.structural_rule else None,
        "h": verdict.h,
        "alpha": verdict.alpha,
        "base_scope": {
            "kind": scope.kind.value,
            "base": scope.base,
            "benford": scope.benford,
            "exceptional_bases": list(scope.exceptional),
        },
        "notes": list(verdict.notes) + list(scope.notes),
    }
    if verdict.classes is not None:
        out["subsequence_classes"] = [
            {
                "residue": c.residue,
                "status": c.status.value,
                "alpha": c.alpha,
                "contracted": {
                    "order": c.contracted.order,
                    "coeffs": [_rat(x) for x in c.contracted.coeffs],
                    "initials": [_rat(x) for x in c.contracted.initials],
                },
            }
            for c in verdict.classes
        ]
    else:
        out["subsequence_classes"] = None
    return out


def _stats_section(stats) -> dict:
    return {
        "base": stats.base,
        "N": stats.n_used,
        "first_digit_counts": list(stats.first_digit_counts),
        "first_digit_frequencies": [
            c / stats.n_used for c in stats.first_digit_counts
        ],
        "expected_frequencies": [
            stats.expected_frequency(d) for d in range(1, stats.base)
        ],
        "discrepancy_D_N": stats.discrepancy,
        "digit_max_err": stats.digit_max_err,
    }


def _envelope(command: str, args, settings: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "settings": {
            "precision": args.precision or "double",
            "numeric_convention": {
                "string": "exact rational p/q",
                "number": "IEEE-754 float",
            },
            **settings,
        },
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    rec = _load_recurrence(args)
    t0 = time.perf_counter()
    verdict = classify(rec, b=args.base, max_base=args.max_base, precision=args.precision)
    t1 = time.perf_counter()
    report = _envelope("analyze", args, {"base": args.base, "max_base": args.max_base})
    report["recurrence"] = _recurrence_section(rec)
    p = char_poly(rec)
    report["char_poly"] = {
        "coeffs_low_first": [_rat(c) for c in p.coeffs],
        "text": poly_text(p),
    }
    iset = index_set(rec)
    report["index_set"] = list(iset.members)
    report["gcd"] = gcd_index(iset)
    report["structure"] = _structure_section(rec)
    report["spectral"] = _spectral_section(rec, verdict, args.precision)
    report["verdict"] = _verdict_section(verdict)
    report["empirical"] = None
    try:
        report["cross_check"] = stream_cross_check(rec, args.base or 10)
    except NegativeTermError:
        report["cross_check"] = "NEGATIVE_TERM"
    t2 = time.perf_counter()
    report["timings"] = {"classify_s": t1 - t0, "report_s": t2 - t1}
    return report


def cmd_simulate(args) -> dict:
    rec = _load_recurrence(args)
    b = args.base or 10
    t0 = time.perf_counter()
    if args.index_poly:
        q = parse_index_poly(args.index_poly)
        terms = subsequence_stream(rec, b, q, args.N)
    else:
        terms = generate_log_stream(rec, b, args.N)
    stats = benford_stats(terms, b)
    t1 = time.perf_counter()
    report = _envelope(
        "simulate", args, {"base": b, "N": args.N, "index_poly": args.index_poly}
    )
    report["recurrence"] = _recurrence_section(rec)
    report["empirical"] = _stats_section(stats)
    report["cross_check"] = stream_cross_check(rec, b)
    report["timings"] = {"simulate_s": t1 - t0}
    report["_stats"] = stats  # consumed by the CSV writer, stripped from JSON
    return report


def cmd_bases(args) -> dict:
    rec = _load_recurrence(args)
    t0 = time.perf_counter()
    verdict = classify(rec, b=None, max_base=args.max_base, precision=args.precision)
    t1 = time.perf_counter()
    report = _envelope("bases", args, {"max_base": args.max_base})
    report["recurrence"] = _recurrence_section(rec)
    report["verdict"] = _verdict_section(verdict)
    scope = verdict.base_scope
    import math as _math

    report["base_scope"] = {
        "scope": scope.kind.value,
        "exceptional_bases": list(scope.exceptional),
        "bound_value": _math.sqrt(args.max_base) * _math.log(args.max_base) / _math.log(2),
        "max_base": args.max_base,
    }
    report["timings"] = {"classify_s": t1 - t0}
    return report


def cmd_pisot(args) -> dict:
    t0 = time.perf_counter()
    scan = pisot_growth_scan(args.m, args.kmax)
    t1 = time.perf_counter()
    report = _envelope("pisot", args, {"m": args.m, "kmax": args.kmax})
    report["records"] = [
        {
            "k": r.k,
            "m": r.m,
            "rho": r.rho.value,
            "rho_interval": [_rat(r.rho.lo), _rat(r.rho.hi)],
            "identity_at_m_plus_1": r.identity_at_m_plus_1,
            "identity_at_1": r.identity_at_1,
            "aux_identity": r.aux_identity,
            "bounds": {
                "m_lt_rho": r.bound_m_lt_rho,
                "rho_lt_m_plus_1": r.bound_rho_lt_m1,
                "lower_kk1": r.bound_lower_kk1,
            },
        }
        for r in scan.records
    ]
    report["strictly_increasing"] = scan.strictly_increasing
    report["step_identity"] = scan.step_identity
    report["gap_decreasing"] = scan.gap_decreasing
    report["smallest_k_with_lower_bound"] = scan.smallest_k_with_lower_bound
    report["timings"] = {"scan_s": t1 - t0}
    report["_csv_rows"] = (
        ["k", "m", "rho", "m_lt_rho", "rho_lt_m_plus_1", "lower_kk1"],
        pisot_csv_rows(scan),
    )
    return report


def cmd_primes(args) -> dict:
    t0 = time.perf_counter()
    record = prime_subsequence(args.ell, args.nmax, index_cap=args.index_cap)
    t1 = time.perf_counter()
    report = _envelope("primes", args, {"ell": args.ell, "nmax": args.nmax})
    report["rows"] = [
        {"n": n, "index": idx, "prime": p, "ratio": ratio}
        for (n, idx, p, ratio) in record.rows
    ]
    report["final_ratio_over_ln_ell"] = record.final_ratio / __import__("math").log(args.ell)
    report["sieve_peak_bytes"] = record.usage_peak_bytes
    report["timings"] = {"sieve_s": t1 - t0}
    report["_csv_rows"] = (["n", "index", "prime", "ratio"], prime_csv_rows(record))
    return report


# ---------------------------------------------------------------------------
# Output plumbing
# ---------------------------------------------------------------------------


def _emit(report: dict, args) -> None:
    out = sys.stdout
    close = False
    if args.out:
        out = open(args.out, "w", encoding="utf-8", newline="")
        close = True
    try:
        if args.format == "csv":
            if "_csv_rows" in report:
                header, rows = report["_csv_rows"]
                write_csv(out, header, rows)
            elif "_stats" in report:
                stats = report["_stats"]
                if args.csv_kind == "cdf":
                    write_csv(out, ["t", "empirical_cdf", "log_b_t"], cdf_rows(stats))
                else:
                    write_csv(
                        out, ["digit", "count", "expected"], digit_histogram_rows(stats)
                    )
            else:
                raise ParseError("this subcommand has no CSV form; use --format json", 1, 1)
        else:
            clean = {k: v for k, v in report.items() if not k.startswith("_")}
            json.dump(clean, out, indent=2)
            out.write("\n")
    finally:
        if close:
            out.close()


# Lets argparse accept values like '-3/10,31/10' for --coeffs without
# mistaking them for option flags.
_NEGATIVE_VALUE_RE = re.compile(r"^-\d[\d/.,]*$")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benfordseq",
        description="Benford's-law analysis of linear recurrence sequences",
    )
    parser._negative_number_matcher = _NEGATIVE_VALUE_RE
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_rec=True):
        p._negative_number_matcher = _NEGATIVE_VALUE_RE
        if with_rec:
            p.add_argument("--coeffs", help="comma-separated rationals c_0,...,c_{k-1}")
            p.add_argument("--init", help="comma-separated rationals a_1,...,a_k")
            p.add_argument("--file", help="recurrence file (3-line text record or JSON)")
        p.add_argument("--precision", default=None, help="double | extended | decimal digits")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", help="write the report to FILE instead of stdout")

    p = sub.add_parser("analyze", help="structural + spectral analysis and verdict")
    add_common(p)
    p.add_argument("--base", type=int, default=None)
    p.add_argument("--max-base", type=int, default=100, dest="max_base")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="log-space simulation and Benford statistics")
    add_common(p)
    p.add_argument("--base", type=int, default=10)
    p.add_argument("--N", type=int, default=100_000)
    p.add_argument("--index-poly", default=None, dest="index_poly",
                   help="integer polynomial in n, e.g. 'n^2+1'")
    p.add_argument("--csv-kind", choices=["hist", "cdf"], default="hist", dest="csv_kind")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bases", help="exceptional-base enumeration")
    add_common(p)
    p.add_argument("--max-base", type=int, default=100, dest="max_base")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("pisot", help="dominant-root growth scan of the m-family")
    add_common(p, with_rec=False)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.set_defaults(func=cmd_pisot)

    p = sub.add_parser("primes", help="primes at geometric index spacing")
    add_common(p, with_rec=False)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--index-cap", type=int, default=20_000_000, dest="index_cap")
    p.set_defaults(func=cmd_primes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 2
    try:
        resolve_precision(args.precision)  # validate early
        report = args.func(args)
        _emit(report, args)
        return 0
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (NegativeTermError, SieveBudgetError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (SpectralError, BaseScopeError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
