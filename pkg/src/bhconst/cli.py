"""Command-line interface: ``bhconst <command> [options]``.

Commands
--------
constants     m, value, argmin_k for one strategy (default: exhaustive search)
compare       m, C_m, P_m, C_m - P_m, improved flag, argmin / standard split
closed-forms  n, every bound family, and the tightest one
gap           lower bounds on C_M - P_M for M = base * 2**d
verify        Bohnenblust-Hille ratios of explicit forms against the bounds
report        every reproduction check, one line each; exit 1 if any fails

Output formats: markdown (default), csv, jsonl.  Upper bounds are rounded
up and lower bounds down at the displayed decimal.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .cache import cache_load, cache_store, default_cache_dir, default_cache_name
from .closed_forms import bound_families, pointwise_min
from .errors import BHError, CacheError
from .numerics import DEFAULT_DIGITS, MIN_DIGITS, Field
from .recursive import ConstantTable, Strategy, build_table
from .search import (
    doubling_gap,
    exhaustive_engine,
    half_range_losses,
    improvement_report,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CACHE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# output

def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps({c: r.get(c) for c in columns}) + "\n" for r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    cell = lambda v: "" if v is None else str(v)  # noqa: E731
    lines = ["| " + " | ".join(columns) + " |", "|" + "|".join("---" for _ in columns) + "|"]
    lines += ["| " + " | ".join(cell(r.get(c)) for c in columns) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _emit(args, rows, columns):
    text = render(rows, columns, args.format)
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# ---------------------------------------------------------------------------
# commands

def _cache_path(args, field, strategy) -> Path | None:
    if args.cache:
        return Path(args.cache)
    d = default_cache_dir()
    if d is None:
        return None
    return d / default_cache_name(field, strategy, args.digits, args.p0, args.k0)


def _constants_table(args, field: Field, strategy: Strategy) -> ConstantTable:
    path = _cache_path(args, field, strategy)
    cached = None
    if path is not None and path.exists():
        cached = cache_load(path, digits=args.digits, field=field, strategy=strategy)
        if cached.p0_mode != args.p0 or cached.k0 != args.k0:
            raise CacheError(f"{path} was built with p0={cached.p0_mode}, k0={cached.k0}")
        if all(m in cached for m in range(1, args.max + 1)):
            return cached
        if cached.digits != args.digits:
            raise CacheError(f"{path} holds {cached.digits}-digit values; extending it at "
                             f"{args.digits} digits would mix precisions (use --digits {cached.digits})")
        if strategy is Strategy.EXHAUSTIVE:
            exhaustive_engine(field, args.digits, args.p0).seed_from(cached)
    table = build_table(strategy, field, args.max, args.digits, args.k0, args.p0)
    if path is not None:
        if cached is not None:
            table.created = cached.created
        cache_store(table, path)
    return table


def cmd_constants(args) -> int:
    field = Field.parse(args.field)
    strategy = Strategy(args.strategy)
    if strategy is Strategy.JSEQ and args.k0 is None:
        raise _Usage("--strategy jseq needs --k0")
    table = _constants_table(args, field, strategy)
    places = args.places if args.places is not None else args.digits
    rows = [{"m": m, "value": table.entries[m].upper(places), "argmin_k": table.argmin.get(m)}
            for m in range(args.min, args.max + 1)]
    _emit(args, rows, ["m", "value", "argmin_k"])
    if strategy is Strategy.EXHAUSTIVE and args.max >= 2:
        rs = improvement_report(args.max, field, args.digits, args.p0)
        improved = [r.m for r in rs if r.improved]
        _note(f"improved-count: {len(improved)}")
        if improved:
            _note(f"first-improved: {improved[0]}")
    if args.full_range_k:
        losses = half_range_losses(args.max, field, args.digits, args.p0)
        _note(f"half-range-losses: {len(losses)}")
        for loss in losses:
            _note(f"  m={loss.m} k={loss.k} margin={loss.margin.lower_sig(6)}")
    return EXIT_OK


def cmd_compare(args) -> int:
    field = Field.parse(args.field)
    places = args.places if args.places is not None else 6
    rs = improvement_report(args.max, field, args.digits, args.p0)
    rows = [{
        "m": r.m,
        "C_m": r.c_value.lower(places),
        "P_m": r.p_value.upper(places),
        "C_m-P_m": r.difference.lower_sig(6) if r.improved else "0",
        "improved": r.improved,
        "argmin_k": r.argmin_k,
        "standard_k": r.standard_k,
    } for r in rs if r.m >= args.min]
    _emit(args, rows, ["m", "C_m", "P_m", "C_m-P_m", "improved", "argmin_k", "standard_k"])
    _note(f"improved-count: {sum(r.improved for r in rs if r.m >= args.min)}")
    return EXIT_OK


def cmd_closed_forms(args) -> int:
    field = Field.parse(args.field)
    places = args.places if args.places is not None else 6
    k0s = tuple(args.k0s or (4,))
    fams = bound_families(field, args.digits, k0s, args.p0)
    columns = ["n"] + [f.label for f in fams] + ["best", "best_family"]
    rows = []
    for n in range(max(args.min, 2), args.max + 1):
        row = {"n": n}
        for fam in fams:
            if fam.applies(n):
                v = fam.evaluate(n)
                row[fam.label] = v.upper(places) if fam.upper else v.lower(places)
        best, v = pointwise_min(n, fams)
        row["best"] = v.upper(places)
        row["best_family"] = best.label
        rows.append(row)
    _emit(args, rows, columns)
    return EXIT_OK


def cmd_gap(args) -> int:
    rows = []
    for d in args.doublings:
        g = doubling_gap(args.base, d, args.digits, args.p0)
        rows.append({"base": args.base, "doublings": d, "M": f"{args.base}*2^{d}",
                     "gap_lower_bound": g.lower_sig(args.sig)})
    _emit(args, rows, ["base", "doublings", "M", "gap_lower_bound"])
    return EXIT_OK


def cmd_verify(args) -> int:
    import numpy as np

    from .verifier import MultilinearForm, bh_ratio, read_form
    from .verifier.norms import RNG_NAME

    forms = [(str(p), read_form(p)) for p in args.forms]
    if args.random:
        rng = np.random.Generator(np.random.PCG64(args.seed))
        field = Field.parse(args.field)
        for i in range(args.random):
            forms.append((f"random[{i}]", MultilinearForm.random(args.arity, args.dim, rng, field)))
    if not forms:
        raise _Usage("verify needs form files or --random COUNT")
    places = args.places if args.places is not None else 12
    rows, failed = [], False
    fam_cache: dict[Field, list] = {}
    for name, form in forms:
        r = bh_ratio(form, args.digits, args.samples, args.seed)
        fams = fam_cache.setdefault(form.field, bound_families(form.field, args.digits, (), args.p0))
        fam, bound = pointwise_min(max(form.n, 2), fams) if form.n >= 2 else (None, None)
        ok = True if bound is None else r.value.value <= bound.value
        failed |= r.exact and not ok
        rows.append({
            "form": name, "n": form.n, "N": form.N, "field": str(form.field),
            "lhs": r.lhs.upper(places), "sup": r.sup.value.lower(places), "sup_exact": r.sup.exact,
            "ratio": r.value.upper(places),
            "bound": None if bound is None else bound.upper(places),
            "bound_family": None if fam is None else fam.label,
            "ok": ok,
        })
    _emit(args, rows, ["form", "n", "N", "field", "lhs", "sup", "sup_exact", "ratio",
                       "bound", "bound_family", "ok"])
    _note(f"rng: {RNG_NAME} seed={args.seed} samples={args.samples}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_report(args) -> int:
    from .reproduce import run_all

    checks = run_all(args.digits)
    rows = [{"criterion": c.criterion, "check": c.name, "result": "PASS" if c.passed else "FAIL",
             "detail": c.detail} for c in checks]
    _emit(args, rows, ["criterion", "check", "result", "detail"])
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser

class _Usage(Exception):
    pass


def _digits(s: str) -> int:
    v = int(s)
    if v < MIN_DIGITS:
        raise argparse.ArgumentTypeError(f"digits must be >= {MIN_DIGITS}")
    return v


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=_digits, default=DEFAULT_DIGITS,
                        help="significant decimal digits (default %(default)s)")
    common.add_argument("--format", choices=["markdown", "csv", "jsonl"], default="markdown")
    common.add_argument("--p0", choices=["exact", "paper"], default="exact",
                        help="Khinchine branch threshold: computed p0 or the fixed 1.846999")
    common.add_argument("--places", type=int, default=None, help="decimals shown per value")
    common.add_argument("-o", "--output", default=None, help="write the table to a file")

    fieldopt = argparse.ArgumentParser(add_help=False)
    fieldopt.add_argument("--field", choices=["real", "complex"], default="real")

    rng = argparse.ArgumentParser(add_help=False)
    rng.add_argument("--min", type=_positive, default=None)
    rng.add_argument("--max", type=_positive, default=500)

    p = argparse.ArgumentParser(prog="bhconst", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"bhconst {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", parents=[common, fieldopt, rng], help="constant table")
    c.add_argument("--strategy", choices=[s.value for s in Strategy], default="exhaustive")
    c.add_argument("--k0", type=_positive, default=None, help="cutoff exponent for --strategy jseq")
    c.add_argument("--cache", default=None, help="JSON-lines cache file (default: $BHCONST_CACHE_DIR)")
    c.add_argument("--full-range-k", action="store_true",
                   help="also scan k > m/2 and report where it would beat the half range")
    c.set_defaults(func=cmd_constants, min_default=1)

    c = sub.add_parser("compare", parents=[common, fieldopt, rng], help="C_m versus P_m")
    c.set_defaults(func=cmd_compare, min_default=2)

    c = sub.add_parser("closed-forms", parents=[common, fieldopt, rng], help="all bound families")
    c.add_argument("--k0", dest="k0s", type=_positive, action="append",
                   help="large-n cutoff exponent (repeatable, default 4)")
    c.set_defaults(func=cmd_closed_forms, min_default=2, max_default=64)

    c = sub.add_parser("gap", parents=[common], help="doubling gap lower bounds")
    c.add_argument("--base", type=_positive, default=26)
    c.add_argument("--doublings", type=int, nargs="+", default=[50, 100, 150])
    c.add_argument("--sig", type=_positive, default=6, help="significant digits shown")
    c.set_defaults(func=cmd_gap)

    c = sub.add_parser("verify", parents=[common, fieldopt], help="check explicit forms")
    c.add_argument("forms", nargs="*", help="form files: header 'n N field' then N^n scalars")
    c.add_argument("--random", type=int, default=0, metavar="COUNT", help="also test COUNT random forms")
    c.add_argument("--arity", type=_positive, default=2)
    c.add_argument("--dim", type=_positive, default=2)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=_positive, default=64)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("report", parents=[common], help="run every reproduction check")
    c.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "min") and args.min is None:
        args.min = args.min_default
    if getattr(args, "max_default", None) is not None and "--max" not in (argv or sys.argv[1:]):
        args.max = args.max_default
    if hasattr(args, "min") and args.min > args.max:
        parser.error("--min must not exceed --max")
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        _note(f"bhconst: error: {exc}")
        return EXIT_USAGE
    except CacheError as exc:
        _note(f"bhconst: cache error: {exc}")
        return EXIT_CACHE
    except BHError as exc:
        _note(f"bhconst: error: {exc}")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
