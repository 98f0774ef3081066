"""Command line: ``eep {eval,moment,sample,simulate,fit}``.

Exit status is 0 on success, 1 when a numerical method fails to converge and
2 for usage, domain or I/O errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .base import ConvergenceError, DomainError
from .distributions import (
    EeParams,
    EepParams,
    ee_cdf,
    ee_pdf,
    eep_cdf,
    eep_hazard,
    eep_pdf,
    eep_quantile,
    eep_sample,
    eep_survival,
)
from .fitting import fit_eep
from .moments import (
    ee_moment,
    ee_moment_gupta_kundu,
    ee_moment_quadrature,
    eep_chf,
    eep_mgf,
    eep_moment,
    eep_moment_double_series,
    eep_moment_quadrature,
)
from .simulator import SystemSpec, run_ks_validation, sample_system_lifetime

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2

FUNCTIONS = ("pdf", "cdf", "survival", "hazard", "quantile", "chf", "mgf")
METHODS = ("series", "double-series", "quadrature", "all")


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if not math.isfinite(v) else format(v, ".17g")
    return str(v)


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(f"not serializable: {type(v).__name__}")


def _json_safe(v):
    # JSON has no inf/nan; encode them as null
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_json_safe(x) for x in v]
    return v


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _emit(doc: dict, records: list[dict], columns: list[str], fmt: str, path: str | None):
    if fmt == "json":
        _write(json.dumps(_json_safe(doc), default=_json_default, indent=2) + "\n", path)
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in records:
        w.writerow([_fmt(r.get(c)) for c in columns])
    _write(buf.getvalue(), path)


def _eep(args) -> EepParams:
    return EepParams(args.alpha, args.beta, args.lam)


# --- eval ------------------------------------------------------------------

def cmd_eval(args) -> int:
    fn = args.fn
    if args.dist == "ee" and fn not in ("pdf", "cdf", "survival"):
        raise UsageError(f"--fn {fn} is only available for --dist eep")
    if fn in ("chf", "mgf"):
        key, grid = "t", args.t
    elif fn == "quantile":
        key, grid = "u", args.u if args.u is not None else args.x
    else:
        key, grid = "x", args.x
    if not grid:
        raise UsageError(f"--fn {fn} needs --{key} values")

    records = []
    if args.dist == "ee":
        p = EeParams(args.alpha, args.beta)
        params = {"alpha": p.alpha, "beta": p.beta}
        for v in grid:
            val = {"pdf": ee_pdf, "cdf": ee_cdf}.get(fn, lambda q, z: 1.0 - ee_cdf(q, z))(p, v)
            records.append({"fn": fn, key: v, "value": float(val)})
    else:
        p = _eep(args)
        params = {"alpha": p.alpha, "beta": p.beta, "lambda": p.lam}
        for v in grid:
            rec = {"fn": fn, key: v}
            if fn == "chf":
                res = eep_chf(p, v, full_output=True).require_converged("chf")
                rec.update(re=res.value.real, im=res.value.imag, error=res.abs_error_estimate)
            elif fn == "mgf":
                res = eep_mgf(p, v, full_output=True).require_converged("mgf")
                rec.update(value=res.value, error=res.abs_error_estimate)
            else:
                f = {"pdf": eep_pdf, "cdf": eep_cdf, "survival": eep_survival,
                     "hazard": eep_hazard, "quantile": eep_quantile}[fn]
                rec["value"] = float(f(p, v))
            records.append(rec)
    columns = [key, "re", "im", "error"] if fn == "chf" else [key, "value"] + (["error"] if fn == "mgf" else [])
    _emit({"dist": args.dist, "params": params, "records": records}, records, columns, args.format, args.out)
    return EXIT_OK


# --- moment ----------------------------------------------------------------

def _moment_records(args) -> list[dict]:
    nu = args.nu
    methods = ("series", "double-series", "quadrature") if args.method == "all" else (args.method,)
    is_int = float(nu).is_integer() and nu >= 1
    if args.method == "double-series" and not is_int:
        raise UsageError("double-series needs a positive integer --nu")
    out = []
    for m in methods:
        if m == "double-series" and not is_int:
            continue
        if args.dist == "ee":
            p = EeParams(args.alpha, args.beta)
            if m == "series":
                res = ee_moment(p, nu, full_output=True)
            elif m == "double-series":
                res = ee_moment_gupta_kundu(p, int(nu), full_output=True)
            else:
                res = ee_moment_quadrature(p, nu)
        else:
            p = _eep(args)
            if m == "series":
                res = eep_moment(p, nu)
            elif m == "double-series":
                res = eep_moment_double_series(p, int(nu), full_output=True)
            else:
                res = eep_moment_quadrature(p, nu)
        res.require_converged(f"{m} moment")
        out.append({"method": m, "value": float(res.value), "error": res.abs_error_estimate,
                    "converged": res.converged})
    return out


def cmd_moment(args) -> int:
    records = _moment_records(args)
    params = {"alpha": args.alpha, "beta": args.beta}
    if args.dist == "eep":
        params["lambda"] = args.lam
    doc = {"dist": args.dist, "params": params, "nu": args.nu, "records": records}
    if len(records) > 1:
        vals = [r["value"] for r in records]
        ref = max(abs(v) for v in vals)
        doc["max_rel_diff"] = (max(vals) - min(vals)) / ref if ref else 0.0
        for r in records:
            r["agreement"] = doc["max_rel_diff"]
    _emit(doc, records, ["method", "value", "error", "converged"] + (["agreement"] if len(records) > 1 else []),
          args.format, args.out)
    return EXIT_OK


# --- sample / simulate -------------------------------------------------------

def _lifetime_csv(values: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("lifetime\n")
    buf.writelines(format(float(v), ".17g") + "\n" for v in values)
    return buf.getvalue()


def _check_n(n: int):
    if n < 1:
        raise UsageError("--n must be at least 1")


def cmd_sample(args) -> int:
    _check_n(args.n)
    batch = eep_sample(_eep(args), args.n, args.seed, args.stream)
    _write(_lifetime_csv(batch.values), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _check_n(args.n)
    if not float(args.alpha).is_integer():
        raise UsageError("simulate needs an integer --alpha (units per block)")
    spec = SystemSpec(int(args.alpha), args.beta, args.lam)
    if args.out is not None:
        _write(_lifetime_csv(sample_system_lifetime(spec, args.seed, args.stream, args.n)), args.out)
    report = run_ks_validation(spec, args.n, args.seed, args.stream)
    doc = report.as_dict()
    doc.update(spec={"units_per_block": spec.units_per_block, "unit_rate": spec.unit_rate,
                     "block_count_rate": spec.block_count_rate}, seed=args.seed, stream=args.stream)
    _write(json.dumps(doc, indent=2) + "\n", args.report)
    return EXIT_OK


# --- fit -----------------------------------------------------------------------

def _read_column(path: str) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    values = []
    for i, row in enumerate(rows):
        if not row or not row[0].strip():
            continue
        try:
            values.append(float(row[0]))
        except ValueError:
            if i == 0:
                continue  # header
            raise UsageError(f"{path}: line {i + 1} is not a number") from None
    return np.asarray(values, dtype=float)


def cmd_fit(args) -> int:
    data = _read_column(args.data)
    if data.size == 0:
        raise UsageError(f"{args.data}: no data")
    given = [args.alpha, args.beta, args.lam]
    if any(v is not None for v in given) and not all(v is not None for v in given):
        raise UsageError("an initial guess needs all of --alpha, --beta, --lambda")
    start = EepParams(*given) if all(v is not None for v in given) else None
    result = fit_eep(data, start)
    _write(json.dumps(result.as_dict(), indent=2) + "\n", args.out)
    if not result.converged:
        print("fit did not converge; best point reported", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _params(sp, required_default=True):
    d = 1.0 if required_default else None
    sp.add_argument("--alpha", type=float, default=d)
    sp.add_argument("--beta", type=float, default=d)
    sp.add_argument("--lambda", dest="lam", type=float, default=d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eep", description="EEP / EE distribution toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate pdf, cdf, survival, hazard, quantile, chf or mgf")
    ev.add_argument("--dist", choices=("eep", "ee"), default="eep")
    ev.add_argument("--fn", choices=FUNCTIONS, required=True)
    _params(ev)
    ev.add_argument("--x", type=float, nargs="+")
    ev.add_argument("--u", type=float, nargs="+")
    ev.add_argument("--t", type=float, nargs="+")
    ev.add_argument("--format", choices=("json", "csv"), default="json")
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    mo = sub.add_parser("moment", help="real-order moment E X**nu")
    mo.add_argument("--dist", choices=("eep", "ee"), default="eep")
    _params(mo)
    mo.add_argument("--nu", type=float, required=True)
    mo.add_argument("--method", choices=METHODS, default="series")
    mo.add_argument("--format", choices=("json", "csv"), default="json")
    mo.add_argument("--out")
    mo.set_defaults(func=cmd_moment)

    sa = sub.add_parser("sample", help="draw EEP variates by inverse transform")
    _params(sa)
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--seed", type=int, default=0)
    sa.add_argument("--stream", type=int, default=0)
    sa.add_argument("--out")
    sa.set_defaults(func=cmd_sample)

    si = sub.add_parser("simulate", help="simulate the series-parallel system and KS-test it")
    _params(si)
    si.add_argument("--n", type=int, required=True)
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--stream", type=int, default=0)
    si.add_argument("--out", help="CSV file for the simulated lifetimes")
    si.add_argument("--report", help="JSON file for the KS report (default stdout)")
    si.set_defaults(func=cmd_simulate)

    fi = sub.add_parser("fit", help="maximum-likelihood fit to a single-column CSV")
    fi.add_argument("data")
    _params(fi, required_default=False)
    fi.add_argument("--out")
    fi.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"eep {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"eep {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
