"""Command-line front end: ``legendre-bounds <command> [flags]``.

Exit codes: 0 success, 1 a verification failed, 2 bad input (including a
modular polynomial database that lacks a requested degree).
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction
import json
import math
import os
import sys
import time

from . import bounds as B
from . import galois, subgroups
from ._accel import backend
from .canonical import canonical_height, naive_height
from .constants import load_constants
from .curve import DomainError, LegendreFiber
from .divpoly import check_functional_equation, division_polynomials
from .heights import weil_height
from .logbound import LogBound
from .scanner import (CurveFormatError, CurveSpec, DBIncompleteError, GenericallyTorsion,
                      ModularPolyDB, detect_isogenous_fiber, scan_fiber, scan_many, verify_mm_bound)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

INPUT_ERRORS = (ValueError, KeyError, DomainError, CurveFormatError, DBIncompleteError, OSError,
                ZeroDivisionError)


@dataclass
class Config:
    constants_table_path: str = None
    modular_db_path: str = None
    tolerance: float = 1e-9
    parallelism: int = 1
    output_format: str = "text"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.parallelism < 1:
            raise ValueError("--jobs must be >= 1")
        if self.output_format not in ("text", "structured"):
            raise ValueError("format must be text or structured")
        for p in (self.constants_table_path, self.modular_db_path):
            if p is not None and not os.access(p, os.R_OK):
                raise OSError("cannot read %s" % p)

    def constants(self):
        return load_constants(self.constants_table_path)

    def modular_db(self):
        return ModularPolyDB.load(self.modular_db_path)


# ---------------------------------------------------------------------------
# value parsing and serialisation


def rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError("not an exact rational: %r" % text) from None


def bound_value(text):
    text = str(text).strip()
    return LogBound.parse(text) if text.startswith("exp(") else LogBound.from_rational(rational(text))


def int_list(text):
    return [int(t) for t in str(text).split(",") if t.strip()]


def to_jsonable(v):
    if isinstance(v, LogBound):
        return {"exact": v.to_expr(), **v.record()}
    if isinstance(v, Fraction):
        return {"exact": str(v), "decimal": "%.12g" % float(v)}
    if isinstance(v, bool) or v is None or isinstance(v, (str, int)):
        return v
    if isinstance(v, float):
        return float("%.15g" % v)
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if hasattr(v, "record"):
        return to_jsonable(v.record())
    if hasattr(v, "as_dict"):
        return to_jsonable(v.as_dict())
    return str(v)


def strip_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}


# ---------------------------------------------------------------------------
# commands

BOUND_OPS = {}


def bound_op(name, *params):
    def deco(fn):
        BOUND_OPS[name] = (fn, params)
        return fn
    return deco


@bound_op("mm-curve", "C", "D2")
def _mm(a, cfg):
    return {"bound": B.mm_curve_bound(bound_value(a["C"]), int(a["D2"]))}


@bound_op("ml-bounds", "D1", "D2", "H", "h_E0")
def _ml(a, cfg):
    p = B.MMCurveParams(int(a["D1"]), int(a["D2"]), rational(a.get("H", 0)), rational(a.get("h_E0", 0)))
    return B.ml_bounds(p)


@bound_op("solve-log", "A1", "A2", "A3")
def _solve(a, cfg):
    return {"B": B.solve_log_inequality(rational(a["A1"]), rational(a["A2"]), rational(a["A3"]))}


@bound_op("fiber-height", "D1", "D2", "H", "h_lambda")
def _fiber_height(a, cfg):
    return B.fiber_point_height_bound(int(a["D1"]), int(a["D2"]), rational(a.get("H", 0)),
                                      rational(a.get("h_lambda", 0)))


@bound_op("lambda-height", "h_j", "deg_phi", "h_jE0")
def _lam_height(a, cfg):
    return B.lambda_height_bounds(rational(a["h_j"]), int(a["deg_phi"]), rational(a["h_jE0"]))


@bound_op("faltings-j", "h_E0")
def _faltings(a, cfg):
    return {"bound": B.faltings_j_relation(rational(a["h_E0"]))}


@bound_op("kummer", "D2")
def _kummer(a, cfg):
    return B.kummer_chain_bounds(int(a["D2"]))


@bound_op("descent", "g", "dimY", "c", "degV")
def _descent(a, cfg):
    out = B.hindry_descent(B.DescentParams(int(a["g"]), int(a["dimY"]), int(a["c"]), int(a["degV"])))
    out.pop("thresholds")
    return out


@bound_op("fibered-power", "g", "degV", "dimV", "h_E0", "deg_K", "cm")
def _fibered(a, cfg):
    return B.fibered_power_bound(int(a["g"]), int(a["degV"]), int(a["dimV"]), rational(a.get("h_E0", 0)),
                                 int(a.get("deg_K", 1)), _truthy(a.get("cm", "0")), cfg.constants())


@bound_op("coset-count", "C", "N", "g", "j", "dimV", "degA", "delta")
def _coset(a, cfg):
    return {"bound": B.torsion_coset_count_bound(bound_value(a["C"]), int(a["N"]), int(a["g"]), int(a["j"]),
                                                 int(a["dimV"]), int(a["degA"]), int(a["delta"]))}


@bound_op("serre", "cm", "deg_K", "deg_K_over_Qj", "h_E0")
def _serre(a, cfg):
    p = galois.SerreConstantParams(_truthy(a.get("cm", "0")), int(a.get("deg_K", 1)),
                                   int(a.get("deg_K_over_Qj", 1)), rational(a.get("h_E0", 0)))
    return {"bound": galois.serre_constant_bound(p)}


@bound_op("image-preimage", "matrix", "deg", "direction")
def _image(a, cfg):
    return {"bound": subgroups.image_preimage_degree_bound(parse_matrix(a["matrix"]), int(a["deg"]),
                                                           a.get("direction", "image"), cfg.constants())}


@bound_op("sum-degree", "degV", "degW", "g")
def _sumdeg(a, cfg):
    return {"bound": subgroups.sum_degree_bound(int(a["degV"]), int(a["degW"]), int(a["g"]), cfg.constants())}


def _truthy(v):
    return str(v).strip().lower() in ("1", "true", "yes", "cm")


def parse_matrix(text):
    """'1,2;3,4' -> [[1,2],[3,4]]."""
    return [int_list(row) for row in str(text).split(";") if row.strip()]


def cmd_bounds(args, cfg):
    if args.op not in BOUND_OPS:
        raise ValueError("unknown bounds operation %r; choose from %s" % (args.op, ", ".join(sorted(BOUND_OPS))))
    fn, params = BOUND_OPS[args.op]
    named = {k: getattr(args, k) for k in ("C", "D1", "D2", "H") if getattr(args, k) is not None}
    for item in args.set or []:
        if "=" not in item:
            raise ValueError("--set expects key=value, got %r" % item)
        k, v = item.split("=", 1)
        named[k.strip()] = v.strip()
    unknown = set(named) - set(params)
    if unknown:
        raise ValueError("%s does not take %s" % (args.op, ", ".join(sorted(unknown))))
    try:
        results = fn(named, cfg)
    except KeyError as exc:
        raise ValueError("%s needs argument %s" % (args.op, exc.args[0])) from None
    return {"operation": args.op, "arguments": named}, results, True


def cmd_divpoly(args, cfg):
    n = _need(args.n, "--n")
    if n < 1:
        raise ValueError("--n must be >= 1")
    A, Bp = division_polynomials(n)
    checks = {
        "deg_X A_n = n^2": A.degree_x() == n * n,
        "deg_X B_n = n^2 - 1": Bp.degree_x() == n * n - 1,
        "A_n monic in X": A.is_monic_x(),
        "functional equations and deg_L <= n^2": check_functional_equation(n),
    }
    return {"n": n}, {"A_n": str(A), "B_n": str(Bp), "checks": checks}, all(checks.values())


def cmd_height(args, cfg):
    if args.point:
        coords = [rational(c) for c in args.point.split(",")]
        h = weil_height(coords, cfg.tolerance)
        return {"point": args.point}, {"weil_height": _hv(h)}, True
    lam = rational(_need(args.lam, "--lambda or --point"))
    E = LegendreFiber(lam)
    x = rational(_need(args.x, "--x"))
    P = E.lift_x(E.field(x)) if args.y is None else E.point(E.field(x), E.field(rational(args.y)))
    res = {"naive_height": _hv(naive_height(P, cfg.tolerance)),
           "canonical_height": _hv(canonical_height(P, cfg.tolerance))}
    return {"lambda": str(lam), "x": str(x), "y": args.y}, res, True


def _hv(h):
    return {"value": "%.15g" % h.value, "error": "%.3g" % h.error,
            "exact_log_of": None if h.exact is None else str(h.exact)}


def cmd_kernel_degree(args, cfg):
    M = parse_matrix(_need(args.matrix, "--matrix"))
    return {"matrix": M}, {"kernel_degree": subgroups.kernel_degree(M),
                           "cauchy_binet": subgroups.cauchy_binet_check(M)}, True


def cmd_orbit(args, cfg):
    Ns = _n_values(args)
    rows, ok = [], True
    for N in Ns:
        chk = galois.verify_orbit_bound(N, args.C_int, args.c, formula=args.formula,
                                        full_group_only=args.full_group)
        rows.append(chk.as_dict())
        ok = ok and chk.ok
        if args.g:
            count, failures = galois.homotheties_preserve_submodules(N, args.g)
            rows[-1]["submodules_checked"] = int(count)
            rows[-1]["submodule_failures"] = int(failures)
            ok = ok and failures == 0
    inputs = {"N": Ns, "C": args.C_int, "c": args.c, "formula": args.formula, "g": args.g,
              "full_group": args.full_group}
    return inputs, {"checks": rows, "ok": ok}, ok


def cmd_isogeny(args, cfg):
    lam = rational(_need(args.lam, "--lambda"))
    j0 = rational(_need(args.j0, "--j0"))
    maxdeg = _need(args.maxdeg, "--maxdeg")
    degrees = detect_isogenous_fiber(lam, j0, maxdeg, cfg.modular_db())
    return {"lambda": str(lam), "j0": str(j0), "maxdeg": maxdeg}, {"degrees": degrees}, True


def _load_curve(path):
    with open(_need(path, "--curve")) as fh:
        try:
            return CurveSpec.from_json(fh.read())
        except json.JSONDecodeError as exc:
            raise CurveFormatError("curve file is not JSON: %s" % exc) from None


def _n_values(args):
    Ns = int_list(_need(args.N, "--N"))
    if not Ns or min(Ns) < 1:
        raise ValueError("--N needs positive integers")
    return Ns


def cmd_scan(args, cfg):
    C = _load_curve(args.curve)
    if args.lam is not None:
        maxN = max(_n_values(args))
        out = scan_fiber(rational(args.lam), C, maxN)
        res = {"hits": [h.record() for h in out["hits"]],
               "intersection_points": out["intersection_points"], "bezout_bound": out["bezout_bound"]}
        return {"curve": args.curve, "lambda": args.lam, "maxN": maxN}, res, True
    found = scan_many(C, _n_values(args), cfg.parallelism)
    res = {}
    for N, r in found.items():
        res[str(N)] = r.record() if isinstance(r, GenericallyTorsion) else [h.record() for h in r]
    return {"curve": args.curve, "N": sorted(found)}, {"by_order": res}, True


def cmd_verify(args, cfg):
    C = _load_curve(args.curve)
    serre_C = bound_value(args.C if args.C is not None else "6")
    found = scan_many(C, _n_values(args), cfg.parallelism)
    hits = []
    for N, r in found.items():
        if isinstance(r, GenericallyTorsion):
            raise ValueError("curve is generically %d-torsion; the order bound does not apply" % N)
        hits.extend(r)
    flags = None
    if args.j0 is not None:
        db, j0, maxdeg = cfg.modular_db(), rational(args.j0), _need(args.maxdeg, "--maxdeg")

        def flag(hit):
            if not hit.lam.is_rational():
                return True          # conservative: treat as isogenous
            return bool(detect_isogenous_fiber(hit.lam.to_fraction(), j0, maxdeg, db))
        flags = [flag(h) for h in hits]
    if args.forge:
        if not hits:
            raise ValueError("--forge needs at least one hit to tamper with")
        bound = B.mm_curve_bound(serre_C, C.D2)
        hits[0].order = math.floor(math.exp(min(bound.ln(), 700))) + 1
    report = verify_mm_bound(C, serre_C, hits, flags)
    inputs = {"curve": args.curve, "N": sorted(found), "C": serre_C.to_expr(), "j0": args.j0,
              "forged": bool(args.forge)}
    return inputs, report, report["ok"]


def _need(v, flag):
    if v is None:
        raise ValueError("missing required flag %s" % flag)
    return v


COMMANDS = {"bounds": cmd_bounds, "scan": cmd_scan, "divpoly": cmd_divpoly, "height": cmd_height,
            "kernel-degree": cmd_kernel_degree, "orbit": cmd_orbit, "isogeny-check": cmd_isogeny,
            "verify": cmd_verify}


# ---------------------------------------------------------------------------
# dispatch


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--constants", metavar="PATH")
    common.add_argument("--modular-db", metavar="PATH")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = argparse.ArgumentParser(prog="legendre-bounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", parents=[common], help="evaluate a bound by name")
    b.add_argument("op", help="one of: " + ", ".join(sorted(BOUND_OPS)))
    for flag in ("C", "D1", "D2", "H"):
        b.add_argument("--" + flag)
    b.add_argument("--set", action="append", metavar="KEY=VALUE", help="any other named argument")

    d = sub.add_parser("divpoly", parents=[common], help="A_n, B_n and their identities")
    d.add_argument("--n", "--N", dest="n", type=int)

    h = sub.add_parser("height", parents=[common], help="Weil or canonical height")
    h.add_argument("--point", help="comma-separated rational projective coordinates")
    h.add_argument("--lambda", dest="lam")
    h.add_argument("--x")
    h.add_argument("--y")

    k = sub.add_parser("kernel-degree", parents=[common], help="degree of a subgroup kernel")
    k.add_argument("--matrix", help="rows separated by ';', entries by ','")

    o = sub.add_parser("orbit", parents=[common], help="homothety orbit sweeps")
    o.add_argument("--N", "--n", dest="N", help="comma-separated moduli")
    o.add_argument("--C", dest="C_int", type=int, default=1)
    o.add_argument("--c", type=int, default=1)
    o.add_argument("--g", type=int, default=0, help="also sweep cyclic submodules of rank 2g")
    o.add_argument("--formula", choices=("theorem", "conjugates"), default="theorem")
    o.add_argument("--full-group", action="store_true")

    i = sub.add_parser("isogeny-check", parents=[common], help="modular polynomial test")
    i.add_argument("--lambda", dest="lam")
    i.add_argument("--j0")
    i.add_argument("--maxdeg", type=int)

    s = sub.add_parser("scan", parents=[common], help="torsion points on a curve")
    s.add_argument("--curve")
    s.add_argument("--N", "--n", dest="N", help="order or comma-separated orders")
    s.add_argument("--lambda", dest="lam", help="scan one fiber up to max(N)")

    v = sub.add_parser("verify", parents=[common], help="scan, certify and compare with the bound")
    v.add_argument("--curve")
    v.add_argument("--N", "--n", dest="N")
    v.add_argument("--C", help="Serre constant (rational or exp(...))")
    v.add_argument("--j0")
    v.add_argument("--maxdeg", type=int)
    v.add_argument("--forge", action="store_true", help="tamper with the first hit (negative control)")
    return p


def run(argv=None):
    """Parse, execute and return (exit code, report dict)."""
    code, report, _ = _execute(argv)
    return code, report


def _execute(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None, "text"
    start = time.perf_counter()
    report = {"command": args.command, "inputs": {}, "results": None, "ok": False,
              "constants_version": None, "backend": backend()}
    try:
        cfg = Config(args.constants, args.modular_db, args.tol, args.jobs, args.format)
        report["constants_version"] = cfg.constants().version
        inputs, results, ok = COMMANDS[args.command](args, cfg)
        report.update(inputs=to_jsonable(inputs), results=to_jsonable(results), ok=bool(ok))
        code = EXIT_OK if ok else EXIT_FAIL
    except DBIncompleteError as exc:
        report["error"] = str(exc)
        code = EXIT_INPUT
    except INPUT_ERRORS as exc:
        report["error"] = "missing %s" % exc if isinstance(exc, KeyError) else str(exc)
        code = EXIT_INPUT
    report["exit_code"] = code
    report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report, args.format


def render_text(report, out):
    def emit(prefix, v):
        if isinstance(v, dict):
            for k in v:
                emit("%s.%s" % (prefix, k) if prefix else str(k), v[k])
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            for i, x in enumerate(v):
                emit("%s[%d]" % (prefix, i), x)
        else:
            out.write("%s: %s\n" % (prefix, v))
    emit("", report)


def main(argv=None):
    code, report, fmt = _execute(argv)
    if report is not None:
        if fmt == "structured":
            sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        else:
            render_text(report, sys.stdout)
        if code == EXIT_INPUT:
            sys.stderr.write("error: %s\n" % report.get("error"))
    return code


if __name__ == "__main__":
    sys.exit(main())
