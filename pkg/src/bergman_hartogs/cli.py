"""Command-line interface.

::

    bergman-hartogs kernel eval --formula triangle --q 3/2 --s 0.5 --t 0.1
    bergman-hartogs kernel series --base punctured-disk --weight neglog:1/2 --s 0.5 --t 0.1
    bergman-hartogs verify --suite all --seed 7

Exit codes: 0 success, 1 validation failure (bad input or a failed check),
2 a series that did not converge. Reports are JSON with sorted keys and no
timestamps, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__, suites
from . import closed_forms as cf
from .base_kernels import disk_log_kernel, punctured_disk_log_kernel
from .errors import BergmanError, ConvergenceError, DomainError
from .hartogs import TruncationPolicy, hartogs_kernel
from .weights import BaseDomain, HartogsSpec, parse_rational, weight_from_json

FORMULAS = ("bergman-dq", "dinfty-q", "triangle", "rel1", "rel2", "twist")
EXIT_OK, EXIT_INVALID, EXIT_DIVERGED = 0, 1, 2

# Inputs each formula reads from a point record.
_FORMULA_INPUTS = {
    "bergman-dq": ("s", "t"),
    "dinfty-q": ("s", "t1", "t2"),
    "triangle": ("s", "t"),
    "rel1": ("z", "zeta", "t"),
    "rel2": ("z", "zeta", "t"),
    "twist": ("z", "zeta", "t"),
}
_CSV_TAIL = ["value_re", "value_im", "terms_used", "last_degree", "est_tail", "converged"]


class UsageError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for divergence.
    def error(self, message):
        raise UsageError(message)


def parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    if isinstance(text, dict) and set(text) == {"re", "im"}:
        return complex(float(text["re"]), float(text["im"]))
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise DomainError(f"cannot parse complex number {text!r}") from None


def parse_holo(text: str) -> cf.HoloFunction:
    """``1``, ``z``, ``z^k`` / ``z**k``, or ``poly:c0,c1,...`` (ascending coefficients)."""
    t = text.strip().replace(" ", "")
    if t == "1":
        return cf.HoloFunction.one()
    if t == "z":
        return cf.HoloFunction.monomial(1)
    for sep in ("^", "**"):
        if t.startswith("z" + sep):
            try:
                return cf.HoloFunction.monomial(int(t[1 + len(sep):]))
            except ValueError:
                break
    if t.startswith("poly:"):
        return cf.HoloFunction.polynomial([parse_complex(c) for c in t[5:].split(",")])
    raise DomainError(f"cannot parse holomorphic function {text!r}; use 1, z^k or poly:c0,c1,...")


def parse_p(text) -> float:
    if str(text).strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise DomainError(f"bad p {text!r}") from None
    if not p >= 1:
        raise DomainError(f"p must lie in [1, inf], got {text!r}")
    return p


def parse_weight(text: str):
    family, sep, param = text.partition(":")
    if not sep:
        raise DomainError(f"weight must look like family:param, got {text!r}")
    if family == "neglog":
        return weight_from_json(family, param)
    if family in ("neglog1msq", "const"):
        if "/" in param:
            return weight_from_json(family, param) if family == "neglog1msq" else weight_from_json(family, float(parse_rational(param)))
        try:
            return weight_from_json(family, float(param))
        except ValueError:
            raise DomainError(f"bad weight parameter {param!r}") from None
    raise DomainError(f"unknown weight family {family!r}")


# ---- point handling -------------------------------------------------------


def _load_points(args, keys) -> list[dict]:
    if args.points:
        with open(args.points) as fh:
            text = fh.read()
        if args.points.endswith(".csv"):
            rows = list(csv.DictReader(io.StringIO(text)))
        else:
            rows = json.loads(text)
            if isinstance(rows, dict):
                rows = [rows]
        pts = []
        for row in rows:
            unknown = set(row) - set(keys)
            if unknown:
                raise DomainError(f"unknown point fields {sorted(unknown)}; expected {list(keys)}")
            missing = [k for k in keys if k not in row]
            if missing:
                raise DomainError(f"point {row!r} is missing {missing}")
            pts.append({k: parse_complex(row[k]) for k in keys})
        return pts
    missing = [k for k in keys if getattr(args, k) is None]
    if missing:
        raise DomainError("missing " + ", ".join("--" + k for k in missing))
    return [{k: parse_complex(getattr(args, k)) for k in keys}]


def _closed_form(args):
    name = args.formula
    if name == "bergman-dq":
        q = float(_required(args, "q"))
        return lambda p: cf.bergman_dq(q, p["s"], p["t"])
    if name == "dinfty-q":
        q = float(_required(args, "q"))
        return lambda p: cf.dinfty_q(q, p["s"], p["t1"], p["t2"])
    if name == "triangle":
        q = parse_rational(_required(args, "q"))
        return lambda p: cf.hartogs_triangle(q, p["s"], p["t"])
    if name == "twist":
        f = parse_holo(args.f or "1")
        k = int(_required(args, "k"))
        return lambda p: cf.twisted_triangle(f, k, args.N, p["z"], p["zeta"], p["t"])
    f, g = parse_holo(args.f or "1"), parse_holo(args.g or "1")
    base = BaseDomain(args.base or "punctured-disk")
    if name == "rel2":
        # Both bases share the unweighted kernel 1 / (pi (1 - s)^2).
        return lambda p: cf.mero_hartogs_rel2(
            f, g, args.N, lambda a, b: 1 / (math.pi * (1 - a * np.conj(b)) ** 2), p["z"], p["zeta"], p["t"])
    # rel1 needs K_{G, log|f/g|}; it has a closed form for monomials only.
    a, b = f.monomial_degree(), g.monomial_degree()
    if a is None or b is None:
        raise DomainError("rel1 supports monomial f and g only; use rel2 for general polynomials")
    alpha = Fraction(b - a)
    if base is BaseDomain.PUNCTURED_UNIT_DISK:
        weighted = lambda x, y: punctured_disk_log_kernel(alpha, x * np.conj(y))
    else:
        if alpha <= -1:
            raise DomainError("rel1 on the disk needs deg g - deg f > -1")
        weighted = lambda x, y: disk_log_kernel(alpha, x * np.conj(y))
    return lambda p: cf.mero_hartogs_rel1(f, g, args.N, weighted, p["z"], p["zeta"], p["t"])


def _required(args, name):
    v = getattr(args, name)
    if v is None:
        raise DomainError(f"--{name} is required for --formula {args.formula}")
    return v


def _value_json(v: complex) -> dict:
    v = complex(v)
    return {"re": v.real, "im": v.imag}


def _closed_report():
    return {"terms_used": None, "last_degree": None, "est_tail": 0.0, "converged": True, "closed_form": True}


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(max_total_degree=args.max_degree, stagnation_tol=args.tol or 1e-12)


def _map_points(fn, pts, jobs):
    if jobs > 1 and len(pts) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, pts))
    return [fn(p) for p in pts]


def cmd_kernel_eval(args) -> tuple[dict, int]:
    if args.formula not in FORMULAS:
        raise DomainError(f"unknown formula {args.formula!r}")
    keys = _FORMULA_INPUTS[args.formula]
    pts = _load_points(args, keys)
    fn = _closed_form(args)

    def one(p):
        return {"inputs": {k: _value_json(p[k]) for k in keys}, "value": _value_json(fn(p)), "report": _closed_report()}

    config = {
        "command": "kernel eval",
        "formula": args.formula,
        "q": args.q,
        "N": args.N,
        "k": args.k,
        "f": args.f,
        "g": args.g,
        "base": args.base,
    }
    return {"config": config, "records": _map_points(one, pts, args.jobs), "version": __version__}, EXIT_OK


def cmd_kernel_series(args) -> tuple[dict, int]:
    weight = parse_weight(_required_series(args, "weight"))
    spec = HartogsSpec(BaseDomain(args.base or "disk"), weight, N=args.N, p=parse_p(args.p))
    per_coordinate = spec.N > 1 and spec.p != 2
    keys = ("s",) + (tuple(f"t{k + 1}" for k in range(spec.N)) if per_coordinate else ("t",))
    if per_coordinate and not args.points:
        if args.t_list is None:
            raise DomainError(f"N={spec.N}, p={spec.p:g} needs --t-list with {spec.N} comma-separated pairings")
        parts = [parse_complex(x) for x in args.t_list.split(",")]
        if len(parts) != spec.N:
            raise DomainError(f"--t-list needs {spec.N} entries, got {len(parts)}")
        pts = [{"s": parse_complex(_required_series(args, "s")), **{f"t{k + 1}": v for k, v in enumerate(parts)}}]
    else:
        pts = _load_points(args, keys)
    policy = _policy(args)

    def one(p):
        t = [p[k] for k in keys[1:]] if per_coordinate else p["t"]
        rep = hartogs_kernel(spec, p["s"], t, policy, method=args.method)
        r = rep.to_json()
        r.pop("value")
        return {"inputs": {k: _value_json(p[k]) for k in keys}, "value": _value_json(rep.value), "report": r}

    config = {
        "command": "kernel series",
        "spec": spec.to_json(),
        "method": args.method,
        "policy": {"max_total_degree": policy.max_total_degree, "stagnation_tol": policy.stagnation_tol,
                   "stagnation_degrees": policy.stagnation_degrees},
    }
    return {"config": config, "records": _map_points(one, pts, args.jobs), "version": __version__}, EXIT_OK


def _required_series(args, name):
    v = getattr(args, name)
    if v is None:
        raise DomainError(f"--{name} is required")
    return v


def cmd_verify(args) -> tuple[dict, int]:
    if args.suite not in suites.SUITES + ("all",):
        raise DomainError(f"unknown suite {args.suite!r}")
    checks = suites.build(args.suite, n_samples=args.samples, seed=args.seed, tol=args.tol,
                          jobs=args.jobs, max_degree=args.max_degree)
    records = []
    diverged = False
    for suite, name, thunk in checks:
        try:
            rep = thunk().to_json()
        except ConvergenceError as exc:
            diverged = True
            rep = {"pass": False, "error": str(exc)}
        records.append({"suite": suite, "check": name, **rep})
    n_pass = sum(r["pass"] for r in records)
    report = {
        "config": {
            "command": "verify",
            "suite": args.suite,
            "seed": args.seed,
            "samples": args.samples,
            "tol": args.tol,
            "max_degree": args.max_degree,
            "shards": 8,
        },
        "checks": records,
        "summary": {"total": len(records), "passed": n_pass, "failed": len(records) - n_pass},
        "pass": n_pass == len(records),
        "version": __version__,
    }
    code = EXIT_DIVERGED if diverged else (EXIT_OK if report["pass"] else EXIT_INVALID)
    return report, code


# ---- output ---------------------------------------------------------------


def _clean(x):
    # JSON has no inf/nan; keep the output strictly parseable.
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_clean(report), sort_keys=True, indent=2, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "checks" in report:
        writer.writerow(["suite", "check", "pass", "max_rel_err", "tol", "points_checked"])
        for r in report["checks"]:
            writer.writerow([r["suite"], r["check"], r["pass"], r.get("max_rel_err"), r.get("tol"), r.get("points_checked")])
    else:
        records = report["records"]
        keys = list(records[0]["inputs"]) if records else []
        writer.writerow([f"{k}_{part}" for k in keys for part in ("re", "im")] + _CSV_TAIL)
        for r in records:
            row = [r["inputs"][k][part] for k in keys for part in ("re", "im")]
            rep = r["report"]
            row += [r["value"]["re"], r["value"]["im"], rep["terms_used"], rep["last_degree"], rep["est_tail"], rep["converged"]]
            writer.writerow(row)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--max-degree", dest="max_degree", type=int, default=400)
    common.add_argument("--tol", type=float, default=None)

    points = _Parser(add_help=False)
    for name in ("s", "t", "t1", "t2", "z", "zeta"):
        points.add_argument(f"--{name}")
    points.add_argument("--points", help="JSON list of point objects, or a .csv file with a header row")

    parser = _Parser(prog="bergman-hartogs", description="Bergman kernels of Hartogs domains.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kernel = sub.add_parser("kernel", help="evaluate kernels")
    ksub = kernel.add_subparsers(dest="kernel_command", required=True, parser_class=_Parser)

    ev = ksub.add_parser("eval", parents=[common, points], help="closed-form kernels")
    ev.add_argument("--formula", required=True, choices=FORMULAS)
    ev.add_argument("--q")
    ev.add_argument("--N", type=int, default=1)
    ev.add_argument("--k", type=int)
    ev.add_argument("--f")
    ev.add_argument("--g")
    ev.add_argument("--base", choices=[b.value for b in BaseDomain])
    ev.add_argument("--alpha", help="accepted for symmetry with `kernel series`; unused")
    ev.add_argument("--beta", help="accepted for symmetry with `kernel series`; unused")
    ev.set_defaults(handler=cmd_kernel_eval)

    se = ksub.add_parser("series", parents=[common, points], help="kernel via the weighted base series")
    se.add_argument("--base", choices=[b.value for b in BaseDomain])
    se.add_argument("--weight", help="neglog:<a/b> | neglog1msq:<beta> | const:<c>")
    se.add_argument("--alpha", help="shorthand for --weight neglog:<alpha>")
    se.add_argument("--beta", help="shorthand for --weight neglog1msq:<beta>")
    se.add_argument("--N", type=int, default=1)
    se.add_argument("--p", default="2")
    se.add_argument("--t-list", dest="t_list", help="comma-separated per-coordinate pairings for p != 2, N > 1")
    se.add_argument("--method", choices=("multiindex", "inflation"), default="multiindex")
    se.set_defaults(handler=cmd_kernel_series)

    ve = sub.add_parser("verify", parents=[common], help="run verification suites")
    ve.add_argument("--suite", required=True, choices=suites.SUITES + ("all",))
    ve.add_argument("--samples", type=int, default=1_000_000)
    ve.add_argument("--seed", type=int, default=0)
    ve.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "kernel_command", None) == "series" and args.weight is None:
            if args.alpha is not None:
                args.weight = f"neglog:{args.alpha}"
            elif args.beta is not None:
                args.weight = f"neglog1msq:{args.beta}"
        report, code = args.handler(args)
        text = render(report, args.format)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (BergmanError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
