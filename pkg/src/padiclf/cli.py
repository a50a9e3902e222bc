"""Command-line front end.

Every subcommand prints a JSON report (sorted keys) to stdout or ``--out``
and a one-line summary to stderr. Exit codes: 0 all audits pass, 1 an audit
failed, 2 usage or input error, 3 precision insufficient.
"""
from __future__ import annotations

import argparse
import configparser
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import (
    InsufficientPrecision,
    LinearFormZero,
    NoSolutionFound,
    PadicLFError,
    UncertifiedTail,
)
from .verdict import Verdict, _fmt

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -------------------------------------------------------------------------
# argument readers


def exact(s: str) -> Fraction:
    """Exact rational "num/den" or integer; decimals are refused."""
    s = str(s).strip()
    if "." in s or "e" in s.lower():
        raise UsageError(f"{s!r}: exact rational expected (num/den)")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{s!r}: not a rational") from None


def real(s: str) -> str:
    from .pipeline import parse_real

    try:
        parse_real(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{s!r}: not a real number") from None
    return s


def int_list(s: str) -> list:
    try:
        return [int(c) for c in s.replace(" ", "").split(",") if c]
    except ValueError:
        raise UsageError(f"{s!r}: comma-separated integers expected") from None


def element_arg(s: str):
    """"a/b" for a rational, "c0,c1,..." for coordinates in the power basis."""
    s = s.strip()
    if "," in s:
        return [exact(c) for c in s.split(",")]
    return exact(s)


def _field(arg):
    from .numfield import QQ_FIELD, NumberField

    if not arg:
        return QQ_FIELD
    return NumberField(int_list(arg))


def load_instance(path: str, precision=None):
    """JSON, or an INI file with an [instance] section using the same keys
    (lists comma separated, elements with coordinates separated by ';')."""
    from .pipeline import ProofInstance

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
            sec = cp["instance"]
        except (configparser.Error, KeyError):
            raise UsageError(f"{path}: neither JSON nor an [instance] config") from None

        def elems(v):
            return [[c.strip() for c in e.split(";")] if ";" in e else e.strip() for e in v.split(",")]

        data = {"model": sec.get("model", "gm"), "beta": elems(sec["beta"]), "gamma": elems(sec["gamma"]),
                "p": sec.getint("p"), "precision": sec.getint("precision", 40)}
        if "min_poly" in sec:
            data["field"] = {"min_poly": int_list(sec["min_poly"])}
    if precision is not None:
        data["precision"] = precision
    try:
        return ProofInstance.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


# -------------------------------------------------------------------------
# subcommands; each returns (report dict, passed)


def cmd_heights(a):
    from .numfield import heights_vector, height, parse_element, projective_height

    K = _field(a.field)
    xs = [parse_element(K, element_arg(s)) for s in a.elements]
    hv = heights_vector(xs, K)
    rep = {k: v.to_dict() for k, v in hv.items()}
    rep["absolute"] = [height(x).to_dict() for x in xs]
    rep["projective"] = projective_height(xs).to_dict()
    return rep, True


def cmd_product_formula(a):
    from .numfield import parse_element, product_formula_check

    K = _field(a.field)
    xs = [parse_element(K, element_arg(s)) for s in a.elements]
    rng = random.Random(a.seed)
    for _ in range(a.random):
        coords = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(K.d)]
        if any(coords):
            xs.append(K.element(coords))
    vs = [product_formula_check(x) for x in xs]
    return {"checks": [v.to_dict() for v in vs], "count": len(vs)}, all(vs)


def cmd_schwarz(a):
    from .series import schwarz_bound

    e = schwarz_bound(a.s, a.t, a.k, a.l, a.delta, a.mu, a.normt, a.p)
    return {"exponent": _fmt(e), "inputs": _fmt({"s": a.s, "t": a.t, "k": a.k, "l": a.l, "delta": a.delta,
                                                "mu": a.mu, "normt": a.normt, "p": a.p})}, True


def cmd_siegel(a):
    from .numfield import parse_element, siegel_solve

    K = _field(a.field)
    forms = [[parse_element(K, element_arg(c)) for c in row.split()] for row in a.forms.split(";") if row.strip()]
    res = siegel_solve(forms, K)
    return res.to_dict(), res.verdict.holds


def cmd_exp_series(a):
    from .groups import exp_series, model_from_preset

    model = model_from_preset(a.model)
    es = exp_series(model, a.order)
    vs = [es.check_pde(), es.check_integrability(), es.check_integrality(), es.check_addition()]
    rep = {"model": model.to_dict(), "order": a.order, "checks": [v.to_dict() for v in vs]}
    if a.coefficients:
        rep["series"] = es.to_dict()
    return rep, all(vs)


def cmd_semistable(a):
    from .groups import is_semistable_gm
    from .numfield import parse_element

    K = _field(a.field)
    v = is_semistable_gm([parse_element(K, element_arg(s)) for s in a.beta], K)
    return v.to_dict(), True


def cmd_params(a):
    from .pipeline import choose_parameters

    P = choose_parameters(a.c, a.omega, a.n, a.b, a.h, a.c2)
    return {"parameters": P.to_dict(), "feasibility": {"lhs": P.D0 * P.D ** a.n,
                                                       "rhs": _fmt(Fraction(a.c2) * P.S0 * P.T ** a.n)}}, True


def cmd_bound(a):
    from .pipeline import theorem_bound

    v = theorem_bound(a.omega, a.n, a.b, a.h, a.p, a.c0, a.nu)
    return {"bound": v.to_dict(), "statement": 1 if a.nu is None else 2}, True


def cmd_verify_gm(a):
    from .pipeline import verify_gm

    inst = load_instance(a.instance, a.precision)
    try:
        rep = verify_gm(inst, a.c0, a.c1, max_precision=a.max_precision or 640)
    except LinearFormZero as exc:
        return {"outcome": "linear_form_zero", "message": str(exc), "instance": inst.to_dict()}, True
    out = rep.to_dict()
    out["instance"] = inst.to_dict()
    return out, rep.passed


def cmd_pipeline(a):
    from .pipeline import Parameters, run_pipeline

    inst = load_instance(a.instance, a.precision)
    params = Parameters.toy(a.S0, a.D0, a.D, a.T)
    rep = run_pipeline(inst, params, a.series_order)
    out = rep.to_dict()
    out["instance"] = inst.to_dict()
    return out, rep.passed


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padiclf", description="p-adic linear forms in logarithms: audits and bounds")
    ap.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--precision", type=int, help="p-adic working precision (digits)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized audits")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("heights", parents=[common], help="heights of a point")
    s.add_argument("--field", help="min_poly coefficients, highest degree first")
    s.add_argument("elements", nargs="+")
    s.set_defaults(fn=cmd_heights)

    s = sub.add_parser("product-formula", parents=[common], help="product formula check")
    s.add_argument("--field")
    s.add_argument("--random", type=int, default=0, help="also check this many random elements")
    s.add_argument("elements", nargs="*")
    s.set_defaults(fn=cmd_product_formula)

    s = sub.add_parser("schwarz", parents=[common], help="Schwarz-lemma exponent")
    for name in ("s", "t", "delta", "mu", "normt"):
        s.add_argument(f"--{name}", type=exact, required=True)
    for name in ("k", "l", "p"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.set_defaults(fn=cmd_schwarz)

    s = sub.add_parser("siegel", parents=[common], help="small solution of a linear system")
    s.add_argument("--field")
    s.add_argument("--forms", required=True, help='rows separated by ";", entries by spaces')
    s.set_defaults(fn=cmd_siegel)

    s = sub.add_parser("exp-series", parents=[common], help="exponential series audits")
    s.add_argument("--model", default="gm")
    s.add_argument("--order", type=int, default=8)
    s.add_argument("--coefficients", action="store_true")
    s.set_defaults(fn=cmd_exp_series)

    s = sub.add_parser("semistable", parents=[common], help="semistability of (G_m^n, ker l)")
    s.add_argument("--field")
    s.add_argument("beta", nargs="+")
    s.set_defaults(fn=cmd_semistable)

    s = sub.add_parser("params", parents=[common], help="evaluate the parameter formulas")
    s.add_argument("--c", type=exact, default=Fraction(3))
    s.add_argument("--omega", type=real, default="1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--b", type=real, required=True)
    s.add_argument("--h", type=real, required=True)
    s.add_argument("--c2", type=exact, default=Fraction(1))
    s.set_defaults(fn=cmd_params)

    s = sub.add_parser("bound", parents=[common], help="the theorem's lower bound")
    s.add_argument("--omega", type=real, default="1")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--b", type=real, required=True, help="log B")
    s.add_argument("--h", type=real, required=True, help="log H")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--c0", type=exact, default=Fraction(1))
    s.add_argument("--nu", type=int)
    s.set_defaults(fn=cmd_bound)

    s = sub.add_parser("verify-gm", parents=[common], help="check an instance against the bound")
    s.add_argument("instance")
    s.add_argument("--c0", type=exact)
    s.add_argument("--c1", type=exact)
    s.add_argument("--max-precision", type=int)
    s.set_defaults(fn=cmd_verify_gm)

    s = sub.add_parser("pipeline", parents=[common], help="run the full machinery at toy scale")
    s.add_argument("instance")
    s.add_argument("--S0", type=int, default=2)
    s.add_argument("--D0", type=int, default=4)
    s.add_argument("--D", type=int, default=3)
    s.add_argument("--T", type=int, default=2)
    s.add_argument("--series-order", type=int, default=12)
    s.set_defaults(fn=cmd_pipeline)
    return ap


def _summary(cmd, rep, passed) -> str:
    if rep.get("outcome") == "linear_form_zero":
        return f"{cmd}: LINEAR FORM ZERO (l(u) = 0 certified)"
    if cmd == "verify-gm" and "values" in rep:
        v = rep["values"]
        rows = [f"  v(l(u)) = {v['v_l_u']}", f"  log|l(u)|_p in [{v['log_abs_l_u']['lower']}, {v['log_abs_l_u']['upper']}]",
                f"  bound     in [{v['bound']['lower']}, {v['bound']['upper']}]", f"  statement {v['statement']}, nu = {v['nu']}"]
        return f"verify-gm: {'PASS' if passed else 'FAIL'}\n" + "\n".join(rows)
    return f"{cmd}: {'PASS' if passed else 'FAIL'}"


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        rep, passed = args.fn(args)
        code = EXIT_PASS if passed else EXIT_FAIL
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InsufficientPrecision, UncertifiedTail) as exc:
        print(f"precision insufficient: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except NoSolutionFound as exc:
        rep, passed, code = {"error": str(exc)}, False, EXIT_FAIL
    except (PadicLFError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = {"command": args.command, "exit_code": code, "report": _fmt(rep)}
    text = json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(_summary(args.command, rep["report"], passed), file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
