"""Command-line harness: verification suites, expression evaluation,
residual computation, and report summaries.

Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage or
input errors.  Reports are JSON with sorted keys, so a fixed seed gives
byte-identical output apart from the environment stamp.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import scalars, suites
from .equations import EquationForm
from .errors import DomainError, ParseError, StadaError
from .expr import eval_expr
from .fields import AnalyticField, Poly
from .multivector import Multivector, format_multivector
from .scalars import EXACT, FLOAT

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

REPORT_DIR_ENV = "STADA_REPORT_DIR"


def _report_path(arg_path: str | None, default_name: str) -> str | None:
    if arg_path:
        return arg_path
    env_dir = os.environ.get(REPORT_DIR_ENV)
    if env_dir:
        os.makedirs(env_dir, exist_ok=True)
        return os.path.join(env_dir, default_name)
    return None


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_verify(args) -> int:
    if args.tolerance is not None:
        scalars.set_default_tolerance(args.tolerance)
    report = suites.run_suite(args.suite, seed=args.seed, backend=args.backend,
                              iterations=args.iterations, tolerance=args.tolerance)
    for check in report.checks:
        print(f"[{check.status:>4}] {check.id}: {check.law}"
              + (f" ({check.detail})" if check.detail else ""))
    summary = report.summary()
    print(f"suite {report.suite}: {summary['passed']}/{summary['total']} checks passed")
    path = _report_path(args.report, f"verify_{args.suite}_seed{args.seed}.json")
    if path:
        _write_json(path, report.to_json_dict())
        print(f"report written to {path}")
    return EXIT_PASS if report.passed() else EXIT_FAIL


def _cmd_eval(args) -> int:
    backend = EXACT if args.backend == "exact" else FLOAT
    value = eval_expr(args.expression, backend)
    print(format_multivector(value, basis=args.basis))
    return EXIT_PASS


def _parse_field_expr(text: str, backend: str) -> AnalyticField:
    """Sum of `coeff blade exp(i[p0,p1,p2,p3])` terms; exp factor optional."""
    import re

    from .multivector import _NUM, _blade_mask, _parse_coeff

    token = re.compile(
        r"\s*(?P<sign>[+-])?\s*"
        rf"(?:(?P<complex>\((?:[+-]?{_NUM})?(?:[+-](?:{_NUM})?)i\))|(?P<number>{_NUM}))?\s*"
        r"(?P<blade>[el][0-9]*)?\s*"
        rf"(?P<exp>exp\(\s*i\s*\[\s*(?P<p0>[+-]?{_NUM})\s*,\s*(?P<p1>[+-]?{_NUM})\s*,"
        rf"\s*(?P<p2>[+-]?{_NUM})\s*,\s*(?P<p3>[+-]?{_NUM})\s*\]\s*\))?")
    out = AnalyticField.zero(backend)
    pos = 0
    any_term = False
    while pos < len(text):
        m = token.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError("unrecognized field term", pos)
        if not (m.group("complex") or m.group("number") or m.group("blade") or m.group("exp")):
            if text[m.end():].strip() == "":
                break
            raise ParseError("unrecognized field term", pos)
        if m.group("complex"):
            coeff = _parse_coeff("complex", m.group("complex"), pos, backend)
        elif m.group("number"):
            coeff = _parse_coeff("number", m.group("number"), pos, backend)
        else:
            coeff = scalars.one(backend)
        if m.group("sign") == "-":
            coeff = -coeff
        mask = _blade_mask(m.group("blade"), pos) if m.group("blade") else 0
        mv = Multivector.basis(mask, backend).scale(coeff)
        if m.group("exp"):
            wave = [Fraction(m.group(f"p{mu}")) if backend == EXACT
                    else float(Fraction(m.group(f"p{mu}"))) for mu in range(4)]
            term = AnalyticField.plane_wave(mv, wave)
        else:
            term = AnalyticField.constant(mv)
        out = out + term
        any_term = True
        pos = m.end()
    if not any_term:
        raise ParseError("empty field expression", 0)
    return out


def _residual_basis(choice: str):
    from . import ideal

    if choice == "canonical":
        return ideal.canonical_basis()
    if choice.startswith("random:"):
        import random as _random

        from . import generators, spin

        seed = int(choice.split(":", 1)[1])
        s = spin.random_rational_spin(_random.Random(seed), factors=2)
        gens = generators.transported_generators(s, generators.canonical_generators())
        return ideal.idempotent_of(gens)
    raise DomainError(f"unknown generator choice {choice!r}")


def _cmd_residual(args) -> int:
    from . import equations as eq
    from . import ideal
    from .grid import GridField

    if args.tolerance is not None:
        scalars.set_default_tolerance(args.tolerance)
    form = EquationForm.from_name(args.form)
    basis = _residual_basis(args.generators)
    fbasis = eq._float_basis(basis)
    pot = None
    if args.potential:
        if os.path.exists(args.potential):
            from .multivector import multivector_from_json

            with open(args.potential, encoding="utf-8") as fh:
                pot = AnalyticField.constant(
                    multivector_from_json(json.load(fh)).to_float())
        else:
            pot = _parse_field_expr(args.potential, FLOAT)

    if args.reduce:
        report = _reduction_report(args, form, fbasis, pot)
    else:
        state = _load_state(args, form, basis, fbasis)
        report = _dispatch_residual(form, state, pot, args.mass, fbasis,
                                    args.tolerance, args.seed)
    payload = report.to_json_dict()
    text = json.dumps(payload, indent=2, sort_keys=True)
    path = _report_path(args.report, f"residual_{args.form}_seed{args.seed}.json")
    if path:
        _write_json(path, payload)
        print(f"report written to {path}")
    else:
        print(text)
    return EXIT_PASS if report.verdict == "pass" else EXIT_FAIL


def _load_state(args, form: EquationForm, basis, fbasis):
    from . import equations as eq
    from .grid import GridField

    if args.plane_wave:
        params = dict(part.split("=", 1) for part in args.plane_wave.split(";"))
        m = float(params.get("m", args.mass))
        p = tuple(float(v) for v in params["p"].split(","))
        sign = int(params.get("sign", 1))
        which = int(params.get("which", 0))
        return eq.plane_wave(form, p, m, sign, basis=basis, which=which).state
    if args.state == "zero":
        if form == EquationForm.DIRAC_MATRIX:
            return eq.BispinorField.zero(FLOAT)
        return AnalyticField.zero(FLOAT)
    if os.path.exists(args.state):
        if form == EquationForm.DIRAC_MATRIX:
            raise DomainError("grid states are not defined for the matrix form; "
                              "use --plane-wave or --state zero")
        return GridField.load(args.state)
    if form == EquationForm.DIRAC_MATRIX:
        raise DomainError("the matrix form accepts --plane-wave or --state zero")
    return _parse_field_expr(args.state, FLOAT)


def _dispatch_residual(form: EquationForm, state, pot, mass, fbasis,
                       tolerance, seed):
    from . import equations as eq

    if form == EquationForm.DIRAC_MATRIX:
        return eq.residual_dirac(state, pot, mass, fbasis, tolerance=tolerance, seed=seed)
    if form == EquationForm.IDEAL:
        return eq.residual_ideal(state, pot, mass, fbasis, tolerance=tolerance, seed=seed)
    if form == EquationForm.HESTENES:
        return eq.residual_hestenes(state, pot, mass, fbasis.gens.h, fbasis.gens.i2,
                                    tolerance=tolerance, seed=seed)
    if form == EquationForm.TENSOR:
        return eq.residual_tensor(state, pot, mass, fbasis.gens.h, fbasis.gens.i2,
                                  tolerance=tolerance, seed=seed)
    if form == EquationForm.ILK:
        return eq.residual_ilk(state, pot, mass, tolerance=tolerance, seed=seed)
    if form == EquationForm.ILK_EVEN:
        return eq.residual_ilk_even(state, pot, mass, fbasis.gens.h,
                                    tolerance=tolerance, seed=seed)
    return eq.residual_ilk_e5(state, pot, mass, tolerance=tolerance, seed=seed)


def _reduction_report(args, form: EquationForm, fbasis, pot):
    """Check the idempotent reduction identity on a seeded random state."""
    import random as _random

    from . import equations as eq

    if form != EquationForm.ILK:
        raise DomainError("--reduce applies to the general form only")
    rng = _random.Random(args.seed)
    entries = []
    for _ in range(3):
        phase = Poly({tuple(rng.randint(0, 1) for _ in range(4)):
                      float(rng.randint(-2, 2))})
        coeffs = [Poly() for _ in range(16)]
        for _ in range(4):
            mask = rng.randrange(16)
            coeffs[mask] = coeffs[mask] + Poly.constant(
                complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        entries.append((phase, coeffs))
    rho = AnalyticField(FLOAT, entries)
    t_red = eq.reduction_idempotent(args.reduce, fbasis.gens)
    lhs = eq.reduced_operator(args.reduce, rho.mul_const(t_red, side="right"),
                              pot, args.mass, fbasis.gens)
    rhs = eq.ilk_operator(rho, pot, args.mass).mul_const(t_red, side="right")
    diff = lhs - rhs
    gap = 0.0 if diff.is_zero() else max(
        diff.eval(x).max_abs() for x in eq.sample_points(args.seed))
    tol = args.tolerance if args.tolerance is not None else scalars.default_tolerance()
    report = eq.ResidualReport(
        form=form.value, backend="float", max_norm=gap, tolerance=tol,
        verdict="pass" if gap <= tol else "fail", seed=args.seed,
        notes=[f"reduction identity for idempotent {args.reduce}"])
    return report


def _cmd_report(args) -> int:
    paths = list(args.paths)
    if not paths:
        env_dir = os.environ.get(REPORT_DIR_ENV)
        if env_dir and os.path.isdir(env_dir):
            paths = [os.path.join(env_dir, name) for name in sorted(os.listdir(env_dir))
                     if name.endswith(".json")]
    if not paths:
        print("no report files given and none found", file=sys.stderr)
        return EXIT_USAGE
    all_pass = True
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"{path}: unreadable ({exc})", file=sys.stderr)
            return EXIT_USAGE
        if "summary" in data:
            s = data["summary"]
            status = s.get("status", "?")
            print(f"{path}: suite {data.get('suite', '?')} {status} "
                  f"({s.get('passed', '?')}/{s.get('total', '?')})")
            all_pass &= status == "pass"
        elif "verdict" in data:
            print(f"{path}: form {data.get('form', '?')} {data['verdict']} "
                  f"(max_norm {data.get('max_norm')}, tolerance {data.get('tolerance')})")
            all_pass &= data["verdict"] == "pass"
        else:
            print(f"{path}: unknown report layout", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_PASS if all_pass else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stada",
        description="verification harness for the spacetime algebra and the "
                    "equivalent forms of the Dirac equation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run a named verification suite")
    p_verify.add_argument("--suite", default="all", choices=suites.SUITE_NAMES)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--backend", default="exact", choices=("exact", "float"))
    p_verify.add_argument("--iterations", type=int, default=None)
    p_verify.add_argument("--tolerance", type=float, default=None)
    p_verify.add_argument("--report", default=None, metavar="PATH")
    p_verify.set_defaults(func=_cmd_verify)

    p_eval = sub.add_parser("eval", help="evaluate a multivector expression")
    p_eval.add_argument("expression")
    p_eval.add_argument("--basis", default="e", choices=("l", "e"))
    p_eval.add_argument("--backend", default="exact", choices=("exact", "float"))
    p_eval.set_defaults(func=_cmd_eval)

    p_res = sub.add_parser("residual", help="evaluate an equation-form residual")
    p_res.add_argument("--form", required=True,
                       choices=[f.value for f in EquationForm])
    p_res.add_argument("--state", default=None,
                       help="'zero', a field expression, or a grid dump path")
    p_res.add_argument("--plane-wave", default=None, metavar="SPEC",
                       help="generate a free solution, e.g. 'm=1;p=1,0,0,0;sign=1'")
    p_res.add_argument("--potential", "-A", default=None, metavar="EXPR_OR_PATH")
    p_res.add_argument("--mass", "-m", type=float, default=1.0)
    p_res.add_argument("--generators", default="canonical",
                       help="'canonical' or 'random:<seed>'")
    p_res.add_argument("--reduce", default=None, choices=("t-HI", "t-H", "t-e5"),
                       help="check the idempotent reduction identity instead")
    p_res.add_argument("--seed", type=int, default=0)
    p_res.add_argument("--tolerance", type=float, default=None)
    p_res.add_argument("--report", default=None, metavar="PATH")
    p_res.set_defaults(func=_cmd_residual)

    p_rep = sub.add_parser("report", help="summarize stored JSON reports")
    p_rep.add_argument("paths", nargs="*")
    p_rep.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "residual":
        if not args.reduce and not args.plane_wave and args.state is None:
            parser.error("residual needs --state, --plane-wave, or --reduce")
    try:
        return args.func(args)
    except (ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StadaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
