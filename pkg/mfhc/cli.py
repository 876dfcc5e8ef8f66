"""mfhc command line.

Exit codes: 0 success, 1 failing property, 2 usage or parse error,
3 out-of-scope request (integral weights in classify).
"""

import argparse
import sys
from pathlib import Path
from typing import Callable

from pydantic import ValidationError

from mfhc.config import config
from mfhc.errors import MfhcError, ParseError, WeightError
from mfhc.logging import get_logger
from mfhc.schemas.expansion import ExpansionOut, expansion_from_model, expansion_to_model
from mfhc.schemas.modules import diagram_to_model, module_to_model
from mfhc.schemas.reports import (
    dump_json,
    element_to_model,
    hurwitz_to_model,
    pair,
    suite_to_model,
    weil_to_model,
)
from mfhc.services import arith, forms, hcmodule, metaplectic, operators, qexp, verify, weil
from mfhc.services.coefficient import HalfInteger
from mfhc.services.diagrams import DEFAULT_WINDOW, ktype_diagram, render_ascii
from mfhc.services.qexp import Expansion
from mfhc.utils.numbers import format_fraction, parse_fraction

logger = get_logger("cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_OUT_OF_SCOPE = 3

FORM_TAGS = ("e2star", "e32star", "shintani")


def _out(text: str) -> None:
    print(text)


def _parse_tau(text: str) -> complex:
    try:
        tau = complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ParseError(f"not a complex number: {text!r}") from None
    return tau


def _load_expansion(args: argparse.Namespace) -> Expansion:
    if getattr(args, "input", None):
        path = Path(args.input)
        try:
            model = ExpansionOut.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValidationError) as exc:
            raise ParseError(f"cannot read expansion from {path}: {exc}") from exc
        return expansion_from_model(model)
    return _build_form(args.form, args)


def _build_form(tag: str, args: argparse.Namespace) -> Expansion:
    d_max = args.dmax if args.dmax is not None else config.DMAX
    n_max = args.nmax if args.nmax is not None else config.NMAX
    if tag == "e2star":
        return forms.build_e2star(n_max)
    if tag == "e32star":
        return forms.build_e32star(d_max, n_max)
    if tag == "shintani":
        return forms.shintani_rhs(args.delta, d_max, n_max)
    raise ParseError(f"unknown form {tag!r}; expected one of {FORM_TAGS}")


def _print_expansion(e: Expansion, as_json: bool) -> None:
    _out(dump_json(expansion_to_model(e)) if as_json else str(e))


# -- subcommands ------------------------------------------------------------------


def run_classify(args: argparse.Namespace) -> int:
    if args.example:
        module, diagram = forms.classify_example(args.example)
    else:
        if args.weight is None:
            raise ParseError("classify needs --weight or --example")
        k = HalfInteger.parse(args.weight)
        try:
            module = hcmodule.classify_form_module(k, args.lowering == "nonzero")
        except WeightError as exc:
            print(
                f"out of scope: {exc}. Integral weights follow the nine cases "
                "(I–IV) of the SL₂(ℝ) classification of harmonic weak Maaß forms.",
                file=sys.stderr,
            )
            return EXIT_OUT_OF_SCOPE
        diagram = ktype_diagram(module, window=args.window)
    if args.json:
        _out(dump_json({"module": module_to_model(module), "diagram": diagram_to_model(diagram)}))
    else:
        _out(render_ascii(diagram).rstrip("\n"))
        _out(module.describe())
    return EXIT_OK


def run_psdecomp(args: argparse.Namespace) -> int:
    module = hcmodule.ps_decompose(HalfInteger.parse(args.epsilon), parse_fraction(args.nu))
    _out(dump_json(module_to_model(module)) if args.json else module.describe())
    return EXIT_OK


def _operator_name(args: argparse.Namespace) -> str:
    if args.name and args.name_flag and args.name != args.name_flag:
        raise ParseError(f"operator given twice: {args.name!r} and --name {args.name_flag!r}")
    name = args.name or args.name_flag
    if not name:
        raise ParseError("op needs an operator name")
    return name


def run_op(args: argparse.Namespace) -> int:
    f = _load_expansion(args)
    if args.weight is not None:
        f = qexp.with_weight(f, HalfInteger.parse(args.weight))
    image = operators.apply_operator(_operator_name(args), f)
    _print_expansion(image, args.json)
    return EXIT_OK


def run_build(args: argparse.Namespace) -> int:
    _print_expansion(_build_form(args.form, args), args.json)
    return EXIT_OK


def run_eval(args: argparse.Namespace) -> int:
    f = _load_expansion(args)
    tau = _parse_tau(args.tau)
    value = qexp.eval_numeric(f, tau)
    if args.json:
        _out(dump_json({"tau": list(pair(tau)), "value": list(pair(value))}))
    else:
        _out(f"f({tau}) = {value}")
    return EXIT_OK


def run_hurwitz(args: argparse.Namespace) -> int:
    table = arith.hurwitz_table(args.dmax, args.workers)
    if args.json:
        _out(dump_json(hurwitz_to_model(args.dmax, table)))
    else:
        for D, h in table.items():
            _out(f"H({D}) = {format_fraction(h)}")
    return EXIT_OK


def run_mp(args: argparse.Namespace) -> int:
    x = metaplectic.parse_element(args.x)
    if args.action in ("multiply", "mul"):
        if not args.y:
            raise ParseError(f"{args.action} needs --y")
        results = {"product": metaplectic.multiply(x, metaplectic.parse_element(args.y))}
    elif args.action == "inverse":
        results = {"inverse": metaplectic.inverse(x)}
    else:
        n, m, k = metaplectic.nmk_decompose(x)
        results = {"n": n, "m": m, "k": k}
    if args.json:
        _out(dump_json({name: element_to_model(e) for name, e in results.items()}))
    else:
        for name, e in results.items():
            _out(f"{name}: {e}")
    return EXIT_OK


def run_weil(args: argparse.Namespace) -> int:
    fqm = weil.FiniteQuadraticModule.parse(args.fqm)
    report = weil.check_relations(fqm, args.normalization)
    if args.json:
        t = weil.rho_T(fqm)
        s = weil.rho_S(fqm, args.normalization, sigma=report.sigma)
        _out(dump_json(weil_to_model(fqm, report, t, s)))
    else:
        root = "not an eighth root" if report.eighth_root is None else f"e(-{report.eighth_root}/8)"
        _out(f"module {report.module}  |M| = {fqm.order}  σ = {report.sigma:.12f} ({root})")
        for c in report.checks:
            _out(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<22} {c.deviation:.3e}")
    return EXIT_OK if report.passed else EXIT_FAILED


def run_verify(args: argparse.Namespace) -> int:
    suite = args.suite or args.suite_name or "all"
    reports = verify.run_suites(suite, delta=args.delta, d_max=args.dmax, n_max=args.nmax)
    if args.json:
        _out(dump_json([suite_to_model(r) for r in reports]))
    else:
        for r in reports:
            for c in r.checks:
                _out(f"{'PASS' if c.passed else 'FAIL'}  {r.suite:<12} {c.name:<30} {c.deviation:.3e}  {c.detail}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


# -- parser -----------------------------------------------------------------------


def _add_form_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", "--in", dest="input", help="Path to an expansion JSON file")
    src.add_argument("--form", choices=FORM_TAGS, help="Built-in form")
    _add_truncation(p)


def _add_truncation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dmax", type=int, default=None, help=f"Hurwitz truncation (default {config.DMAX})")
    p.add_argument("--nmax", type=int, default=None, help=f"Non-holomorphic truncation (default {config.NMAX})")
    p.add_argument("--delta", type=int, default=-3, help="Negative fundamental discriminant (shintani)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfhc", description="Harmonic weak Maaß forms and Harish-Chandra modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="Emit JSON on stdout")
        p.set_defaults(handler=handler)
        return p

    p = command("classify", run_classify, "Classify ϖ(f, k) and draw its K-types")
    p.add_argument("--weight", help='Half-integral weight, e.g. "3/2"')
    p.add_argument("--lowering", choices=("zero", "nonzero"), default="nonzero")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    p.add_argument("--example", choices=forms.EXAMPLE_TAGS, help="Classify a built-in example instead")

    p = command("psdecomp", run_psdecomp, "Composition structure of I(ε, ν)")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--nu", required=True)

    p = command("op", run_op, "Apply a differential operator symbolically")
    operator_names = sorted(operators.SYMBOLIC)
    p.add_argument("name", nargs="?", choices=operator_names)
    p.add_argument("--name", dest="name_flag", choices=operator_names, help="Operator, same as the positional")
    p.add_argument("--weight", help="Set or override the weight of the input")
    _add_form_source(p)

    p = command("build", run_build, "Build E₂*, E*₃⁄₂ or the Shintani right-hand side")
    p.add_argument("form", choices=FORM_TAGS)
    _add_truncation(p)

    p = command("eval", run_eval, "Evaluate an expansion at τ")
    p.add_argument("--tau", required=True, help='e.g. "0.1+1.2j"')
    _add_form_source(p)

    p = command("hurwitz", run_hurwitz, "Hurwitz class numbers H(0..dmax)")
    p.add_argument("--dmax", "--max", dest="dmax", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)

    p = command("mp", run_mp, "Arithmetic in Mp₁(ℝ)")
    p.add_argument("action", choices=("multiply", "mul", "inverse", "nmk"))
    p.add_argument("--x", required=True, help='"id", "n:2", "k:1.57", "m:2:+1", "m:-1:i"')
    p.add_argument("--y")

    p = command("weil", run_weil, "Weil representation of a finite quadratic module")
    p.add_argument("--fqm", required=True, help='e.g. "Z/2:1/4 + Z/4:1/8"')
    p.add_argument("--normalization", choices=("relation", "displayed"), default="relation")

    p = command("verify", run_verify, "Run property suites")
    p.add_argument("suite_name", nargs="?", choices=verify.SUITES + ("all",), help="Suite, same as --suite")
    p.add_argument("--suite", choices=verify.SUITES + ("all",), default=None)
    _add_truncation(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logger.info("command=%s", args.command)
    try:
        return args.handler(args)
    except MfhcError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
