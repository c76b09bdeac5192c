"""Command-line interface.

Exit codes: 0 success, 1 parse or usage error, 2 unsupported computation
(a coefficient would have to pass a power operation in the universal preset,
or a pairing was requested outside the closed presets), 3 verification
failure, 4 rewrite budget exhausted.
"""

from __future__ import annotations

import argparse
import inspect
import sys
from typing import Sequence

from . import textio
from .classical import ClassicalElement, classical_normalize, realize
from .coefficients import CoefficientRing, Preset
from .dual_hopf import GammaElement, antipode, coproduct, counit, milnor_basis
from .milnor_pairing import UnsupportedPreset, pair_element, pairing_matrix
from .steenrod_ops import (
    DEFAULT_FUEL,
    FuelExhausted,
    OpElement,
    UnsupportedScalarCommutation,
    admissible_words,
    normalize,
    op_basis,
    op_bidegree,
    op_multiply,
)
from .verify import SUITES, run_verify

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_VERIFY, EXIT_FUEL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bidegree(text: str) -> tuple[int, int]:
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P,Q but got {text!r}") from None
    return (p, q)


def _read(arg: str) -> str:
    """An element argument, or ``@path`` to read it from a file."""
    if arg.startswith("@"):
        try:
            with open(arg[1:], encoding="utf-8") as fh:
                return fh.read().strip()
        except OSError as exc:
            raise UsageError(f"cannot read {arg[1:]}: {exc.strerror}") from None
    return arg


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text_lines, data):
        if self.fmt == "structured":
            print(textio.dumps(data), file=self.stream)
        else:
            for line in text_lines:
                print(line, file=self.stream)


def _ring(args) -> CoefficientRing:
    try:
        return CoefficientRing(args.prime, Preset(args.preset))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse(args, text: str, mode: str):
    return textio.parse_element(_read(text), mode, _ring(args))


# ---------------------------------------------------------------------------
# commands


def cmd_mul(args, out: Output) -> int:
    if args.classical:
        words = [_parse(args, t, "classical") for t in args.elements]
        acc = words[0]
        for w in words[1:]:
            acc = ClassicalElement(
                acc.prime, [(u + v, a * b) for u, a in acc.terms for v, b in w.terms]
            )
        result = classical_normalize(acc, fuel=args.fuel)
    else:
        elems = [_parse(args, t, "op") for t in args.elements]
        result = normalize(elems[0], fuel=args.fuel)
        for e in elems[1:]:
            result = op_multiply(result, e, fuel=args.fuel)
    out.emit([textio.format_element(result)], textio.element_data(result))
    return EXIT_OK


def cmd_normalize(args, out: Output) -> int:
    if args.classical:
        result = classical_normalize(_parse(args, args.element, "classical"), fuel=args.fuel)
    else:
        result = normalize(_parse(args, args.element, "op"), fuel=args.fuel)
    out.emit([textio.format_element(result)], textio.element_data(result))
    return EXIT_OK


def cmd_realize(args, out: Output) -> int:
    x = _parse(args, args.element, "op")
    if args.normalize:
        x = normalize(x, fuel=args.fuel)
    result = realize(x)
    out.emit([textio.format_element(result)], textio.element_data(result))
    return EXIT_OK


def _bidegrees(args) -> list[tuple[int, int]]:
    if args.bidegree is not None:
        return [args.bidegree]
    if args.max_p is None:
        raise UsageError("give --bidegree P,Q or --max-p N")
    return [(p, q) for p in range(args.max_p + 1) for q in range(p + 1)]


def cmd_basis(args, out: Output) -> int:
    ring = _ring(args)
    rows, lines = [], []
    for p, q in _bidegrees(args):
        ops = op_basis(p, q, ring.prime) if args.kind in ("op", "both") else []
        duals = milnor_basis(p, q, ring.prime) if args.kind in ("dual", "both") else []
        if args.bidegree is None and not ops and not duals:
            continue
        entry = {"bidegree": [p, q]}
        if args.kind in ("op", "both"):
            entry["op"] = [textio.word_data(w) for w in ops]
            lines.append(f"({p},{q}) op [{len(ops)}]: " + ", ".join(textio.format_word(w, ring.prime) for w in ops))
        if args.kind in ("dual", "both"):
            entry["dual"] = [textio.milnor_data(m) for m in duals]
            lines.append(f"({p},{q}) dual [{len(duals)}]: " + ", ".join(textio.format_milnor(m) for m in duals))
        rows.append(entry)
    data = {"prime": ring.prime, "preset": ring.preset.value, "mode": "basis", "bidegrees": rows}
    out.emit(lines, data)
    return EXIT_OK


def cmd_coproduct(args, out: Output) -> int:
    result = coproduct(_parse(args, args.element, "dual"))
    out.emit([textio.format_tensor(result)], textio.element_data(result))
    return EXIT_OK


def cmd_antipode(args, out: Output) -> int:
    result = antipode(_parse(args, args.element, "dual"))
    out.emit([textio.format_gamma(result)], textio.element_data(result))
    return EXIT_OK


def cmd_counit(args, out: Output) -> int:
    result = counit(_parse(args, args.element, "dual"))
    out.emit([textio.format_scalar(result)], textio.element_data(result))
    return EXIT_OK


def cmd_pair(args, out: Output) -> int:
    x = _parse(args, args.operation, "op")
    d: GammaElement = _parse(args, args.dual, "dual")
    ring = x.ring
    total = ring.zero
    for m, c in d.terms:
        total = total + c * pair_element(x, m)
    out.emit([textio.format_scalar(total)], textio.element_data(total))
    return EXIT_OK


def cmd_pairing_matrix(args, out: Output) -> int:
    ring = _ring(args)
    if ring.preset is not Preset.CLOSED:
        raise UnsupportedPreset("pairing matrices are only defined for closed presets")
    lines, mats = [], []
    for p, q in _bidegrees(args):
        if args.bidegree is None and not op_basis(p, q, ring.prime):
            continue
        mat = pairing_matrix(p, q, ring.prime)
        col_names = [textio.format_milnor(m) for m in mat.cols]
        row_names = [textio.format_word(w, ring.prime) for w in mat.rows]
        width = max([len(n) for n in row_names] + [1])
        lines.append(f"({p},{q}) invertible={mat.invertible}")
        lines.append(" " * width + " | " + " | ".join(col_names))
        for name, row in zip(row_names, mat.entries):
            cells = [str(v).rjust(len(c)) for v, c in zip(row, col_names)]
            lines.append(name.ljust(width) + " | " + " | ".join(cells))
        mats.append(
            {
                "bidegree": [p, q],
                "rows": [textio.word_data(w) for w in mat.rows],
                "cols": [textio.milnor_data(m) for m in mat.cols],
                "entries": [list(r) for r in mat.entries],
                "invertible": mat.invertible,
            }
        )
    out.emit(lines, {"prime": ring.prime, "preset": ring.preset.value, "mode": "pairing-matrix", "matrices": mats})
    return EXIT_OK


def cmd_table(args, out: Output) -> int:
    ring = _ring(args)
    if args.max_degree is None:
        raise UsageError("table needs --max-degree N")
    l = ring.prime
    words = [w for d in range(0, args.max_degree + 1) for w in admissible_words(l, d)]
    entries, lines = [], []
    for u in words:
        for v in words:
            if op_bidegree(u, l)[0] + op_bidegree(v, l)[0] > args.max_degree:
                continue
            prod = op_multiply(OpElement.monomial(ring, u), OpElement.monomial(ring, v), fuel=args.fuel)
            entries.append(
                {"left": textio.word_data(u), "right": textio.word_data(v), "product": textio.element_data(prod)["terms"]}
            )
            lines.append(f"{textio.format_word(u, l)} * {textio.format_word(v, l)} = {prod}")
    data = {"prime": l, "preset": ring.preset.value, "mode": "table", "max_degree": args.max_degree, "entries": entries}
    out.emit(lines, data)
    return EXIT_OK


def cmd_verify(args, out: Output) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    fn = SUITES[args.suite]
    accepted = inspect.signature(fn).parameters
    offered = {
        "prime": args.prime,
        "preset": args.preset,
        "max_degree": args.max_degree,
        "max_p": args.max_p,
        "samples": args.samples,
        "seed": args.seed,
        "fuel": args.fuel,
        "jobs": args.jobs,
        "slot": args.slot,
    }
    params = {k: v for k, v in offered.items() if k in accepted and v is not None}
    if args.suite == "adem-oracle":
        params.pop("preset", None)
    try:
        _ring(args)
        report = run_verify(args.suite, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.emit(report.lines() + [("PASS" if report.passed else "FAIL")], report.as_data())
    return EXIT_OK if report.passed else EXIT_VERIFY


COMMANDS = {
    "mul": cmd_mul,
    "normalize": cmd_normalize,
    "basis": cmd_basis,
    "coproduct": cmd_coproduct,
    "antipode": cmd_antipode,
    "counit": cmd_counit,
    "pair": cmd_pair,
    "pairing-matrix": cmd_pairing_matrix,
    "realize": cmd_realize,
    "verify": cmd_verify,
    "table": cmd_table,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=2, metavar="L")
    common.add_argument("--preset", choices=[p.value for p in Preset], default="closed")
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, metavar="N")

    parser = _Parser(prog="motivic-steenrod", description="Mod-l motivic Steenrod algebra calculator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("mul", "product of operations, normalized")
    p.add_argument("elements", nargs="+", metavar="ELEMENT")
    p.add_argument("--classical", action="store_true", help="use the topological algebra")
    p = add("normalize", "admissible normal form")
    p.add_argument("element")
    p.add_argument("--classical", action="store_true", help="use the topological algebra")
    p = add("realize", "set rho = 0, tau = 1")
    p.add_argument("element")
    p.add_argument("--normalize", action="store_true", help="normalize before realizing")
    for name, help_text in (("basis", "admissible / Milnor bases"), ("pairing-matrix", "pairing matrices")):
        p = add(name, help_text)
        p.add_argument("--bidegree", type=_bidegree, metavar="P,Q")
        p.add_argument("--max-p", type=int, metavar="N")
        if name == "basis":
            p.add_argument("--kind", choices=["op", "dual", "both"], default="both")
    for name in ("coproduct", "antipode", "counit"):
        p = add(name, f"{name} of a dual element")
        p.add_argument("element")
    p = add("pair", "evaluate an operation on a dual element")
    p.add_argument("operation")
    p.add_argument("dual")
    p = add("table", "multiplication table of admissible monomials")
    p.add_argument("--max-degree", type=int, metavar="N")
    p = add("verify", "run a verification suite")
    p.add_argument("suite", help=", ".join(sorted(SUITES)))
    p.add_argument("--max-degree", type=int, metavar="N")
    p.add_argument("--max-p", type=int, metavar="N")
    p.add_argument("--samples", type=int, metavar="N")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--slot", choices=["left", "right"], help="pairing order for cross-model")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format)
    try:
        return COMMANDS[args.command](args, out)
    except textio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedScalarCommutation, UnsupportedPreset) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except FuelExhausted as exc:
        print(f"rewrite budget exhausted: {exc}", file=sys.stderr)
        return EXIT_FUEL


if __name__ == "__main__":
    sys.exit(main())
