"""Command-line interface.

Exit status: 0 on success, 1 when a law or verification fails, 2 on usage,
parse or type errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import CalculusError
from .fixpoint import build_self_confirming, verify_self_confirming
from .laws import run_laws
from .modeling import ParamModel, SteeringMap, specialize, steer
from .render import render
from .semantics import (DEFAULT_FUEL, dump_kernel, evaluate, function_defects,
                        is_function)
from .syntax import format_type, parse, parse_event, parse_events, serialize
from .terms import typecheck

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
LAW_CASES = 40


class UsageError(Exception):
    pass


def read_term_file(path: str) -> str:
    """Term text with leading ``#`` comment lines blanked out.

    Comments are replaced by spaces of the same byte length so that error
    offsets still point into the original file.
    """
    p = Path(path)
    if not p.exists():
        demos = resources.files("causalcalc") / "demos"
        demo = demos / p.name
        if not demo.is_file():
            demo = demos / (p.name + ".term")
        if not demo.is_file():
            raise UsageError(f"no such file: {path}")
        data = demo.read_bytes()
    else:
        data = p.read_bytes()
    lines = data.split(b"\n")
    for i, line in enumerate(lines):
        if line.lstrip().startswith(b"#"):
            lines[i] = b" " * len(line)
        elif line.strip():
            break
    try:
        return b"\n".join(lines).decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UsageError(f"{path} is not UTF-8: {exc}") from None


def _load(path: str):
    return parse(read_term_file(path))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _fuel(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("fuel must be at least 1")
    return n


def cmd_typecheck(args) -> tuple[int, str]:
    dom, cod = typecheck(_load(args.input))
    return EXIT_OK, f"dom: {format_type(dom)}\ncod: {format_type(cod)}"


def cmd_eval(args) -> tuple[int, str]:
    term = _load(args.input)
    k = evaluate(term, args.fuel)
    probes = parse_events(args.probes, k.dom) if args.probes else None
    return EXIT_OK, dump_kernel(k, probes)


def cmd_check_laws(args) -> tuple[int, str]:
    results = run_laws(args.seed, LAW_CASES)
    lines = [f"seed: {args.seed}"] + [r.line() for r in results]
    ok = all(r.ok for r in results)
    lines.append("all laws pass" if ok else "some laws FAILED")
    return (EXIT_OK if ok else EXIT_FAIL), "\n".join(lines)


def cmd_is_function(args) -> tuple[int, str]:
    k = evaluate(_load(args.input), args.fuel)
    probes = parse_events(args.probes, k.dom) if args.probes else None
    verdict = is_function(k, probes)
    defects = function_defects(k, probes)
    lines = [f"function: {'yes' if verdict else 'no'}"]
    lines += [f"{name}: {'yes' if ok else 'no'}" for name, ok in defects.items()]
    return (EXIT_OK if verdict else EXIT_FAIL), "\n".join(lines)


def cmd_specialize(args) -> tuple[int, str]:
    term = _load(args.input)
    dom, _ = typecheck(term)
    # the value may cover one or several leading factors
    for n in range(1, len(dom) + 1):
        head, _ = dom.split(n)
        try:
            x = parse_event(args.value, head)
        except CalculusError:
            continue
        return EXIT_OK, specialize(serialize(term), x)
    raise UsageError(f"value {args.value!r} does not fit the leading inputs of {dom!r}")


def cmd_steer(args) -> tuple[int, str]:
    model = ParamModel(_load(args.input))
    s_term = _load(args.steering)
    probes = None
    if args.probes:
        probes = tuple(parse_events(args.probes, typecheck(s_term)[0]))
    return EXIT_OK, serialize(steer(model, SteeringMap(s_term, probes)).term)


def cmd_fixpoint(args) -> tuple[int, str]:
    res = build_self_confirming(serialize(_load(args.input)))
    res = verify_self_confirming(res, fuel=args.fuel, epsilon=args.epsilon)
    lines = [f"G: {res.G}", f"Gamma: {res.gamma}", f"fuel: {res.fuel}",
             f"epsilon: {args.epsilon}", res.table()]
    if res.exact:
        lines.append("verdict: exact")
    elif res.passed:
        lines.append("verdict: within epsilon, converging")
    else:
        lines.append("verdict: FAILED" + ("" if res.converging else " (not converging)"))
    return (EXIT_OK if res.passed else EXIT_FAIL), "\n".join(lines)


def cmd_render(args) -> tuple[int, str]:
    return EXIT_OK, render(_load(args.input))


COMMANDS = {
    "typecheck": cmd_typecheck,
    "eval": cmd_eval,
    "check-laws": cmd_check_laws,
    "is-function": cmd_is_function,
    "specialize": cmd_specialize,
    "steer": cmd_steer,
    "fixpoint": cmd_fixpoint,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=_fuel, default=DEFAULT_FUEL,
                        help="apply-unfolding budget (default %(default)s)")
    common.add_argument("--epsilon", type=_fraction, default=Fraction(0),
                        help="tolerated discrepancy, as P/Q (default 0)")
    common.add_argument("--probes", help='input events, e.g. "(0 1 (pair 1 0))"')
    common.add_argument("--seed", type=int, default=0, help="random seed for check-laws")
    common.add_argument("--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="causalcalc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "check-laws":
            continue
        p.add_argument("input", help="term file (or the name of a shipped demo)")
        if name == "specialize":
            p.add_argument("value", help="value for the leading input(s), e.g. 1 or (pair 0 1)")
        if name == "steer":
            p.add_argument("steering", help="term file holding the steering function")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status, report = COMMANDS[args.command](args)
    except (CalculusError, UsageError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        Path(args.output).write_text(report + "\n", encoding="utf-8")
    else:
        print(report)
    return status


if __name__ == "__main__":
    sys.exit(main())
