#!/usr/bin/env python3
"""CLI entry point for the p-adic laboratory."""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .backends import BackendName, make_backend
from .casestudies.adaptive import adaptive_sqrt, sqrt_experiment
from .casestudies.bezout import bezout_experiment, bezout_jacobian
from .casestudies.fixtures import bezout_pair, degree8_polynomial, matrix_m
from .casestudies.hilbert import hilbert_experiment
from .casestudies.interpolation import interpolation_experiment
from .casestudies.linalg import (
    charpoly_experiment,
    charpoly_jacobian,
    det_experiment,
    det_jacobian,
    lu_experiment,
    lu_jacobian,
)
from .casestudies.powers import xp_experiment
from .casestudies.report import ExperimentReport
from .casestudies.somos import SomosMode, somos
from .casestudies.suite import EXPERIMENTS, run_suite
from .core import (
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    format_digits,
    parse_scalar,
    print_scalar,
    to_base_p,
)
from .errors import PadicError, PrecisionFailure
from .lattice import (
    ForwardPrecision,
    PMatrix,
    hermite_nf,
    parse_matrix,
    propagate_backward,
    propagate_forward,
)
from .newton import (
    PPolynomial,
    SqrtMode,
    hensel_lift,
    newton_inverse,
    padic_sqrt,
    parse_polynomial,
)
from .pfloat import PFloatSystem

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECISION = 2

ADAPTIVE = "adaptive"
# Short spellings accepted by --backend.
BACKEND_ALIASES = {"rational": BackendName.RATIONAL}


class OutputFormat(Enum):
    TABLE = "table"
    TSV = "tsv"


class CliUsageError(Exception):
    """Bad flags or arguments; reported with exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise CliUsageError(f"{self.prog}: error: {message}")


@dataclass(frozen=True)
class CliConfig:
    """Validated global options shared by every subcommand."""

    ctx: PrimeContext
    prec: int
    backend: BackendName
    command: str
    output: OutputFormat
    style: ScalarStyle
    verbose: int = 0
    jobs: int = 1

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        if args.prec < 1:
            raise CliUsageError(f"--prec must be positive, got {args.prec}")
        if args.jobs < 1:
            raise CliUsageError(f"--jobs must be positive, got {args.jobs}")
        return cls(
            ctx=PrimeContext(args.p),
            prec=args.prec,
            backend=BACKEND_ALIASES.get(args.backend) or BackendName(args.backend),
            command=args.command,
            output=OutputFormat(args.format),
            style=ScalarStyle(args.style),
            verbose=args.verbose,
            jobs=args.jobs,
        )


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="The prime p (default: 2)")
    common.add_argument("--prec", type=int, default=10, help="Working precision N (default: 10)")
    common.add_argument(
        "--backend",
        choices=[b.value for b in BackendName] + list(BACKEND_ALIASES),
        default=BackendName.ZEALOUS.value,
        help="Arithmetic backend for primitives that take one (default: zealous)",
    )
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TABLE.value,
        help="Report output: 'table' for a rich table, 'tsv' for golden-file text (default: table)",
    )
    common.add_argument(
        "--style",
        choices=[s.value for s in ScalarStyle],
        default=ScalarStyle.DIGITS.value,
        help="Scalar rendering style (default: digits)",
    )
    common.add_argument(
        "--fixture",
        action="store_true",
        help="Use the packaged worked-example input instead of standard input",
    )
    common.add_argument(
        "-v",
        "--verbose",
        type=int,
        nargs="?",
        const=1,  # Default level when --verbose is used without a value
        default=0,
        help="Verbose output level: 1=progress, 2=detailed (default: 0)",
    )
    common.add_argument("--jobs", type=int, default=1, help="Parallel experiments for 'suite'")
    return common


def create_argument_parser() -> argparse.ArgumentParser:
    """Create and configure the command-line argument parser."""
    common = _common_options()
    parser = _Parser(
        prog="padiclab",
        description="Run p-adic arithmetic primitives and precision experiments",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return commands.add_parser(name, parents=[common], help=help_text)

    command("expand", "Base-p digits of a nonnegative integer").add_argument("n", type=int)

    sqrt = command("sqrt", "Square root by Newton's method")
    sqrt.add_argument("literal", help="Scalar literal, e.g. '17 + O(2^20)'")
    sqrt.add_argument(
        "--mode",
        choices=[m.value for m in SqrtMode] + [ADAPTIVE],
        default=SqrtMode.ZERO_LIFT.value,
    )
    sqrt.add_argument("--report", action="store_true", help="Compare every mode")

    command("inv", "Inverse by Newton iteration").add_argument("literal")

    hensel = command("hensel", "Lift a root of a polynomial (coefficients leading first)")
    hensel.add_argument("polynomial", help="e.g. '1,0,1' for X^2 + 1")
    hensel.add_argument("seed")

    for name in ("det", "charpoly", "lu"):
        command(name, f"{name} experiment on a matrix read from standard input")
    command("bezout", "Bezout experiment on two monic polynomials (one per input line)")
    command("interp", "Evaluation/interpolation round trip of a polynomial")
    command("hilbert", "Invert a Hilbert matrix in p-adic floating point").add_argument(
        "n", type=int
    )

    somos_parser = command("somos", "Somos 4 sequence term u_n")
    for seed in ("a", "b", "c", "d"):
        somos_parser.add_argument(seed, type=Fraction)
    somos_parser.add_argument("n", type=int)
    somos_parser.add_argument(
        "--mode", choices=[m.value for m in SomosMode], default=SomosMode.RATIONAL.value
    )
    somos_parser.add_argument("--report", action="store_true", help="Print the per-term report")

    command("hnf", "Hermite normal form of a matrix read from standard input")
    command("jacobian", "Jacobian of a worked-example map").add_argument(
        "which", choices=sorted(JACOBIANS)
    )
    precision = command("precision", "Propagate precision through a Jacobian from standard input")
    precision.add_argument("direction", choices=["forward", "backward"])
    precision.add_argument(
        "--exponents", help="Comma-separated input (forward) or target (backward) precisions"
    )

    xp = command("xp", "x^(p^k) through p-th powers against repeated multiplication")
    xp.add_argument("literal")
    xp.add_argument("--k", type=int, default=1)

    suite = command("suite", "Run named experiments (default: all)")
    suite.add_argument("names", nargs="*", metavar="NAME", help=f"One of: {', '.join(EXPERIMENTS)}")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit status."""
    parser = create_argument_parser()
    try:
        args = parser.parse_args(argv)
        config = CliConfig.from_args(args)
    except CliUsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PadicError as exc:
        print(f"padiclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    _configure_logging(config.verbose)
    try:
        HANDLERS[config.command](args, config)
    except PrecisionFailure as exc:
        print(f"padiclab: precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (PadicError, ValueError, CliUsageError) as exc:
        print(f"padiclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    root = logging.getLogger("padiclab")
    root.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        root.addHandler(RichHandler(console=Console(stderr=True), show_path=False))


def _read_stdin() -> str:
    text = sys.stdin.read().strip()
    if not text:
        raise CliUsageError("expected input on standard input (or pass --fixture)")
    return text


def _read_matrix(args: argparse.Namespace, config: CliConfig) -> PMatrix:
    if args.fixture:
        return matrix_m()
    return parse_matrix(";".join(_read_stdin().splitlines()), config.ctx)


def _read_polynomials(config: CliConfig, count: int) -> list[PPolynomial]:
    lines = [line for line in _read_stdin().splitlines() if line.strip()]
    if len(lines) != count:
        raise CliUsageError(f"expected {count} polynomial line(s), got {len(lines)}")
    return [parse_polynomial(line, config.ctx) for line in lines]


def _read_scalar(text: str, config: CliConfig) -> PadicScalar:
    """Literal at O(p^N) when written without a precision."""
    x = parse_scalar(text, config.ctx)
    return x.with_precision(config.prec) if x.is_exact else x


def _emit(report: ExperimentReport, config: CliConfig) -> None:
    match config.output:
        case OutputFormat.TSV:
            sys.stdout.write(report.to_tsv())
        case OutputFormat.TABLE:
            report.print_table(Console())


def _print_value(x: PadicScalar, config: CliConfig) -> None:
    print(print_scalar(x, config.style))


def _expand(args: argparse.Namespace, config: CliConfig) -> None:
    if args.n < 0:
        raise CliUsageError(f"expand needs a nonnegative integer, got {args.n}")
    print(format_digits(to_base_p(args.n, config.ctx)[::-1] or [0], config.ctx))


def _sqrt(args: argparse.Namespace, config: CliConfig) -> None:
    c = _read_scalar(args.literal, config)
    if args.report:
        _emit(sqrt_experiment(c), config)
        return
    root = adaptive_sqrt(c) if args.mode == ADAPTIVE else padic_sqrt(c, SqrtMode(args.mode))
    _print_value(root, config)


def _inv(args: argparse.Namespace, config: CliConfig) -> None:
    x = _read_scalar(args.literal, config)
    if config.backend is BackendName.ZEALOUS:
        _print_value(newton_inverse(x), config)
        return
    backend = make_backend(config.backend, config.ctx, config.prec)
    print(backend.render(backend.div(backend.one(), backend.from_scalar(x))))


def _hensel(args: argparse.Namespace, config: CliConfig) -> None:
    f = parse_polynomial(args.polynomial, config.ctx)
    seed = parse_scalar(args.seed, config.ctx)
    _print_value(hensel_lift(f, seed, config.prec), config)


def _matrix_experiment(
    experiment: Callable[[PMatrix, int], ExperimentReport],
) -> Callable[[argparse.Namespace, CliConfig], None]:
    def handler(args: argparse.Namespace, config: CliConfig) -> None:
        _emit(experiment(_read_matrix(args, config), config.prec), config)

    return handler


def _bezout(args: argparse.Namespace, config: CliConfig) -> None:
    P, Q = bezout_pair() if args.fixture else _read_polynomials(config, 2)
    _emit(bezout_experiment(P, Q, config.prec), config)


def _interp(args: argparse.Namespace, config: CliConfig) -> None:
    (P,) = (degree8_polynomial(),) if args.fixture else _read_polynomials(config, 1)
    _emit(interpolation_experiment(P, config.prec), config)


def _hilbert(args: argparse.Namespace, config: CliConfig) -> None:
    _emit(hilbert_experiment(args.n, PFloatSystem(config.ctx, config.prec)), config)


def _somos(args: argparse.Namespace, config: CliConfig) -> None:
    seeds = (args.a, args.b, args.c, args.d)
    result = somos(seeds, args.n, SomosMode(args.mode), config.ctx, config.prec)
    if args.report:
        _emit(result.report, config)
    else:
        print(result.render())


def _print_matrix(M: PMatrix, config: CliConfig) -> None:
    for row in M.rows:
        print(",".join(print_scalar(x, config.style) for x in row))


def _hnf(args: argparse.Namespace, config: CliConfig) -> None:
    _print_matrix(hermite_nf(_read_matrix(args, config)).form, config)


JACOBIANS: dict[str, Callable[[argparse.Namespace, CliConfig], PMatrix]] = {
    "det": lambda args, config: det_jacobian(_read_matrix(args, config)),
    "charpoly": lambda args, config: charpoly_jacobian(_read_matrix(args, config)),
    "lu": lambda args, config: lu_jacobian(_read_matrix(args, config)),
    "bezout": lambda args, config: bezout_jacobian(
        *(bezout_pair() if args.fixture else _read_polynomials(config, 2))
    ),
}


def _jacobian(args: argparse.Namespace, config: CliConfig) -> None:
    _print_matrix(JACOBIANS[args.which](args, config), config)


def _exponents(text: str | None, size: int, default: int) -> list[int]:
    if text is None:
        return [default] * size
    values = [int(x) for x in text.split(",")]
    if len(values) != size:
        raise CliUsageError(f"expected {size} exponents, got {len(values)}")
    return values


def _precision(args: argparse.Namespace, config: CliConfig) -> None:
    J = _read_matrix(args, config)
    if args.direction == "forward":
        result = propagate_forward(J, _exponents(args.exponents, J.nrows, config.prec))
        _emit_forward(result, config)
        return
    needed = propagate_backward(J, _exponents(args.exponents, J.ncols, config.prec))
    print("\t".join("-" if n is None else str(n) for n in needed))


def _emit_forward(result: ForwardPrecision, config: CliConfig) -> None:
    diffused = None if result.image is None else result.diffused_digits
    if config.output is OutputFormat.TSV:
        print("\t".join(map(str, result.precisions)))
        if diffused is not None:
            print(f"diffused_digits\t{diffused}")
        return
    table = Table(title=f"forward precision ({config.ctx})")
    table.add_column("output", style="cyan")
    table.add_column("precision")
    for j, prec in enumerate(result.precisions):
        table.add_row(str(j), str(prec))
    console = Console()
    console.print(table)
    if diffused is not None:
        console.print(f"diffused digits: {diffused}")


def _xp(args: argparse.Namespace, config: CliConfig) -> None:
    _emit(xp_experiment(_read_scalar(args.literal, config), args.k), config)


def _suite(args: argparse.Namespace, config: CliConfig) -> None:
    unknown = [name for name in args.names if name not in EXPERIMENTS]
    if unknown:
        raise CliUsageError(f"unknown experiment(s): {', '.join(unknown)}")
    reports = run_suite(args.names or None, config.jobs)
    for report in reports:
        if config.output is OutputFormat.TSV:
            print(f"# {report.experiment}")
        _emit(report, config)


HANDLERS: dict[str, Callable[[argparse.Namespace, CliConfig], None]] = {
    "expand": _expand,
    "sqrt": _sqrt,
    "inv": _inv,
    "hensel": _hensel,
    "det": _matrix_experiment(det_experiment),
    "charpoly": _matrix_experiment(charpoly_experiment),
    "lu": _matrix_experiment(lu_experiment),
    "bezout": _bezout,
    "interp": _interp,
    "hilbert": _hilbert,
    "somos": _somos,
    "hnf": _hnf,
    "jacobian": _jacobian,
    "precision": _precision,
    "xp": _xp,
    "suite": _suite,
}


if __name__ == "__main__":
    sys.exit(main())
