#!/usr/bin/env python3
"""
Somos 4 sequences u_{n+4} = (u_{n+1} u_{n+3} + u_{n+2}^2) / u_n.

The terms are Laurent polynomials in the seeds, so with unit seeds every term
is a p-adic integer, yet the naive recurrence divides by terms that may be
highly divisible by p. The stabilized modes re-lift the window before each
step by the valuations of the next window and lose nothing overall.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ..backends import Backend, PFloatBackend, RelaxedBackend, ZealousBackend
from ..core import PadicScalar, PrimeContext, ScalarStyle, print_scalar
from ..errors import DomainError, InexactZeroDivision, PrecisionError
from ..lattice import PMatrix, PrecisionLattice
from ..pfloat import PFloat, PFloatSystem
from ..relaxed import LazyNumber, LazyOracle
from ..zealous import zadd, zdiv, zmul
from .adaptive import LiftPlan, State, Step, StepChain, run_adaptive
from .report import ExperimentReport

log = logging.getLogger(__name__)


class SomosMode(Enum):
    NAIVE_ZEALOUS = "naive-zealous"
    NAIVE_PFLOAT = "naive-pfloat"
    NAIVE_LAZY = "naive-lazy"
    STABILIZED_ZEALOUS = "stabilized-zealous"
    STABILIZED_LAZY = "stabilized-lazy"
    RATIONAL = "rational-oracle"


@dataclass
class SomosResult:
    value: PadicScalar | PFloat
    report: ExperimentReport
    # Digits of each seed requested by the lazy modes.
    demand: tuple[int, ...] = ()

    def render(self) -> str:
        if isinstance(self.value, PFloat):
            return str(self.value)
        return print_scalar(self.value, ScalarStyle.POSITIONAL)


def somos_exact(seeds: Sequence[Fraction | int], n: int) -> list[Fraction]:
    """u_1, ..., u_n over the rationals."""
    terms = [Fraction(s) for s in seeds]
    while len(terms) < n:
        x, y, z, t = terms[-4:]
        terms.append((y * t + z * z) / x)
    return terms[:n]


def _naive_terms[T](seeds: Sequence[T], n: int, backend: Backend[T]) -> Iterator[tuple[int, T]]:
    window = list(seeds)
    for k in range(5, n + 1):
        x, y, z, t = window
        try:
            u = backend.div(backend.add(backend.mul(y, t), backend.mul(z, z)), x)
        except InexactZeroDivision as exc:
            raise InexactZeroDivision(f"u{k}: {exc}", term=k) from exc
        window = [y, z, t, u]
        yield k, u


def _window_step(state: State) -> State:
    x, y, z, t = state
    return [y, z, t, zdiv(zadd(zmul(y, t), zmul(z, z)), x)]


def _stabilized_plan(state: State, N: int) -> LiftPlan:
    """Lift (x, y, z, t) to O(p^(N + v + val x)), v the valuation sum of the next window."""
    x = state[0]
    try:
        u = _window_step(state)[3]
    except InexactZeroDivision as exc:
        raise PrecisionError(f"window head {x} is indistinguishable from 0") from exc
    v = sum(w.v for w in (*state[1:], u))
    if v >= N:
        raise PrecisionError(f"window valuation {v} reaches the precision O(p^{N})")
    lift = N + v + x.v
    return LiftPlan((lift,) * 4, PrecisionLattice.diagonal([N + v] * 4, x.ctx))


def somos_chain(n: int, N: int, ctx: PrimeContext) -> StepChain:
    """Steps taking (u_1, ..., u_4) to (u_{n-3}, ..., u_n)."""
    H_max = PrecisionLattice.diagonal([N] * 4, ctx)
    return StepChain(
        [
            Step(f"u{k}", _window_step, lambda s: _stabilized_plan(s, N), max_lattice=H_max)
            for k in range(5, n + 1)
        ]
    )


def _require_units(seeds: Sequence[PadicScalar]) -> None:
    for seed in seeds:
        if seed.val != 0:
            raise DomainError(f"stabilized Somos needs unit seeds, got {seed}")


def stabilized_somos(seeds: Sequence[PadicScalar], n: int) -> PadicScalar:
    """u_n at the seeds' precision O(p^N).

    Raises:
        DomainError: a seed is not a unit.
        PrecisionError: a window valuation sum reaches N.
    """
    _require_units(seeds)
    ctx = seeds[0].ctx
    N = min(s.N for s in seeds)
    if n <= 4:
        return seeds[n - 1].truncate(N)
    H = PrecisionLattice.diagonal([N] * 4, ctx)
    result = run_adaptive(somos_chain(n, N, ctx), list(seeds), H, H)
    return result.state[3]


def stabilized_lazy(seeds: Sequence[LazyNumber], n: int) -> LazyOracle:
    """u_n as a lazy number; each query reruns the stabilized loop on more seed digits."""
    ctx = seeds[0].ctx

    def compute(prec: int) -> int:
        digits = prec
        while True:
            scalars = [PadicScalar(0, s.residue(digits), digits, ctx) for s in seeds]
            try:
                return stabilized_somos(scalars, n).residue(prec)
            except PrecisionError:
                if digits >= ctx.val_cap:
                    raise
                log.info("stabilized u%d: retrying with %d seed digits", n, 2 * digits)
                digits *= 2

    return LazyOracle(compute, ctx, label=f"u{n}")


def somos_jacobian_rows(seeds: Sequence[Fraction | int], i: int) -> list[list[Fraction]]:
    """d(u_{i+1}, ..., u_{i+4}) / d(u_1, ..., u_4); row r is the derivative in seed r."""
    values = [Fraction(s) for s in seeds]
    grads = [[Fraction(int(r == k)) for r in range(4)] for k in range(4)]
    while len(values) < i + 4:
        x, y, z, t = values[-4:]
        dx, dy, dz, dt = grads[-4:]
        u = (y * t + z * z) / x
        values.append(u)
        grads.append([(dy[r] * t + y * dt[r] + 2 * z * dz[r] - u * dx[r]) / x for r in range(4)])
    window = grads[i : i + 4]
    return [[window[c][r] for c in range(4)] for r in range(4)]


def somos_jacobian(seeds: Sequence[Fraction | int], i: int, ctx: PrimeContext) -> PMatrix:
    return PMatrix.from_fractions(somos_jacobian_rows(seeds, i), ctx)


def _scalar_seeds(seeds: Sequence[int | Fraction], N: int, ctx: PrimeContext) -> list[PadicScalar]:
    return [PadicScalar.from_rational(s, N, ctx) for s in seeds]


def somos(
    seeds: Sequence[int | Fraction], n: int, mode: SomosMode, ctx: PrimeContext, N: int = 10
) -> SomosResult:
    """u_n from the seeds read at O(p^N), with a per-term report.

    Raises:
        InexactZeroDivision: a naive zealous or floating-point mode divided by
            a window head indistinguishable from 0; ``term`` names the index.
        PrecisionError: a stabilized mode ran out of precision.
        ValuationCapExceeded: a lazy divisor shows no nonzero digit.
    """
    if n < 1:
        raise DomainError(f"Somos index must be positive, got {n}")
    report = ExperimentReport(f"somos[{','.join(map(str, seeds))}]", ctx)
    scalars = _scalar_seeds(seeds, N, ctx)
    backend_name = mode.value
    try:
        match mode:
            case SomosMode.RATIONAL:
                value = PadicScalar.from_rational(somos_exact(seeds, n)[-1], N, ctx)
                report.add_scalar(f"u{n}", backend_name, value, style=ScalarStyle.POSITIONAL)
                return SomosResult(value, report)
            case SomosMode.NAIVE_ZEALOUS:
                value = scalars[n - 1] if n <= 4 else None
                for k, u in _naive_terms(scalars, n, ZealousBackend(ctx, N)):
                    report.add_scalar(f"u{k}", backend_name, u, style=ScalarStyle.POSITIONAL)
                    value = u
                return SomosResult(value, report)
            case SomosMode.NAIVE_PFLOAT:
                floats = PFloatBackend(PFloatSystem(ctx, N))
                seeds_f = [floats.from_scalar(s) for s in scalars]
                value = seeds_f[n - 1] if n <= 4 else None
                for k, u in _naive_terms(seeds_f, n, floats):
                    report.add_float(f"u{k}", u)
                    value = u
                return SomosResult(value, report)
            case SomosMode.NAIVE_LAZY:
                relaxed = RelaxedBackend(ctx, N)
                lazy_seeds = [relaxed.from_scalar(s) for s in scalars]
                value = scalars[n - 1] if n <= 4 else None
                for k, u in _naive_terms(lazy_seeds, n, relaxed):
                    value = u.to_scalar(N)
                    report.add_scalar(f"u{k}", backend_name, value, style=ScalarStyle.POSITIONAL)
                return _with_demand(SomosResult(value, report), lazy_seeds, backend_name)
            case SomosMode.STABILIZED_ZEALOUS:
                value = stabilized_somos(scalars, n)
                report.add_scalar(f"u{n}", backend_name, value, style=ScalarStyle.POSITIONAL)
                return SomosResult(value, report)
            case SomosMode.STABILIZED_LAZY:
                relaxed = RelaxedBackend(ctx, N)
                lazy_seeds = [relaxed.from_scalar(s) for s in scalars]
                _require_units([s.to_scalar(1) for s in lazy_seeds])
                value = stabilized_lazy(lazy_seeds, n).to_scalar(N) if n > 4 else scalars[n - 1]
                report.add_scalar(f"u{n}", backend_name, value, style=ScalarStyle.POSITIONAL)
                return _with_demand(SomosResult(value, report), lazy_seeds, backend_name)
    except (InexactZeroDivision, PrecisionError) as exc:
        term = getattr(exc, "term", None) or n
        log.info("somos %s failed at u%d: %s", backend_name, term, exc)
        report.add_failure(f"u{term}", backend_name, type(exc).__name__)
        raise


def _with_demand(result: SomosResult, seeds: Sequence[LazyNumber], backend: str) -> SomosResult:
    demand = tuple(s.demand for s in seeds)
    for k, d in enumerate(demand, start=1):
        result.report.add_value(f"demand:u{k}", backend, d)
    result.report.add_value("demand:max", backend, max(demand))
    result.demand = demand
    return result


def failure_index(
    seeds: Sequence[int | Fraction], n: int, mode: SomosMode, ctx: PrimeContext, N: int = 10
) -> int | None:
    """Index of the first term a naive mode cannot compute, or None."""
    try:
        somos(seeds, n, mode, ctx, N)
    except InexactZeroDivision as exc:
        return exc.term
    return None


def somos_experiment(
    seeds: Sequence[int | Fraction], n: int, ctx: PrimeContext, N: int = 10
) -> ExperimentReport:
    """u_n in every mode, each compared against the rational oracle."""
    report = ExperimentReport(f"somos[{','.join(map(str, seeds))}]", ctx)
    reference = somos_exact(seeds, n)[-1]
    for mode in SomosMode:
        try:
            result = somos(seeds, n, mode, ctx, N)
        except (InexactZeroDivision, PrecisionError) as exc:
            term = getattr(exc, "term", None) or n
            report.add_failure(f"u{n}", mode.value, f"{type(exc).__name__} at u{term}")
            continue
        if isinstance(result.value, PFloat):
            report.add_float(f"u{n}", result.value, reference)
        else:
            report.add_scalar(
                f"u{n}", mode.value, result.value, reference, style=ScalarStyle.POSITIONAL
            )
        for record in result.report.records:
            if record.quantity.startswith("demand:"):
                report.add(record)
    return report
