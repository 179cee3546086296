"""Evaluation at the first integers and interpolation by divided differences."""

import logging
from collections.abc import Iterable, Sequence

from ..backends import Backend, BackendName, PFloatBackend, RationalBackend, ZealousBackend
from ..core import PadicScalar, PrimeContext, legendre_factorial_valuation
from ..lattice import PMatrix, PrecisionLattice
from ..newton import PPolynomial
from ..pfloat import PFloatSystem
from .report import ExperimentReport

log = logging.getLogger(__name__)


def _constant[T](backend: Backend[T], n: int) -> T:
    return backend.from_scalar(PadicScalar.exact(n, backend.ctx))


def evaluate_at_points[T](P: PPolynomial, points: Iterable[int], backend: Backend[T]) -> list[T]:
    """Horner evaluation of P at each point."""
    return horner_values([backend.from_scalar(c) for c in P.coefficients], points, backend)


def horner_values[T](coeffs: Sequence[T], points: Iterable[int], backend: Backend[T]) -> list[T]:
    """Values at each point of the polynomial with backend coefficients ``coeffs`` (constant first)."""
    values = []
    for x in points:
        point = _constant(backend, x)
        acc = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = backend.add(backend.mul(acc, point), c)
        values.append(acc)
    return values


def evaluate_at_first_integers[T](P: PPolynomial, backend: Backend[T]) -> list[T]:
    """P(0), P(1), ..., P(deg P)."""
    return evaluate_at_points(P, range(P.degree + 1), backend)


def newton_coefficients[T](values: Sequence[T], backend: Backend[T]) -> list[T]:
    """Delta^n A(0) / n! from the difference table y_{n,i} = y_{n-1,i+1} - y_{n-1,i}."""
    row = list(values)
    coeffs = [row[0]]
    factorial = 1
    for n in range(1, len(values)):
        row = [backend.sub(row[i + 1], row[i]) for i in range(len(row) - 1)]
        factorial *= n
        coeffs.append(backend.div(row[0], _constant(backend, factorial)))
    return coeffs


def interpolate_divided_differences[T](values: Sequence[T], backend: Backend[T]) -> list[T]:
    """Coefficients (constant first) of the polynomial taking ``values`` at 0, 1, ..., d.

    The Newton form sum c_n X(X-1)...(X-n+1) is expanded by Horner's scheme.
    """
    c = newton_coefficients(values, backend)
    d = len(c) - 1
    poly = [c[d]]
    for n in reversed(range(d)):
        shifted = [backend.zero(), *poly]
        scaled = [backend.mul(_constant(backend, n), x) for x in poly] + [backend.zero()]
        poly = [backend.sub(a, b) for a, b in zip(shifted, scaled, strict=True)]
        poly[0] = backend.add(poly[0], c[n])
    return poly


def vandermonde_lattice(points: Sequence[int], ctx: PrimeContext) -> PrecisionLattice:
    """Image of Zp^(d+1) (coefficients) under evaluation at ``points``."""
    d = len(points) - 1
    return PrecisionLattice(PMatrix.from_rows([[x**n for x in points] for n in range(d + 1)], ctx))


def legendre_diffused_digits(d: int, ctx: PrimeContext) -> int:
    """val(1! 2! ... d!), the diffused digits of evaluation at 0..d."""
    return sum(legendre_factorial_valuation(n, ctx) for n in range(1, d + 1))


def interpolation_experiment(P: PPolynomial, N: int = 10) -> ExperimentReport:
    """Round trip P -> values at 0..d -> P in zealous and floating-point arithmetic."""
    ctx = P.ctx
    report = ExperimentReport("interp", ctx)
    d = P.degree
    names = [f"X^{k}" if k else "1" for k in reversed(range(d + 1))]
    reference = [c.value for c in reversed(P.coefficients)]
    zealous = ZealousBackend(ctx, N)
    coeffs = interpolate_divided_differences(evaluate_at_first_integers(P, zealous), zealous)
    for name, x, ref in zip(names, reversed(coeffs), reference, strict=True):
        report.add_scalar(name, BackendName.ZEALOUS.value, x, ref)
    floats = PFloatBackend(PFloatSystem(ctx, N))
    float_coeffs = interpolate_divided_differences(evaluate_at_first_integers(P, floats), floats)
    for name, x, ref in zip(names, reversed(float_coeffs), reference, strict=True):
        report.add_float(name, x, ref)
    exact = RationalBackend(ctx, N)
    exact_coeffs = interpolate_divided_differences(evaluate_at_first_integers(P, exact), exact)
    report.add_value(
        "round_trip_exact", BackendName.RATIONAL.value, exact_coeffs == [c.value for c in P.coefficients]
    )
    lattice = vandermonde_lattice(list(range(d + 1)), ctx)
    report.add_value("vandermonde_diffused_digits", BackendName.RATIONAL.value, lattice.diffused_digits())
    report.add_value("legendre_sum", BackendName.RATIONAL.value, legendre_diffused_digits(d, ctx))
    return report
