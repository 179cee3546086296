"""
Determinant, characteristic polynomial and LU experiments.

Algorithms are generic over a ``Ring`` (every arithmetic backend is one, as
is ``PolynomialRing`` over a backend). Jacobians are computed exactly over Q
from the representatives of the inputs.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction
from typing import Protocol

from ..backends import (
    Backend,
    BackendName,
    PFloatBackend,
    RationalBackend,
    ZealousBackend,
    gauss_jordan_inverse,
)
from ..core import INFINITY, PadicScalar, PrimeContext
from ..errors import PrecisionInsufficient
from ..lattice import (
    PMatrix,
    PrecisionLattice,
    hermite_nf,
    propagate_forward,
    smith_diagonalize,
)
from ..newton import PPolynomial
from ..pfloat import PFloatSystem
from ..zealous import zadd, zmul, zneg
from .report import ExperimentReport

log = logging.getLogger(__name__)

type FractionMatrix = list[list[Fraction]]


class Ring[T](Protocol):
    def add(self, x: T, y: T) -> T: ...
    def sub(self, x: T, y: T) -> T: ...
    def mul(self, x: T, y: T) -> T: ...
    def neg(self, x: T) -> T: ...
    def zero(self) -> T: ...


class PolynomialRing[T]:
    """Polynomials over a backend, stored as coefficient tuples (constant first)."""

    def __init__(self, base: Backend[T]):
        self.base = base

    def zero(self) -> tuple[T, ...]:
        return ()

    def one(self) -> tuple[T, ...]:
        return (self.base.one(),)

    def add(self, x: tuple[T, ...], y: tuple[T, ...]) -> tuple[T, ...]:
        if len(x) < len(y):
            x, y = y, x
        return tuple(self.base.add(a, y[k]) if k < len(y) else a for k, a in enumerate(x))

    def neg(self, x: tuple[T, ...]) -> tuple[T, ...]:
        return tuple(self.base.neg(c) for c in x)

    def sub(self, x: tuple[T, ...], y: tuple[T, ...]) -> tuple[T, ...]:
        return self.add(x, self.neg(y))

    def mul(self, x: tuple[T, ...], y: tuple[T, ...]) -> tuple[T, ...]:
        if not x or not y:
            return ()
        out: list[T | None] = [None] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                term = self.base.mul(a, b)
                out[i + j] = term if out[i + j] is None else self.base.add(out[i + j], term)
        return tuple(c for c in out if c is not None)


def _mu[T](X: list[list[T]], ring: Ring[T]) -> list[list[T]]:
    """Strict upper part of X with diagonal -(X_{i+1,i+1} + ... + X_{n,n})."""
    n = len(X)
    out = [[ring.zero()] * n for _ in range(n)]
    tail = ring.zero()
    for i in reversed(range(n)):
        out[i][i] = ring.neg(tail)
        tail = ring.add(tail, X[i][i])
        for j in range(i + 1, n):
            out[i][j] = X[i][j]
    return out


def det_division_free[T](M: Sequence[Sequence[T]], ring: Ring[T]) -> T:
    """Division-free determinant by Bird's iteration X <- mu(X) * M."""
    n = len(M)
    A = [list(row) for row in M]
    X = A
    for _ in range(n - 1):
        mu = _mu(X, ring)
        X = [
            [_dot(ring, [mu[i][k] for k in range(i, n)], [A[k][j] for k in range(i, n)]) for j in range(n)]
            for i in range(n)
        ]
    return X[0][0] if n % 2 else ring.neg(X[0][0])


def _dot[T](ring: Ring[T], xs: Sequence[T], ys: Sequence[T]) -> T:
    acc = ring.mul(xs[0], ys[0])
    for x, y in zip(xs[1:], ys[1:], strict=True):
        acc = ring.add(acc, ring.mul(x, y))
    return acc


def det_pivoted[T](M: Sequence[Sequence[T]], backend: Backend[T]) -> T:
    """Gaussian elimination with the smallest-valuation pivot of the remaining block.

    Raises:
        PrecisionInsufficient: every remaining entry is zero at working precision.
    """
    rows = [list(row) for row in M]
    n = len(rows)
    det = backend.one()
    negate = False
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                if backend.is_zero(rows[i][j]):
                    continue
                v = backend.valuation(rows[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise PrecisionInsufficient(f"step {k}: no usable pivot")
        _, i, j = best
        if i != k:
            rows[k], rows[i] = rows[i], rows[k]
            negate = not negate
        if j != k:
            for row in rows:
                row[k], row[j] = row[j], row[k]
            negate = not negate
        pivot = rows[k][k]
        det = backend.mul(det, pivot)
        for i in range(k + 1, n):
            factor = backend.div(rows[i][k], pivot)
            for j in range(k + 1, n):
                rows[i][j] = backend.sub(rows[i][j], backend.mul(factor, rows[k][j]))
    return backend.neg(det) if negate else det


def det_optimal(M: PMatrix) -> PadicScalar:
    """sign * product of the Smith diagonal; no precision is lost to cancellation."""
    smith = smith_diagonalize(M)
    det = PadicScalar.one(M.ctx)
    for a in smith.diagonal:
        det = zmul(det, a)
    return det if smith.sign > 0 else zneg(det)


def _lift_matrix[T](M: PMatrix, backend: Backend[T]) -> list[list[T]]:
    return [[backend.from_scalar(x) for x in row] for row in M.rows]


def _minor[T](rows: Sequence[Sequence[T]], i: int, j: int) -> list[list[T]]:
    return [[x for c, x in enumerate(row) if c != j] for r, row in enumerate(rows) if r != i]


def _exact_det(rows: Sequence[Sequence[Fraction]], ctx: PrimeContext) -> Fraction:
    if not rows:
        return Fraction(1)
    return det_division_free(rows, RationalBackend(ctx, 0))


def det_jacobian(M: PMatrix) -> PMatrix:
    """Comatrix of M flattened row-major into a d^2 x 1 column."""
    values = M.values()
    d = M.nrows
    return PMatrix.from_fractions(
        [[(-1) ** (i + j) * _exact_det(_minor(values, i, j), M.ctx)] for i in range(d) for j in range(d)],
        M.ctx,
    )


def _char_matrix(values: Sequence[Sequence[Fraction]]) -> list[list[tuple[Fraction, ...]]]:
    """X*I - M over Q[X]."""
    d = len(values)
    return [
        [(-values[i][j], Fraction(1)) if i == j else (-values[i][j],) for j in range(d)]
        for i in range(d)
    ]


def charpoly_jacobian(M: PMatrix) -> PMatrix:
    """d^2 x d derivative of the charpoly coefficients (X^(d-1) first) in the entries of M.

    The (i, j) row is -(-1)^(i+j) det((X*I - M) with row i and column j erased).
    """
    d = M.nrows
    ring = PolynomialRing(RationalBackend(M.ctx, 0))
    char = _char_matrix(M.values())
    rows = []
    for i in range(d):
        for j in range(d):
            minor = _minor(char, i, j)
            poly = det_division_free(minor, ring) if minor else ring.one()
            coeffs = [*poly, *[Fraction(0)] * (d - len(poly))]
            sign = -((-1) ** (i + j))
            rows.append([sign * c for c in reversed(coeffs[:d])])
    return PMatrix.from_fractions(rows, M.ctx)


def charpoly[T](M: Sequence[Sequence[T]], backend: Backend[T]) -> list[T]:
    """Coefficients of det(X*I - M), constant term first."""
    d = len(M)
    ring = PolynomialRing(backend)
    char = [
        [(backend.neg(M[i][j]), backend.one()) if i == j else (backend.neg(M[i][j]),) for j in range(d)]
        for i in range(d)
    ]
    coeffs = list(det_division_free(char, ring))
    return coeffs + [backend.zero()] * (d + 1 - len(coeffs))


def charpoly_polynomial(M: PMatrix) -> PPolynomial:
    """Zealous characteristic polynomial."""
    return PPolynomial(tuple(charpoly(M.rows, ZealousBackend(M.ctx, 0))), M.ctx)


def lu_factor[T](M: Sequence[Sequence[T]], backend: Backend[T]) -> tuple[list[list[T]], list[list[T]]]:
    """Doolittle factorization M = L U without pivoting.

    Raises:
        PrecisionInsufficient: a leading principal minor of size below n vanishes
            at working precision (the last pivot only enters U).
    """
    n = len(M)
    U = [list(row) for row in M]
    L = [[backend.one() if i == j else backend.zero() for j in range(n)] for i in range(n)]
    for k in range(n):
        pivot = U[k][k]
        if k < n - 1 and backend.is_zero(pivot):
            raise PrecisionInsufficient(f"principal minor {k + 1} vanishes")
        for i in range(k + 1, n):
            factor = backend.div(U[i][k], pivot)
            L[i][k] = factor
            U[i][k] = backend.zero()
            for j in range(k + 1, n):
                U[i][j] = backend.sub(U[i][j], backend.mul(factor, U[k][j]))
    return L, U


def _matmul(A: Sequence[Sequence[Fraction]], B: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [
        [sum((a * b for a, b in zip(row, col, strict=True)), Fraction(0)) for col in zip(*B, strict=True)]
        for row in A
    ]


def lu_differential(M: PMatrix, dM: Sequence[Sequence[Fraction]]) -> tuple[FractionMatrix, FractionMatrix]:
    """dL = L Lo(L^-1 dM U^-1) and dU = Up(L^-1 dM U^-1) U at the representative of M.

    Lo keeps the strictly lower part, Up the upper part with the diagonal.
    """
    backend = RationalBackend(M.ctx, 0)
    L, U = lu_factor(M.values(), backend)
    return _lu_differential(L, U, dM, backend)


def _lu_differential(
    L: FractionMatrix, U: FractionMatrix, dM: Sequence[Sequence[Fraction]], backend: RationalBackend
) -> tuple[FractionMatrix, FractionMatrix]:
    n = len(L)
    core = _matmul(_matmul(gauss_jordan_inverse(L, backend), dM), gauss_jordan_inverse(U, backend))
    lower = [[core[i][j] if i > j else Fraction(0) for j in range(n)] for i in range(n)]
    upper = [[core[i][j] if i <= j else Fraction(0) for j in range(n)] for i in range(n)]
    return _matmul(L, lower), _matmul(upper, U)


def lu_labels(n: int) -> list[str]:
    """L21, L31, L32, L41, ... (row-major strictly lower entries)."""
    return [f"L{i + 1}{j + 1}" for i in range(n) for j in range(i)]


def lu_jacobian(M: PMatrix) -> PMatrix:
    """d^2 x d(d-1)/2 derivative of the strictly lower entries of L."""
    values = M.values()
    n = M.nrows
    backend = RationalBackend(M.ctx, 0)
    L, U = lu_factor(values, backend)
    rows = []
    for a in range(n):
        for b in range(n):
            dM = [[Fraction(int(i == a and j == b)) for j in range(n)] for i in range(n)]
            dL, _ = _lu_differential(L, U, dM, backend)
            rows.append([dL[i][j] for i in range(n) for j in range(i)])
    return PMatrix.from_fractions(rows, M.ctx)


def forward_precisions(J: PMatrix, N: int) -> tuple[list[int], PrecisionLattice | None]:
    """Optimal output precisions when every input is known at O(p^N)."""
    result = propagate_forward(J, [N] * J.nrows)
    return result.precisions, result.image


def _record_scalars(
    report: ExperimentReport,
    names: Sequence[str],
    computed: Sequence[PadicScalar],
    reference: Sequence[Fraction] | None,
    backend: str,
) -> None:
    for k, (name, x) in enumerate(zip(names, computed, strict=True)):
        report.add_scalar(name, backend, x, None if reference is None else reference[k])


def det_experiment(M: PMatrix, N: int = 10) -> ExperimentReport:
    """Determinant in zealous, floating-point and Smith-optimal arithmetic."""
    report = ExperimentReport("det", M.ctx)
    reference = _exact_det(M.values(), M.ctx)
    zealous = det_division_free(M.rows, ZealousBackend(M.ctx, N))
    report.add_scalar("det", BackendName.ZEALOUS.value, zealous, reference)
    floats = PFloatBackend(PFloatSystem(M.ctx, N))
    lifted = _lift_matrix(M, floats)
    report.add_float("det", det_division_free(lifted, floats), reference)
    report.add_float("det:pivoted", det_pivoted(lifted, floats), reference)
    report.add_scalar("det", "optimal", det_optimal(M), reference)
    J = det_jacobian(M)
    report.add_value("jacobian_min_valuation", BackendName.RATIONAL.value, jacobian_min_valuation(J))
    precisions, _ = forward_precisions(J, N)
    report.add_value("forward_precision", BackendName.RATIONAL.value, precisions[0])
    return report


def charpoly_experiment(M: PMatrix, N: int = 10) -> ExperimentReport:
    report = ExperimentReport("charpoly", M.ctx)
    d = M.nrows
    names = [f"X^{k}" if k else "1" for k in reversed(range(d))]
    coeffs = charpoly(M.rows, ZealousBackend(M.ctx, N))
    ring = PolynomialRing(RationalBackend(M.ctx, 0))
    exact = list(det_division_free(_char_matrix(M.values()), ring))
    exact += [Fraction(0)] * (d + 1 - len(exact))
    _record_scalars(report, names, coeffs[d - 1 :: -1], exact[d - 1 :: -1], BackendName.ZEALOUS.value)
    J = charpoly_jacobian(M)
    precisions, _ = forward_precisions(J, N)
    for name, prec in zip(names, precisions, strict=True):
        report.add_value(f"{name}:optimal_precision", BackendName.RATIONAL.value, prec)
    diagonal = [hermite_nf(J).form[k, k].v for k in range(d)]
    report.add_value("jacobian_hermite_diagonal", BackendName.RATIONAL.value, ",".join(map(str, diagonal)))
    shifted = PMatrix.from_rows(
        [[zadd(x, PadicScalar.one(M.ctx)) if i == j else x for j, x in enumerate(row)] for i, row in enumerate(M.rows)],
        M.ctx,
    )
    shifted_precisions, image = forward_precisions(charpoly_jacobian(shifted), N)
    report.add_value("I+M:optimal_precisions", BackendName.RATIONAL.value, ",".join(map(str, shifted_precisions)))
    report.add_value("I+M:diffused_digits", BackendName.RATIONAL.value, image.diffused_digits() if image else "-")
    return report


def lu_experiment(M: PMatrix, N: int = 10) -> ExperimentReport:
    report = ExperimentReport("lu", M.ctx)
    n = M.nrows
    labels = lu_labels(n)
    L, _ = lu_factor(M.rows, ZealousBackend(M.ctx, N))
    L_exact, _ = lu_factor(M.values(), RationalBackend(M.ctx, 0))
    _record_scalars(
        report,
        labels,
        [L[i][j] for i in range(n) for j in range(i)],
        [L_exact[i][j] for i in range(n) for j in range(i)],
        BackendName.ZEALOUS.value,
    )
    precisions, image = forward_precisions(lu_jacobian(M), N)
    for label, prec in zip(labels, precisions, strict=True):
        report.add_value(f"{label}:optimal_precision", BackendName.RATIONAL.value, prec)
    report.add_value("diffused_digits", BackendName.RATIONAL.value, image.diffused_digits() if image else "-")
    return report


def jacobian_min_valuation(J: PMatrix) -> int:
    vals = [x.val for row in J.rows for x in row if x.val is not INFINITY]
    return min(vals)
