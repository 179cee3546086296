"""
Arithmetic backends.

The case-study algorithms are written once against the ``Backend`` protocol
and run in zealous, floating-point, relaxed or exact-rational arithmetic.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Protocol

from .core import (
    INFINITY,
    Extended,
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    print_scalar,
    valuation,
)
from .errors import InexactZeroDivision, PrecisionInsufficient
from .pfloat import PFloat, PFloatSystem, fadd, fdiv, fmul, fneg, fsub, render, round_to_float
from .relaxed import LazyConstant, LazyNumber, lazy_add, lazy_div, lazy_mul, lazy_neg, lazy_sub
from .zealous import zadd, zdiv, zmul, zneg, zsub

log = logging.getLogger(__name__)


class BackendName(Enum):
    ZEALOUS = "zealous"
    RELAXED = "relaxed"
    PFLOAT = "pfloat"
    RATIONAL = "rational-oracle"


class Backend[T](Protocol):
    name: BackendName
    ctx: PrimeContext

    def lift(self, x: Fraction | int) -> T: ...
    def from_scalar(self, x: PadicScalar) -> T: ...
    def add(self, x: T, y: T) -> T: ...
    def sub(self, x: T, y: T) -> T: ...
    def mul(self, x: T, y: T) -> T: ...
    def div(self, x: T, y: T) -> T: ...
    def neg(self, x: T) -> T: ...
    def zero(self) -> T: ...
    def one(self) -> T: ...
    def is_zero(self, x: T) -> bool: ...
    def valuation(self, x: T) -> Extended: ...
    def to_scalar(self, x: T) -> PadicScalar: ...
    def render(self, x: T) -> str: ...


class ZealousBackend:
    """Interval arithmetic; inputs are read at absolute precision ``prec``."""

    name = BackendName.ZEALOUS

    def __init__(self, ctx: PrimeContext, prec: int):
        self.ctx = ctx
        self.prec = prec

    def lift(self, x: Fraction | int) -> PadicScalar:
        return PadicScalar.from_rational(x, self.prec, self.ctx)

    def from_scalar(self, x: PadicScalar) -> PadicScalar:
        return x

    def add(self, x: PadicScalar, y: PadicScalar) -> PadicScalar:
        return zadd(x, y)

    def sub(self, x: PadicScalar, y: PadicScalar) -> PadicScalar:
        return zsub(x, y)

    def mul(self, x: PadicScalar, y: PadicScalar) -> PadicScalar:
        return zmul(x, y)

    def div(self, x: PadicScalar, y: PadicScalar) -> PadicScalar:
        return zdiv(x, y)

    def neg(self, x: PadicScalar) -> PadicScalar:
        return zneg(x)

    def zero(self) -> PadicScalar:
        return PadicScalar.zero(self.ctx)

    def one(self) -> PadicScalar:
        return PadicScalar.one(self.ctx)

    def is_zero(self, x: PadicScalar) -> bool:
        return x.indistinguishable_from_zero

    def valuation(self, x: PadicScalar) -> Extended:
        return x.val

    def to_scalar(self, x: PadicScalar) -> PadicScalar:
        return x

    def render(self, x: PadicScalar) -> str:
        return print_scalar(x, ScalarStyle.DIGITS)


class PFloatBackend:
    """Floating-point arithmetic; a zero divisor is reported as a failure."""

    name = BackendName.PFLOAT

    def __init__(self, system: PFloatSystem):
        self.system = system
        self.ctx = system.ctx

    def lift(self, x: Fraction | int) -> PFloat:
        return round_to_float(x, self.system)

    def from_scalar(self, x: PadicScalar) -> PFloat:
        return round_to_float(x, self.system)

    def add(self, x: PFloat, y: PFloat) -> PFloat:
        return fadd(x, y)

    def sub(self, x: PFloat, y: PFloat) -> PFloat:
        return fsub(x, y)

    def mul(self, x: PFloat, y: PFloat) -> PFloat:
        return fmul(x, y)

    def div(self, x: PFloat, y: PFloat) -> PFloat:
        if y.is_zero:
            raise InexactZeroDivision(f"floating-point division of {x} by 0")
        return fdiv(x, y)

    def neg(self, x: PFloat) -> PFloat:
        return fneg(x)

    def zero(self) -> PFloat:
        return self.system.zero

    def one(self) -> PFloat:
        return round_to_float(1, self.system)

    def is_zero(self, x: PFloat) -> bool:
        return x.is_zero

    def valuation(self, x: PFloat) -> Extended:
        if x.is_zero:
            return INFINITY
        if not x.is_finite:
            raise PrecisionInsufficient(f"{render(x)} has no valuation")
        return x.e

    def to_scalar(self, x: PFloat) -> PadicScalar:
        if x.is_zero:
            return PadicScalar.zero(self.ctx)
        return x.to_scalar()

    def render(self, x: PFloat) -> str:
        return render(x)


class RationalBackend:
    """Exact arithmetic over Q; ``prec`` only sets the reporting precision."""

    name = BackendName.RATIONAL

    def __init__(self, ctx: PrimeContext, prec: int):
        self.ctx = ctx
        self.prec = prec

    def lift(self, x: Fraction | int) -> Fraction:
        return Fraction(x)

    def from_scalar(self, x: PadicScalar) -> Fraction:
        return x.value

    def add(self, x: Fraction, y: Fraction) -> Fraction:
        return x + y

    def sub(self, x: Fraction, y: Fraction) -> Fraction:
        return x - y

    def mul(self, x: Fraction, y: Fraction) -> Fraction:
        return x * y

    def div(self, x: Fraction, y: Fraction) -> Fraction:
        return x / y

    def neg(self, x: Fraction) -> Fraction:
        return -x

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def is_zero(self, x: Fraction) -> bool:
        return x == 0

    def valuation(self, x: Fraction) -> Extended:
        return valuation(x, self.ctx)

    def to_scalar(self, x: Fraction) -> PadicScalar:
        return PadicScalar.from_rational(x, self.prec, self.ctx)

    def render(self, x: Fraction) -> str:
        return print_scalar(self.to_scalar(x), ScalarStyle.DIGITS)


class RelaxedBackend:
    """Lazy digit streams over Zp; ``prec`` is the precision read on output."""

    name = BackendName.RELAXED

    def __init__(self, ctx: PrimeContext, prec: int):
        self.ctx = ctx
        self.prec = prec

    def lift(self, x: Fraction | int) -> LazyNumber:
        x = Fraction(x)
        numerator = LazyConstant(x.numerator, self.ctx)
        if x.denominator == 1:
            return numerator
        return lazy_div(numerator, LazyConstant(x.denominator, self.ctx))

    def from_scalar(self, x: PadicScalar) -> LazyNumber:
        if x.is_exact:
            return self.lift(x.value)
        return LazyConstant(x.residue(), self.ctx)

    def add(self, x: LazyNumber, y: LazyNumber) -> LazyNumber:
        return lazy_add(x, y)

    def sub(self, x: LazyNumber, y: LazyNumber) -> LazyNumber:
        return lazy_sub(x, y)

    def mul(self, x: LazyNumber, y: LazyNumber) -> LazyNumber:
        return lazy_mul(x, y)

    def div(self, x: LazyNumber, y: LazyNumber) -> LazyNumber:
        return lazy_div(x, y)

    def neg(self, x: LazyNumber) -> LazyNumber:
        return lazy_neg(x)

    def zero(self) -> LazyNumber:
        return LazyConstant(0, self.ctx)

    def one(self) -> LazyNumber:
        return LazyConstant(1, self.ctx)

    def is_zero(self, x: LazyNumber) -> bool:
        return all(x.digit(i) == 0 for i in range(self.prec))

    def valuation(self, x: LazyNumber) -> Extended:
        for i in range(self.prec):
            if x.digit(i):
                return i
        return self.prec

    def to_scalar(self, x: LazyNumber) -> PadicScalar:
        return x.to_scalar(self.prec)

    def render(self, x: LazyNumber) -> str:
        return print_scalar(self.to_scalar(x), ScalarStyle.POSITIONAL)


def make_backend(
    name: BackendName, ctx: PrimeContext, prec: int, float_digits: int | None = None
) -> Backend:
    """Backend by name; floats use ``float_digits`` significand digits (default prec)."""
    match name:
        case BackendName.ZEALOUS:
            return ZealousBackend(ctx, prec)
        case BackendName.PFLOAT:
            return PFloatBackend(PFloatSystem(ctx, float_digits or prec))
        case BackendName.RATIONAL:
            return RationalBackend(ctx, prec)
        case BackendName.RELAXED:
            return RelaxedBackend(ctx, prec)


def _pivot_row[T](rows: list[list[T]], col: int, start: int, backend: Backend[T]) -> int:
    """Row of smallest valuation in ``col`` from ``start`` on; lowest row wins ties."""
    best, best_val = -1, INFINITY
    for i in range(start, len(rows)):
        if backend.is_zero(rows[i][col]):
            continue
        v = backend.valuation(rows[i][col])
        if best < 0 or v < best_val:
            best, best_val = i, v
    return best


def gauss_jordan_inverse[T](matrix: list[list[T]], backend: Backend[T]) -> list[list[T]]:
    """Inverse by Gauss-Jordan elimination with smallest-valuation pivots.

    Raises:
        PrecisionInsufficient: a pivot column is indistinguishable from 0.
    """
    n = len(matrix)
    zero, one = backend.zero(), backend.one()
    rows = [
        list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)
    ]
    for col in range(n):
        pivot = _pivot_row(rows, col, col, backend)
        if pivot < 0:
            raise PrecisionInsufficient(f"no usable pivot in column {col}")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        head = rows[col][col]
        rows[col] = [backend.div(x, head) for x in rows[col]]
        for i in range(n):
            if i == col or rows[i][col] == zero:
                continue
            factor = rows[i][col]
            rows[i] = [
                backend.sub(x, backend.mul(factor, y)) for x, y in zip(rows[i], rows[col], strict=True)
            ]
    return [row[n:] for row in rows]
