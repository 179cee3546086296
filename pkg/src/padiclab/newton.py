"""
Newton iterations: Hensel lifting, inverses and square roots.

Each step doubles the number of correct digits; the certified precision is
tracked separately from the precision zealous arithmetic reports, and every
iterate is cut back to the digits that are actually certified.
"""

import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .backends import ZealousBackend, gauss_jordan_inverse
from .core import (
    EXACT,
    INFINITY,
    Extended,
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    parse_scalar,
    print_scalar,
)
from .errors import (
    DomainError,
    HenselHypothesisFailure,
    NotASquare,
    PrecisionInsufficient,
    ScalarSyntaxError,
)
from .lattice import PMatrix
from .relaxed import LazyNumber, LazyOracle, lazy_val
from .zealous import zadd, zdiv, zmul, zneg, zsub

log = logging.getLogger(__name__)

TONELLI_SHANKS_THRESHOLD = 2**16


@dataclass(frozen=True)
class PPolynomial:
    """Polynomial with scalar coefficients, constant term first."""

    coefficients: tuple[PadicScalar, ...]
    ctx: PrimeContext

    @classmethod
    def from_coefficients(
        cls, coefficients: Iterable[PadicScalar | Fraction | int], ctx: PrimeContext
    ) -> "PPolynomial":
        coeffs = tuple(
            c if isinstance(c, PadicScalar) else PadicScalar.exact(c, ctx) for c in coefficients
        )
        return cls(coeffs or (PadicScalar.zero(ctx),), ctx)

    @classmethod
    def from_leading(
        cls, coefficients: Iterable[PadicScalar | Fraction | int], ctx: PrimeContext
    ) -> "PPolynomial":
        """Build from coefficients listed leading term first."""
        return cls.from_coefficients(reversed(list(coefficients)), ctx)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> PadicScalar:
        return self.coefficients[-1]

    def __getitem__(self, k: int) -> PadicScalar:
        return self.coefficients[k]

    def evaluate(self, x: PadicScalar) -> PadicScalar:
        """Horner evaluation in zealous arithmetic."""
        acc = self.leading
        for c in reversed(self.coefficients[:-1]):
            acc = zadd(zmul(acc, x), c)
        return acc

    def derivative(self) -> "PPolynomial":
        if self.degree == 0:
            return PPolynomial.from_coefficients([0], self.ctx)
        return PPolynomial(
            tuple(
                zmul(PadicScalar.exact(k, self.ctx), c)
                for k, c in enumerate(self.coefficients)
                if k
            ),
            self.ctx,
        )

    def __add__(self, other: "PPolynomial") -> "PPolynomial":
        zero = PadicScalar.zero(self.ctx)
        size = max(len(self.coefficients), len(other.coefficients))
        a = self.coefficients + (zero,) * (size - len(self.coefficients))
        b = other.coefficients + (zero,) * (size - len(other.coefficients))
        return PPolynomial(tuple(zadd(x, y) for x, y in zip(a, b, strict=True)), self.ctx)

    def __neg__(self) -> "PPolynomial":
        return PPolynomial(tuple(zneg(c) for c in self.coefficients), self.ctx)

    def __sub__(self, other: "PPolynomial") -> "PPolynomial":
        return self + (-other)

    def __mul__(self, other: "PPolynomial") -> "PPolynomial":
        out = [PadicScalar.zero(self.ctx)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            if a.val is INFINITY:
                continue
            for j, b in enumerate(other.coefficients):
                if b.val is INFINITY:
                    continue
                out[i + j] = zadd(out[i + j], zmul(a, b))
        return PPolynomial(tuple(out), self.ctx)

    def __str__(self) -> str:
        return format_polynomial(self)


def format_polynomial(f: PPolynomial, style: ScalarStyle = ScalarStyle.ARITHMETIC) -> str:
    """Comma-separated coefficients, leading term first."""
    return ",".join(print_scalar(c, style) for c in reversed(f.coefficients))


def parse_polynomial(text: str, ctx: PrimeContext) -> PPolynomial:
    coeffs = []
    offset = 0
    for item in text.split(","):
        try:
            coeffs.append(parse_scalar(item, ctx))
        except ScalarSyntaxError as exc:
            raise ScalarSyntaxError(f"Invalid coefficient {item.strip()!r}", offset + exc.position) from exc
        offset += len(item) + 1
    return PPolynomial.from_leading(coeffs, ctx)


def hensel_lift(
    f: PPolynomial, a: PadicScalar | int, target: int, *, strict: bool = True
) -> PadicScalar:
    """Root of f congruent to a, at absolute precision ``target``.

    Requires val f(a) > 2 val f'(a). After i steps the root is certified to
    val f'(a) + r * 2^i digits with r = val f(a) - 2 val f'(a); each iterate
    is truncated to its certified digits before the next step.

    Raises:
        HenselHypothesisFailure: the starting point is not close enough.
        PrecisionInsufficient: ``strict`` and the coefficients do not carry
            enough digits to reach ``target``.
    """
    ctx = f.ctx
    x = a if isinstance(a, PadicScalar) else PadicScalar.exact(a, ctx)
    x = x.as_exact()
    fx = f.evaluate(x)
    if fx.val is INFINITY:
        return x.with_precision(target)
    dfx = f.derivative().evaluate(x)
    if dfx.indistinguishable_from_zero:
        raise HenselHypothesisFailure(f"f'({x}) is indistinguishable from 0")
    vf, vd = fx.v, dfx.v
    if vf <= 2 * vd:
        raise HenselHypothesisFailure(
            f"val f(a) = {vf} is not above 2 val f'(a) = {2 * vd}"
        )
    r = vf - 2 * vd
    certified: Extended = vd + r
    computed: Extended = fx.N if fx.is_inexact_zero else EXACT
    step = 0
    while certified < target and not fx.indistinguishable_from_zero:
        dfx = f.derivative().evaluate(x)
        x_next = zsub(x, zdiv(fx, dfx))
        step += 1
        r *= 2
        certified = vd + r
        computed = x_next.N
        x = x_next.truncate(certified).as_exact()
        log.debug("hensel step %d: certified %s, computed %s", step, certified, computed)
        fx = f.evaluate(x)
    reached = min(certified, computed, target)
    if fx.indistinguishable_from_zero and not fx.is_exact:
        reached = min(target, fx.N - vd)
    if strict and reached < target:
        raise PrecisionInsufficient(f"Hensel lift reached O(p^{reached}), asked for O(p^{target})")
    return x.with_precision(reached)


def _unit_inverse(u: int, p: int, N: int) -> Iterator[tuple[int, int]]:
    """Yield (k, y) with u*y = 1 mod p^k for k = 1, 2, 4, ... capped at N."""
    y = pow(u, -1, p)
    k = 1
    yield k, y
    while k < N:
        k = min(2 * k, N)
        modulus = p**k
        y = y * (2 - u * y) % modulus
        yield k, y


def newton_inverse_steps(x: PadicScalar, N: int | None = None) -> Iterator[PadicScalar]:
    """Successive Newton approximations of 1/x, each with twice the digits.

    Raises:
        DomainError: x is not a unit.
    """
    if x.indistinguishable_from_zero or x.v != 0:
        raise DomainError(f"Newton inversion needs a unit, got {x}")
    rel = x.rel if N is None else min(x.rel, N)
    if rel is INFINITY:
        raise DomainError("an exact scalar needs an explicit relative precision")
    for k, y in _unit_inverse(x.s, x.ctx.p, rel):
        yield PadicScalar(0, y, k, x.ctx)


def newton_inverse(x: PadicScalar | LazyNumber, N: int | None = None) -> PadicScalar | LazyNumber:
    """1/x by Newton iteration.

    A lazy unit gives a lazy oracle whose digits are recomputed at doubling
    precisions from the digits of x.
    """
    if isinstance(x, LazyNumber):
        if lazy_val(x) != 0:
            raise DomainError("lazy Newton inversion needs a unit")
        p = x.ctx.p

        def compute(prec: int) -> int:
            *_, (_, y) = _unit_inverse(x.residue(prec), p, prec)
            return y

        return LazyOracle(compute, x.ctx, label=f"inv({x.label})")
    *_, last = newton_inverse_steps(x, N)
    return last


def newton_matrix_inverse(M: PMatrix, N: int) -> PMatrix:
    """Inverse of a matrix over Zp with unit determinant, to precision O(p^N).

    Starts from the inverse modulo p and applies X <- X (2I - M X).
    """
    ctx = M.ctx
    p = ctx.p
    n = M.nrows
    residues = [[x.residue(N) for x in row] for row in M.rows]
    try:
        X0 = gauss_jordan_inverse(
            [[PadicScalar.from_rational(x, 1, ctx) for x in row] for row in residues],
            ZealousBackend(ctx, 1),
        )
    except PrecisionInsufficient as exc:
        raise DomainError("matrix is not invertible modulo p") from exc
    X = [[x.residue(1) for x in row] for row in X0]
    k = 1
    while k < N:
        k = min(2 * k, N)
        modulus = p**k
        MX = _int_matmul(residues, X, modulus)
        correction = [[(2 * (i == j) - MX[i][j]) % modulus for j in range(n)] for i in range(n)]
        X = _int_matmul(X, correction, modulus)
        log.debug("matrix inverse at O(p^%d)", k)
    return PMatrix.from_rows([[PadicScalar.from_rational(x, N, ctx) for x in row] for row in X], ctx)


def _int_matmul(A: list[list[int]], B: list[list[int]], modulus: int) -> list[list[int]]:
    return [
        [sum(a * b for a, b in zip(row, column, strict=True)) % modulus for column in zip(*B, strict=True)]
        for row in A
    ]


class SqrtMode(Enum):
    NAIVE_ZEALOUS = "naive-zealous"
    ZERO_LIFT = "zero-lift"


def is_square_residue(u: int, p: int) -> bool:
    if p == 2:
        return u % 8 == 1
    return pow(u, (p - 1) // 2, p) == 1


def root_mod_p(u: int, p: int) -> int:
    """A square root of the unit u modulo p."""
    if p == 2:
        return 1
    u %= p
    if p < TONELLI_SHANKS_THRESHOLD:
        return next(x for x in range(1, p) if x * x % p == u)
    return _tonelli_shanks(u, p)


def _tonelli_shanks(u: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(u, q, p), pow(u, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 2 ** (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def padic_sqrt(c: PadicScalar, mode: SqrtMode = SqrtMode.ZERO_LIFT) -> PadicScalar:
    """Square root of c by Newton's method.

    ``NAIVE_ZEALOUS`` runs x <- (x + c/x) / 2 in zealous arithmetic and stops
    once the certified digits cover the reported precision; at p = 2 every
    halving costs a digit. ``ZERO_LIFT`` lifts a root of X^2 - c with exact
    iterates and reaches O(p^(N - val f'(x0))).

    Raises:
        NotASquare: c has odd valuation or a non-square unit part.
        PrecisionInsufficient: c is indistinguishable from 0 or too short to decide.
    """
    ctx = c.ctx
    p = ctx.p
    if c.indistinguishable_from_zero:
        raise PrecisionInsufficient(f"cannot take the square root of {c}")
    if c.v % 2:
        raise NotASquare(f"{c} has odd valuation {c.v}")
    half = c.v // 2
    unit = PadicScalar(0, c.s, c.N - c.v if not c.is_exact else EXACT, ctx)
    if p == 2 and unit.rel < 3:
        raise PrecisionInsufficient("need three digits to decide squareness at p = 2")
    if not is_square_residue(unit.s, p):
        raise NotASquare(f"{c} is not a square in Q{p}")
    x0 = PadicScalar.exact(root_mod_p(unit.s, p), ctx)
    f = PPolynomial((zneg(unit), PadicScalar.zero(ctx), PadicScalar.one(ctx)), ctx)
    vd = f.derivative().evaluate(x0).v
    match mode:
        case SqrtMode.ZERO_LIFT:
            if unit.is_exact:
                raise DomainError("an exact radicand needs an explicit precision")
            root = hensel_lift(f, x0, unit.N - vd)
        case SqrtMode.NAIVE_ZEALOUS:
            root = _naive_sqrt(unit, x0, f, vd)
    if half:
        root = zmul(PadicScalar(half, 1, EXACT, ctx), root)
    log.info("sqrt(%s) = %s", c, root)
    return root


def _naive_sqrt(unit: PadicScalar, x0: PadicScalar, f: PPolynomial, vd: int) -> PadicScalar:
    ctx = unit.ctx
    two = PadicScalar.exact(2, ctx)
    r = f.evaluate(x0).val - 2 * vd
    if r is INFINITY:
        return x0.with_precision(unit.N)
    if r <= 0:
        raise HenselHypothesisFailure(f"{x0} is not close enough to a square root")
    x = x0
    i = 0
    while True:
        x = zdiv(zadd(x, zdiv(unit, x)), two)
        i += 1
        certified = vd + r * 2**i
        log.debug("naive sqrt step %d: %s certified %d", i, x, certified)
        if certified >= x.N:
            return x
