#!/usr/bin/env python3
"""
Exact base-p digit machinery.

Base-p expansions, valuations, the canonical scalar type ``PadicScalar``,
literal parsing and printing, and the exact rational oracle layer shared by
every backend.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering

from .errors import DomainError, ScalarSyntaxError

log = logging.getLogger(__name__)

type Rational = Fraction


@total_ordering
class _Infinity:
    """Tagged +infinity: valuation of exact zero and precision of exact values."""

    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("padiclab.INFINITY")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int | _Infinity):
            return False
        return NotImplemented

    def __add__(self, other: object) -> "_Infinity":
        if isinstance(other, int | _Infinity):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> "_Infinity":
        if other is self:
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        if isinstance(other, int):
            return self
        return NotImplemented

    def __rsub__(self, other: object) -> "_Infinity":
        raise ArithmeticError("finite minus INFINITY is undefined")

    def __mul__(self, other: object) -> "_Infinity":
        if isinstance(other, int) and other > 0:
            return self
        return NotImplemented

    __rmul__ = __mul__


INFINITY = _Infinity()
EXACT = INFINITY

type Extended = int | _Infinity


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The fixed prime p and the search bound for lazy valuations."""

    p: int
    val_cap: int = 2**16

    def __post_init__(self):
        if not _is_prime(self.p):
            raise DomainError(f"Invalid prime: {self.p}")
        if self.val_cap < 1:
            raise DomainError(f"Invalid valuation cap: {self.val_cap}")

    def __str__(self) -> str:
        return f"p={self.p}"


def to_base_p(n: int, ctx: PrimeContext) -> list[int]:
    """Little-endian base-p digits of a nonnegative integer (empty for 0)."""
    if n < 0:
        raise DomainError(f"to_base_p expects a nonnegative integer, got {n}")
    digits = []
    while n:
        n, d = divmod(n, ctx.p)
        digits.append(d)
    return digits


def from_base_p(digits: list[int], ctx: PrimeContext) -> int:
    """Inverse of :func:`to_base_p`."""
    n = 0
    for d in reversed(digits):
        n = n * ctx.p + d
    return n


def split_valuation(n: int, p: int) -> tuple[int, int]:
    """Return (k, u) with n = p^k * u and p not dividing u; n must be nonzero."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def valuation(n: int | Fraction, ctx: PrimeContext) -> Extended:
    """p-adic valuation of an integer or rational; INFINITY for zero."""
    if n == 0:
        return INFINITY
    if isinstance(n, Fraction):
        return split_valuation(n.numerator, ctx.p)[0] - split_valuation(n.denominator, ctx.p)[0]
    return split_valuation(n, ctx.p)[0]


def legendre_factorial_valuation(n: int, ctx: PrimeContext) -> int:
    """val_p(n!) = floor(n/p) + floor(n/p^2) + ..."""
    if n < 0:
        raise DomainError(f"factorial of a negative integer: {n}")
    total, q = 0, n
    while q:
        q //= ctx.p
        total += q
    return total


def rational_mod_pN(x: Fraction | int, ctx: PrimeContext, N: int) -> int:
    """Canonical residue of a p-integral rational modulo p^N."""
    x = Fraction(x)
    if x.denominator % ctx.p == 0:
        raise DomainError(f"{x} is not p-integral for {ctx}")
    modulus = ctx.p**N
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


@dataclass(frozen=True)
class PadicScalar:
    """The set p^v * s + O(p^N), stored in canonical form.

    Finite precision: either the inexact zero (N, N, 0) or v < N with
    0 <= s < p^(N - v) and s coprime to p. Exact values (N is EXACT) keep the
    sign of s and are (0, 0) for zero.
    """

    v: int
    s: int
    N: Extended
    ctx: PrimeContext

    def __post_init__(self):
        p = self.ctx.p
        v, s, N = self.v, self.s, self.N
        if N is EXACT:
            if s == 0:
                v = 0
            else:
                k, s = split_valuation(s, p)
                v += k
        elif s == 0 or v >= N:
            v, s = N, 0
        else:
            k, s = split_valuation(s, p)
            v += k
            if v >= N:
                v, s = N, 0
            else:
                s %= p ** (N - v)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "s", s)

    @classmethod
    def exact(cls, n: int | Fraction, ctx: PrimeContext) -> "PadicScalar":
        """Exact scalar; rationals must have a power of p as denominator."""
        n = Fraction(n)
        if n == 0:
            return cls(0, 0, EXACT, ctx)
        k, rest = split_valuation(n.denominator, ctx.p)
        if rest != 1:
            raise DomainError(f"{n} has no finite base-{ctx.p} expansion")
        return cls(-k, n.numerator, EXACT, ctx)

    @classmethod
    def from_rational(cls, x: Fraction | int, N: int, ctx: PrimeContext) -> "PadicScalar":
        """Reduce a rational to absolute precision N."""
        x = Fraction(x)
        if x == 0:
            return cls.zero(ctx, N)
        w = valuation(x, ctx)
        unit = x / Fraction(ctx.p) ** w
        if w >= N:
            return cls.zero(ctx, N)
        return cls(w, rational_mod_pN(unit, ctx, N - w), N, ctx)

    @classmethod
    def zero(cls, ctx: PrimeContext, N: Extended = EXACT) -> "PadicScalar":
        return cls(0, 0, N, ctx)

    @classmethod
    def one(cls, ctx: PrimeContext) -> "PadicScalar":
        return cls(0, 1, EXACT, ctx)

    @property
    def abs_prec(self) -> Extended:
        return self.N

    @property
    def val(self) -> Extended:
        """Valuation; INFINITY for the exact zero, N for an inexact zero."""
        if self.N is EXACT and self.s == 0:
            return INFINITY
        return self.v

    @property
    def rel(self) -> Extended:
        if self.N is EXACT:
            return INFINITY
        return self.N - self.v

    @property
    def is_exact(self) -> bool:
        return self.N is EXACT

    @property
    def is_inexact_zero(self) -> bool:
        return self.N is not EXACT and self.s == 0

    @property
    def indistinguishable_from_zero(self) -> bool:
        return self.s == 0

    @property
    def value(self) -> Fraction:
        """The zero-filled representative p^v * s."""
        return Fraction(self.s) * Fraction(self.ctx.p) ** self.v

    def with_precision(self, N: Extended) -> "PadicScalar":
        """Same representative at absolute precision N (zero-fills or truncates)."""
        return PadicScalar(self.v, self.s, N, self.ctx)

    def lift(self, N: Extended) -> "PadicScalar":
        """Zero-fill the unknown digits up to precision N."""
        return self.with_precision(N)

    def truncate(self, N: Extended) -> "PadicScalar":
        return self.with_precision(min(N, self.N))

    def as_exact(self) -> "PadicScalar":
        return self.with_precision(EXACT)

    def residue(self, N: int | None = None) -> int:
        """Representative modulo p^N (default: the absolute precision)."""
        if N is None:
            if self.N is EXACT:
                raise DomainError("an exact scalar needs an explicit modulus")
            N = self.N
        if self.s == 0:
            return 0
        if self.v < 0:
            raise DomainError(f"{self} is not a p-adic integer")
        modulus = self.ctx.p**N
        return self.ctx.p**self.v * self.s % modulus

    def digits(self) -> list[int]:
        """Little-endian digits of the unit part (rel(x) digits when inexact)."""
        if self.N is EXACT:
            return to_base_p(abs(self.s), self.ctx)
        ds = to_base_p(self.s, self.ctx)
        return ds + [0] * (self.N - self.v - len(ds))

    def __str__(self) -> str:
        return print_scalar(self, ScalarStyle.ARITHMETIC)


def scalar_add(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    _require_exact(x, y)
    return PadicScalar.exact(x.value + y.value, x.ctx)


def scalar_mul(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    _require_exact(x, y)
    return PadicScalar.exact(x.value * y.value, x.ctx)


def scalar_neg(x: PadicScalar) -> PadicScalar:
    _require_exact(x)
    return PadicScalar(x.v, -x.s, EXACT, x.ctx)


def _require_exact(*xs: PadicScalar) -> None:
    for x in xs:
        if not x.is_exact:
            raise DomainError(f"exact operand expected, got {x}")


class ScalarStyle(Enum):
    """Rendering styles for scalars."""

    ARITHMETIC = "arithmetic"  # s * p^v + O(p^N)
    DIGITS = "digits"  # ...01101 * 2^10
    POSITIONAL = "positional"  # fixed-width residue, ...0000011010


DEFAULT_NEGATIVE_WIDTH = 20


def format_digits(msf: list[int], ctx: PrimeContext) -> str:
    """Render most-significant-first digits, '|'-separated when p > 10."""
    if ctx.p > 10:
        return "|".join(str(d) for d in msf)
    return "".join(str(d) for d in msf)


def print_scalar(
    x: PadicScalar,
    style: ScalarStyle = ScalarStyle.ARITHMETIC,
    *,
    width: int | None = None,
) -> str:
    """Render a scalar.

    Args:
        x: the scalar
        style: arithmetic, digits or positional
        width: digit count for exact negatives (digits) or for the residue
            window (positional)

    Returns:
        The literal; parse_scalar with the same style reads it back as ``x``
        (exact negatives excepted: they print a truncated expansion). An exact
        nonnegative integer prints as bare digits, which parse as base 10
        unless the style is given.
    """
    match style:
        case ScalarStyle.ARITHMETIC:
            return _print_arithmetic(x)
        case ScalarStyle.DIGITS:
            return _print_digits(x, width)
        case ScalarStyle.POSITIONAL:
            return _print_positional(x, width)


def _print_arithmetic(x: PadicScalar) -> str:
    p = x.ctx.p
    if x.is_exact:
        if x.s == 0:
            return "0"
        return f"{x.s}" if x.v == 0 else f"{x.s} * {p}^{x.v}"
    if x.s == 0:
        return f"0 + O({p}^{x.N})"
    head = f"{x.s}" if x.v == 0 else f"{x.s} * {p}^{x.v}"
    return f"{head} + O({p}^{x.N})"


def _print_digits(x: PadicScalar, width: int | None) -> str:
    ctx, p = x.ctx, x.ctx.p
    if x.is_exact:
        if x.s == 0:
            return "0"
        if x.s < 0:
            width = width or DEFAULT_NEGATIVE_WIDTH
            unit = x.s % p**width
            msf = (to_base_p(unit, ctx) + [0] * width)[:width][::-1]
            return _place("..." + format_digits(msf, ctx), x.v, p)
        if x.v >= 0:
            return format_digits(to_base_p(x.s * p**x.v, ctx)[::-1], ctx)
        digits = to_base_p(x.s, ctx)
        digits += [0] * (-x.v - len(digits) + 1)
        return _radix(digits, -x.v, ctx)
    if x.s == 0:
        if x.N <= 0:
            return _print_arithmetic(x)
        return "..." + format_digits([0] * x.N, ctx)
    digits = x.digits()
    if x.v < 0 < x.N:
        return "..." + _radix(digits, -x.v, ctx)
    return _place("..." + format_digits(digits[::-1], ctx), x.v, p)


def _radix(digits: list[int], frac: int, ctx: PrimeContext) -> str:
    msf = digits[::-1]
    cut = len(msf) - frac
    return format_digits(msf[:cut], ctx) + "." + format_digits(msf[cut:], ctx)


def _place(body: str, v: int, p: int) -> str:
    return body if v == 0 else f"{body} * {p}^{v}"


def _print_positional(x: PadicScalar, width: int | None) -> str:
    ctx = x.ctx
    if x.val is not INFINITY and x.val < 0:
        return _print_digits(x, width)
    if width is None:
        width = x.N if not x.is_exact else max(len(to_base_p(abs(x.s) * ctx.p**x.v, ctx)), 1)
    if not x.is_exact:
        width = min(width, x.N)
    residue = x.residue(width) if x.s else 0
    msf = (to_base_p(residue, ctx) + [0] * width)[:width][::-1]
    prefix = "" if x.is_exact and x.s >= 0 else "..."
    return prefix + format_digits(msf, ctx)


class _Scanner:
    """Character scanner over a literal with position-tagged errors."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ScalarSyntaxError:
        return ScalarSyntaxError(f"Invalid literal {self.text!r}: {message}", self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str = "") -> bool:
        self.skip_ws()
        if token:
            return self.text.startswith(token, self.pos)
        return self.pos < len(self.text)

    def accept(self, token: str) -> bool:
        if self.peek(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.accept(token):
            raise self.error(f"expected {token!r}")

    def uint(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected digits")
        return int(self.text[start : self.pos])

    def signed(self) -> int:
        sign = -1 if self.accept("-") else 1
        return sign * self.uint()

    def at_end(self) -> bool:
        return not self.peek()

    def finish(self) -> None:
        if not self.at_end():
            raise self.error("unexpected trailing characters")


def _is_digitform(text: str) -> bool:
    stripped = text.strip()
    return stripped.startswith("...") or "." in stripped or "|" in stripped


def parse_scalar(
    text: str, ctx: PrimeContext, style: ScalarStyle | None = None
) -> PadicScalar:
    """Parse a scalar literal.

    Without an explicit style, text starting with '...' or containing '.' or
    '|' is read as base-p digits; anything else is the arithmetic form, where
    a bare digit string is a base-10 integer. The digits and positional styles
    read a bare digit string in base p.
    """
    scanner = _Scanner(text)
    if style is None:
        style = ScalarStyle.DIGITS if _is_digitform(text) else ScalarStyle.ARITHMETIC
    if style is ScalarStyle.ARITHMETIC:
        return _parse_arithmetic(scanner, ctx)
    return _parse_digitform(scanner, ctx)


def _parse_prime_power(scanner: _Scanner, ctx: PrimeContext) -> int:
    base = scanner.uint()
    if base != ctx.p:
        raise scanner.error(f"base {base} does not match {ctx}")
    scanner.expect("^")
    return scanner.signed()


def _parse_arithmetic(scanner: _Scanner, ctx: PrimeContext) -> PadicScalar:
    if scanner.accept("O("):
        N = _parse_prime_power(scanner, ctx)
        scanner.expect(")")
        scanner.finish()
        return PadicScalar.zero(ctx, N)
    sign = -1 if scanner.accept("-") else 1
    s = sign * scanner.uint()
    v = 0
    if scanner.accept("*"):
        v = _parse_prime_power(scanner, ctx)
    N: Extended = EXACT
    if scanner.accept("+"):
        scanner.expect("O(")
        N = _parse_prime_power(scanner, ctx)
        scanner.expect(")")
    scanner.finish()
    return PadicScalar(v, s, N, ctx)


def _parse_digit_run(scanner: _Scanner, ctx: PrimeContext) -> list[int]:
    """Most-significant-first digits up to '.', '*' or the end."""
    digits = []
    scanner.skip_ws()
    if ctx.p > 10:
        if not scanner.peek() or not scanner.text[scanner.pos].isdigit():
            return digits
        digits.append(scanner.uint())
        while scanner.accept("|"):
            digits.append(scanner.uint())
    else:
        text = scanner.text
        while scanner.pos < len(text) and text[scanner.pos].isdigit():
            digits.append(int(text[scanner.pos]))
            scanner.pos += 1
    for d in digits:
        if d >= ctx.p:
            raise scanner.error(f"digit {d} out of range for {ctx}")
    return digits


def _parse_digitform(scanner: _Scanner, ctx: PrimeContext) -> PadicScalar:
    inexact = scanner.accept("...")
    whole = _parse_digit_run(scanner, ctx)
    if not whole:
        raise scanner.error("expected base-p digits")
    frac: list[int] = []
    if scanner.accept("."):
        frac = _parse_digit_run(scanner, ctx)
        if not frac:
            raise scanner.error("empty fractional part")
    shift = 0
    if scanner.accept("*"):
        shift = _parse_prime_power(scanner, ctx)
    scanner.finish()
    s = from_base_p((whole + frac)[::-1], ctx)
    v = shift - len(frac)
    N: Extended = shift + len(whole) if inexact else EXACT
    return PadicScalar(v, s, N, ctx)
