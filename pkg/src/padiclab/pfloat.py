"""
p-adic floating-point arithmetic.

A system fixes the significand length N and the exponent window
[e_min, e_max]. Finite nonzero floats are p^e * s with s a unit reduced into
the balanced range modulo p^N. Zero, infinity and NaN use the reserved
encodings (e_max, 0), (e_min - 1, 1) and (e_min - 1, 0).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    print_scalar,
    rational_mod_pN,
    split_valuation,
    valuation,
)
from .errors import DomainError

log = logging.getLogger(__name__)


def balanced_mod(s: int, modulus: int) -> int:
    """Representative of s modulo ``modulus`` closest to 0, preferring the positive side."""
    r = s % modulus
    if 2 * r > modulus:
        r -= modulus
    return r


@dataclass(frozen=True)
class PFloatSystem:
    ctx: PrimeContext
    N: int = 53
    e_min: int = -(2**30)
    e_max: int = 2**30

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"Invalid significand length: {self.N}")
        if self.e_min >= self.e_max:
            raise DomainError(f"Invalid exponent range: [{self.e_min}, {self.e_max}]")

    @property
    def modulus(self) -> int:
        return self.ctx.p**self.N

    @property
    def zero(self) -> "PFloat":
        return PFloat(self.e_max, 0, self)

    @property
    def infinity(self) -> "PFloat":
        return PFloat(self.e_min - 1, 1, self)

    @property
    def nan(self) -> "PFloat":
        return PFloat(self.e_min - 1, 0, self)


@dataclass(frozen=True)
class PFloat:
    e: int
    s: int
    system: PFloatSystem

    @property
    def is_nan(self) -> bool:
        return self.e == self.system.e_min - 1 and self.s == 0

    @property
    def is_infinity(self) -> bool:
        return self.e == self.system.e_min - 1 and self.s == 1

    @property
    def is_zero(self) -> bool:
        return self.e == self.system.e_max and self.s == 0

    @property
    def is_finite(self) -> bool:
        """Finite and nonzero."""
        return not (self.is_nan or self.is_infinity or self.is_zero)

    @property
    def value(self) -> Fraction | None:
        """Exact value p^e * s; None for infinity and NaN."""
        if self.is_zero:
            return Fraction(0)
        if not self.is_finite:
            return None
        return Fraction(self.s) * Fraction(self.system.ctx.p) ** self.e

    def to_scalar(self) -> PadicScalar:
        """The ball p^e * s + O(p^(e+N)) this float stands for."""
        if not self.is_finite:
            raise DomainError(f"{self} has no scalar value")
        return PadicScalar(self.e, self.s, self.e + self.system.N, self.system.ctx)

    def __str__(self) -> str:
        return render(self)


def render(x: PFloat, style: ScalarStyle = ScalarStyle.DIGITS) -> str:
    if x.is_nan:
        return "NaN"
    if x.is_infinity:
        return "Infinity"
    if x.is_zero:
        return "0"
    return print_scalar(x.to_scalar(), style)


def normalize(e: int, s: int, system: PFloatSystem) -> PFloat:
    """Bring (e, s) into normalized form, mapping out-of-range exponents to specials."""
    if e < system.e_min:
        return system.nan if s == 0 else system.infinity
    if e > system.e_max or s == 0:
        return system.zero
    k, unit = split_valuation(s, system.ctx.p)
    if k:
        return normalize(e + k, balanced_mod(unit, system.modulus), system)
    return PFloat(e, balanced_mod(s, system.modulus), system)


def round_to_float(x: Fraction | int | PadicScalar | PFloat, system: PFloatSystem) -> PFloat:
    """The rounding function o(x): the unique float within |x| * p^-N of x.

    Overflow (val < e_min) gives infinity, underflow (val > e_max) gives 0.
    """
    if isinstance(x, PFloat):
        return x
    if isinstance(x, PadicScalar):
        if x.indistinguishable_from_zero:
            return system.zero
        x = x.value
    x = Fraction(x)
    if x == 0:
        return system.zero
    v = valuation(x, system.ctx)
    if v < system.e_min:
        return system.infinity
    if v > system.e_max:
        return system.zero
    unit = x / Fraction(system.ctx.p) ** v
    return PFloat(v, balanced_mod(rational_mod_pN(unit, system.ctx, system.N), system.modulus), system)


def fneg(x: PFloat) -> PFloat:
    if not x.is_finite:
        return x
    return PFloat(x.e, balanced_mod(-x.s, x.system.modulus), x.system)


def fadd(x: PFloat, y: PFloat) -> PFloat:
    system = x.system
    if x.is_nan or y.is_nan:
        return system.nan
    if x.is_infinity or y.is_infinity:
        return system.infinity
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    if x.e > y.e:
        x, y = y, x
    p, modulus = system.ctx.p, system.modulus
    if x.e < y.e:
        shift = y.e - x.e
        if shift >= system.N:
            return x
        return PFloat(x.e, balanced_mod(x.s + p**shift * y.s, modulus), system)
    total = x.s + y.s
    if total == 0:
        return system.zero
    v, unit = split_valuation(total, p)
    if v > system.e_max - x.e:
        return system.zero
    return PFloat(x.e + v, balanced_mod(unit, modulus), system)


def fsub(x: PFloat, y: PFloat) -> PFloat:
    return fadd(x, fneg(y))


def fmul(x: PFloat, y: PFloat) -> PFloat:
    system = x.system
    if x.is_nan or y.is_nan:
        return system.nan
    if x.is_infinity or y.is_infinity:
        return system.nan if x.is_zero or y.is_zero else system.infinity
    if x.is_zero or y.is_zero:
        return system.zero
    e = x.e + y.e
    if e > system.e_max:
        return system.zero
    if e < system.e_min:
        return system.infinity
    return PFloat(e, balanced_mod(x.s * y.s, system.modulus), system)


def fdiv(x: PFloat, y: PFloat) -> PFloat:
    system = x.system
    if x.is_nan or y.is_nan:
        return system.nan
    if y.is_zero:
        return system.nan if x.is_zero else system.infinity
    if y.is_infinity:
        return system.nan if x.is_infinity else system.zero
    if x.is_infinity:
        return system.infinity
    if x.is_zero:
        return system.zero
    e = x.e - y.e
    if e < system.e_min:
        return system.infinity
    if e > system.e_max:
        return system.zero
    modulus = system.modulus
    return PFloat(e, balanced_mod(x.s * pow(y.s, -1, modulus), modulus), system)
