"""
Zealous (interval) arithmetic over Qp.

Every value is a ball p^v * s + O(p^N); the four operations return exactly
the image set of their operands.
"""

import logging

from .core import PadicScalar, scalar_add, scalar_mul, scalar_neg
from .errors import DomainError, InexactZeroDivision

log = logging.getLogger(__name__)

DEFAULT_HEADROOM = 64


def _coerce(
    x: PadicScalar, y: PadicScalar, headroom: int
) -> tuple[PadicScalar, PadicScalar]:
    """Bring an exact operand down to its inexact partner's precision + headroom."""
    if x.is_exact and not y.is_exact:
        x = x.lift(y.N + headroom)
    elif y.is_exact and not x.is_exact:
        y = y.lift(x.N + headroom)
    return x, y


def _check_context(x: PadicScalar, y: PadicScalar) -> None:
    if x.ctx != y.ctx:
        raise DomainError(f"mixed prime contexts: {x.ctx} and {y.ctx}")


def zneg(x: PadicScalar) -> PadicScalar:
    if x.is_exact:
        return scalar_neg(x)
    return PadicScalar(x.v, -x.s, x.N, x.ctx)


def zadd(x: PadicScalar, y: PadicScalar, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    """I + J with abs(I + J) = min(abs I, abs J)."""
    _check_context(x, y)
    x, y = _coerce(x, y, headroom)
    if x.is_exact and y.is_exact:
        return scalar_add(x, y)
    p = x.ctx.p
    w = min(x.v, y.v)
    s = x.s * p ** (x.v - w) + y.s * p ** (y.v - w)
    return PadicScalar(w, s, min(x.N, y.N), x.ctx)


def zsub(x: PadicScalar, y: PadicScalar, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    return zadd(x, zneg(y), headroom)


def zmul(x: PadicScalar, y: PadicScalar, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    """I * J at precision min(v + N', N + v')."""
    _check_context(x, y)
    x, y = _coerce(x, y, headroom)
    if x.is_exact and y.is_exact:
        return scalar_mul(x, y)
    N = min(x.v + y.N, x.N + y.v)
    return PadicScalar(x.v + y.v, x.s * y.s, N, x.ctx)


def zdiv(x: PadicScalar, y: PadicScalar, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    """I / J at precision min(v + N' - 2v', N - v').

    Raises:
        InexactZeroDivision: when J contains 0.
    """
    _check_context(x, y)
    if y.s == 0:
        raise InexactZeroDivision(f"division of {x} by {y}")
    x, y = _coerce(x, y, headroom)
    if x.is_exact and y.is_exact:
        try:
            return PadicScalar.exact(x.value / y.value, x.ctx)
        except DomainError:
            x, y = x.lift(x.v + headroom), y.lift(y.v + headroom)
    p = x.ctx.p
    N = min(x.v + y.N - 2 * y.v, x.N - y.v)
    v = x.v - y.v
    if x.s == 0 or v >= N:
        return PadicScalar.zero(x.ctx, N)
    modulus = p ** (N - v)
    return PadicScalar(v, x.s * pow(y.s, -1, modulus), N, x.ctx)


def zinv(x: PadicScalar, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    return zdiv(PadicScalar.one(x.ctx), x, headroom)


def zpow_p(x: PadicScalar) -> PadicScalar:
    """x^p with the one-digit precision gain of units: a^p + O(p^(N+1))."""
    if x.val != 0:
        raise DomainError(f"zpow_p needs a unit, got valuation {x.val}")
    p = x.ctx.p
    if x.is_exact:
        return PadicScalar(0, x.s**p, x.N, x.ctx)
    return PadicScalar(0, x.s**p, x.N + 1, x.ctx)


def zpow(x: PadicScalar, k: int, headroom: int = DEFAULT_HEADROOM) -> PadicScalar:
    """x^k by repeated zealous multiplication (k >= 1)."""
    result = x
    for _ in range(k - 1):
        result = zmul(result, x, headroom)
    return result
