"""Worked-example inputs loaded from the packaged fixtures.toml."""

import tomllib
from functools import cache
from pathlib import Path
from typing import Any

from ..core import PadicScalar, PrimeContext
from ..lattice import PMatrix
from ..newton import PPolynomial

# fixtures.toml ships inside the package next to this module.
FIXTURES_PATH = Path(__file__).resolve().parent / "fixtures.toml"


@cache
def load_fixtures() -> dict[str, Any]:
    with open(FIXTURES_PATH, "rb") as f:
        return tomllib.load(f)


def _section(name: str) -> tuple[dict[str, Any], PrimeContext, int]:
    section = load_fixtures()[name]
    return section, PrimeContext(section["p"]), section["precision"]


def digit_scalar(text: str, N: int, ctx: PrimeContext) -> PadicScalar:
    """Scalar whose last N digits are ``text`` (most significant first)."""
    return PadicScalar.from_rational(int(text, ctx.p), N, ctx)


def matrix_m() -> PMatrix:
    """The 4x4 determinant/charpoly/LU input, entries modulo 2^10."""
    section, ctx, N = _section("matrix_m")
    return PMatrix.from_rows([[digit_scalar(x, N, ctx) for x in row] for row in section["rows"]], ctx)


def bezout_pair() -> tuple[PPolynomial, PPolynomial]:
    section, ctx, N = _section("bezout")
    one = PadicScalar.one(ctx)
    P, Q = (
        PPolynomial.from_leading([one, *(digit_scalar(c, N, ctx) for c in section[key])], ctx)
        for key in ("P", "Q")
    )
    return P, Q


def _polynomial(name: str) -> PPolynomial:
    section, ctx, N = _section(name)
    return PPolynomial.from_leading([digit_scalar(c, N, ctx) for c in section["coefficients"]], ctx)


def degree8_polynomial() -> PPolynomial:
    return _polynomial("degree8")


def degree19_polynomial() -> PPolynomial:
    return _polynomial("degree19")


def sqrt_input() -> PadicScalar:
    """1 + 2^3 + 2^4 + 2^5 + 2^10 + 2^13 + 2^16 + 2^17 + 2^18 + 2^19 + O(2^20)."""
    section, ctx, N = _section("sqrt_input")
    return digit_scalar(section["digits"], N, ctx)
