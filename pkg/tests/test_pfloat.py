from fractions import Fraction
from itertools import product

import pytest

from padiclab.core import PadicScalar
from padiclab.errors import DomainError
from padiclab.pfloat import (
    PFloat,
    PFloatSystem,
    balanced_mod,
    fadd,
    fdiv,
    fmul,
    fneg,
    fsub,
    normalize,
    render,
    round_to_float,
)


@pytest.fixture
def small(two) -> PFloatSystem:
    return PFloatSystem(two, 3, e_min=-4, e_max=4)


def _finite_floats(system: PFloatSystem, exponents: range) -> list[PFloat]:
    half = system.modulus // 2
    units = [s for s in range(-half + 1, half + 1) if s % system.ctx.p]
    return [PFloat(e, s, system) for e in exponents for s in units]


def test_balanced_range_prefers_positive_side():
    assert balanced_mod(4, 8) == 4
    assert balanced_mod(5, 8) == -3
    assert balanced_mod(-1, 8) == -1


def test_balanced_midpoint_is_positive():
    assert balanced_mod(-4, 8) == 4
    assert balanced_mod(12, 8) == 4
    assert balanced_mod(2**9, 2**10) == 2**9
    assert balanced_mod(4, 9) == 4
    assert balanced_mod(5, 9) == -4


def test_normalize(two):
    system = PFloatSystem(two, 3)
    assert normalize(0, 12, system) == PFloat(2, 3, system)


def test_rounding(two):
    system = PFloatSystem(two, 3)
    assert round_to_float(9, system) == PFloat(0, 1, system)
    assert round_to_float(0, system).is_zero


def test_addition_cancellation_and_absorption(two):
    system = PFloatSystem(two, 4)
    assert fadd(PFloat(0, 3, system), PFloat(0, 5, system)) == PFloat(3, 1, system)
    assert fadd(PFloat(0, 1, system), PFloat(5, 1, system)) == PFloat(0, 1, system)


def test_overflow_and_underflow(small):
    assert round_to_float(Fraction(1, 2**10), small).is_infinity
    assert round_to_float(2**10, small).is_zero
    assert fmul(PFloat(3, 1, small), PFloat(3, 1, small)).is_zero


def test_special_values(small):
    one = PFloat(0, 1, small)
    assert fdiv(one, small.zero).is_infinity
    assert fdiv(small.zero, small.zero).is_nan
    assert fmul(small.infinity, small.zero).is_nan
    assert fadd(small.nan, one).is_nan
    assert fdiv(one, small.infinity).is_zero
    assert render(small.nan) == "NaN"
    assert render(small.infinity) == "Infinity"


def test_specials_have_no_scalar(small):
    with pytest.raises(DomainError):
        small.infinity.to_scalar()


def test_to_scalar_is_the_rounding_ball(two):
    system = PFloatSystem(two, 5)
    x = PFloat(2, -3, system)
    assert x.to_scalar() == PadicScalar.from_rational(-12, 7, two)


def test_operations_are_correctly_rounded(small):
    floats = _finite_floats(small, range(-2, 3))
    for x, y in product(floats, repeat=2):
        assert fadd(x, y) == round_to_float(x.value + y.value, small)
        assert fsub(x, y) == round_to_float(x.value - y.value, small)
        assert fmul(x, y) == round_to_float(x.value * y.value, small)
        assert fdiv(x, y) == round_to_float(x.value / y.value, small)


def test_commutativity_and_negation(small):
    floats = [small.zero, small.infinity, small.nan, *_finite_floats(small, range(-2, 3))]
    for x, y in product(floats, repeat=2):
        assert fadd(x, y) == fadd(y, x)
        assert fmul(x, y) == fmul(y, x)
    for x in floats:
        assert fneg(fneg(x)) == x
        if x.is_finite:
            assert fadd(x, fneg(x)).is_zero
            assert round_to_float(x.value, small) == x
