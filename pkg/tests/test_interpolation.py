from fractions import Fraction

import pytest

from padiclab.backends import PFloatBackend, RationalBackend, ZealousBackend
from padiclab.casestudies.fixtures import degree8_polynomial, degree19_polynomial
from padiclab.casestudies.interpolation import (
    evaluate_at_first_integers,
    horner_values,
    interpolate_divided_differences,
    interpolation_experiment,
    legendre_diffused_digits,
    vandermonde_lattice,
)
from padiclab.newton import PPolynomial
from padiclab.pfloat import PFloatSystem


def _round_trip(P, backend):
    return interpolate_divided_differences(evaluate_at_first_integers(P, backend), backend)


def test_degree8_zealous_precisions():
    P = degree8_polynomial()
    coeffs = _round_trip(P, ZealousBackend(P.ctx, 10))
    assert [x.N for x in reversed(coeffs)] == [3, 3, 3, 3, 3, 4, 5, 7, 10]


def test_degree8_claimed_digits_are_correct():
    P = degree8_polynomial()
    for x, c in zip(_round_trip(P, ZealousBackend(P.ctx, 10)), P.coefficients, strict=True):
        assert x.residue() == c.residue(x.N)


def test_degree8_float_constant_term():
    P = degree8_polynomial()
    floats = PFloatBackend(PFloatSystem(P.ctx, 10))
    constant = _round_trip(P, floats)[0]
    assert constant.to_scalar().residue(10) == 94


def test_degree19_leading_precision():
    P = degree19_polynomial()
    coeffs = _round_trip(P, ZealousBackend(P.ctx, 10))
    assert coeffs[-1].N == -6


def test_vandermonde_diffused_digits(two):
    assert vandermonde_lattice(list(range(20)), two).diffused_digits() == 150
    assert legendre_diffused_digits(19, two) == 150


@pytest.mark.parametrize("degree", [0, 1, 5, 12, 25])
def test_exact_round_trip_is_identity(three, rng, degree):
    coefficients = [Fraction(rng.randrange(-100, 101), rng.choice([1, 2, 9])) for _ in range(degree + 1)]
    exact = RationalBackend(three, 0)
    values = horner_values(coefficients, range(degree + 1), exact)
    assert interpolate_divided_differences(values, exact) == coefficients


def test_round_trip_of_a_polynomial_with_p_power_denominators(three):
    P = PPolynomial.from_coefficients([Fraction(1, 9), -4, Fraction(7, 3), 0, 1], three)
    exact = RationalBackend(three, 0)
    assert _round_trip(P, exact) == [c.value for c in P.coefficients]


def test_experiment_report():
    report = interpolation_experiment(degree8_polynomial())
    assert report.get("round_trip_exact").value == "True"
    assert report.get("vandermonde_diffused_digits").value == report.get("legendre_sum").value
    assert report.get("1", "zealous").precision == "10"
