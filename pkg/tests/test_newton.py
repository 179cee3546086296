from fractions import Fraction

import pytest

from padiclab.casestudies.fixtures import sqrt_input
from padiclab.core import PadicScalar
from padiclab.errors import DomainError, HenselHypothesisFailure, NotASquare, PrecisionInsufficient
from padiclab.lattice import PMatrix
from padiclab.newton import (
    PPolynomial,
    SqrtMode,
    format_polynomial,
    hensel_lift,
    newton_inverse,
    newton_inverse_steps,
    newton_matrix_inverse,
    padic_sqrt,
    parse_polynomial,
    root_mod_p,
)
from padiclab.relaxed import LazyConstant

SQRT_DIGITS = "1010111010001010101"


def test_hensel_lifts_square_root_of_minus_one(five):
    f = PPolynomial.from_leading([1, 0, 1], five)
    root = hensel_lift(f, 2, 10)
    assert root.N == 10
    assert (root.residue() ** 2 + 1) % 5**10 == 0


def test_hensel_rejects_a_far_seed(five):
    f = PPolynomial.from_leading([1, 0, -1, -2], five)
    with pytest.raises(HenselHypothesisFailure):
        hensel_lift(f, 2, 10)


def test_hensel_stops_at_coefficient_precision(five):
    f = PPolynomial.from_leading([1, 0, PadicScalar.from_rational(1, 6, five)], five)
    with pytest.raises(PrecisionInsufficient):
        hensel_lift(f, 2, 10)
    root = hensel_lift(f, 2, 10, strict=False)
    assert root.N == 6
    assert (root.residue() ** 2 + 1) % 5**6 == 0


def test_inverse(two):
    x = PadicScalar.from_rational(3, 4, two)
    assert newton_inverse(x) == PadicScalar.from_rational(11, 4, two)
    assert [y.N for y in newton_inverse_steps(x)] == [1, 2, 4]


def test_inverse_of_non_unit(three):
    with pytest.raises(DomainError):
        newton_inverse(PadicScalar.from_rational(6, 8, three))
    with pytest.raises(DomainError):
        next(newton_inverse_steps(PadicScalar.from_rational(Fraction(1, 3), 8, three)))
    with pytest.raises(DomainError):
        newton_inverse(PadicScalar.zero(three, 8))


def test_lazy_inverse(two):
    inverse = newton_inverse(LazyConstant(3, two))
    assert inverse.residue(40) == pow(3, -1, 2**40)


def test_matrix_inverse(two):
    rows = [[1, 2, 4], [3, 5, 2], [7, 1, 9]]
    inverse = newton_matrix_inverse(PMatrix.from_rows(rows, two), 20)
    X = [[x.residue() for x in row] for row in inverse.rows]
    for i in range(3):
        for j in range(3):
            entry = sum(rows[i][k] * X[k][j] for k in range(3)) % 2**20
            assert entry == int(i == j)


def test_sqrt_naive_loses_digits():
    assert padic_sqrt(sqrt_input(), SqrtMode.NAIVE_ZEALOUS).N == 16


def test_sqrt_zero_lift():
    root = padic_sqrt(sqrt_input(), SqrtMode.ZERO_LIFT)
    assert root.N == 19
    assert root.residue() == int(SQRT_DIGITS, 2)


def test_sqrt_variants_agree_and_square_back():
    c = sqrt_input()
    naive = padic_sqrt(c, SqrtMode.NAIVE_ZEALOUS)
    lifted = padic_sqrt(c, SqrtMode.ZERO_LIFT)
    assert lifted.residue(naive.N) == naive.residue()
    assert lifted.residue() ** 2 % 2**19 == c.residue(19)


def test_sqrt_of_even_valuation(three):
    c = PadicScalar.from_rational(9 * 7, 12, three)
    root = padic_sqrt(c)
    assert root.v == 1
    assert (root.residue() ** 2 - 63) % 3**11 == 0


@pytest.mark.parametrize("value", [2, 5, 3 * 4])
def test_non_squares(two, value):
    with pytest.raises(NotASquare):
        padic_sqrt(PadicScalar.from_rational(value, 10, two))


def test_root_mod_large_prime():
    p = 65537
    assert root_mod_p(3 * 3, p) in (3, p - 3)
    square = 12345**2 % p
    assert pow(root_mod_p(square, p), 2, p) == square


def test_polynomial_literals(two):
    f = parse_polynomial("1, 0, 3 + O(2^5)", two)
    assert f.degree == 2
    assert f[0] == PadicScalar.from_rational(3, 5, two)
    assert parse_polynomial(format_polynomial(f), two) == f
