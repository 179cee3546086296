from fractions import Fraction

import pytest

from padiclab.core import (
    EXACT,
    INFINITY,
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    from_base_p,
    legendre_factorial_valuation,
    parse_scalar,
    print_scalar,
    to_base_p,
    valuation,
)
from padiclab.errors import DomainError, ScalarSyntaxError


def test_base_seven_expansion():
    seven = PrimeContext(7)
    assert to_base_p(1742, seven) == [6, 3, 0, 5]
    assert from_base_p([6, 3, 0, 5], seven) == 1742
    assert to_base_p(0, seven) == []


@pytest.mark.parametrize("n", [1, 4, 9, 100])
def test_non_primes_are_rejected(n):
    with pytest.raises(DomainError):
        PrimeContext(n)


def test_canonical_form_extracts_valuation(two):
    x = PadicScalar(0, 12, 10, two)
    assert (x.v, x.s, x.N) == (2, 3, 10)
    assert x.rel == 8


def test_canonical_form_reduces_unit_modulo_relative_precision(two):
    x = PadicScalar(1, 3 + 2**9, 10, two)
    assert x.s == 3


def test_inexact_zero(two):
    x = PadicScalar(0, 16, 4, two)
    assert x.is_inexact_zero
    assert x.val == 4
    assert x.indistinguishable_from_zero
    assert x == PadicScalar.zero(two, 4)


def test_exact_zero_has_infinite_valuation(two):
    zero = PadicScalar.zero(two)
    assert zero.val is INFINITY
    assert zero.N is EXACT
    assert not zero.is_inexact_zero


def test_from_rational(two):
    third = PadicScalar.from_rational(Fraction(1, 3), 4, two)
    assert third.s == 11
    half = PadicScalar.from_rational(Fraction(1, 2), 4, two)
    assert (half.v, half.s, half.N) == (-1, 1, 4)
    assert PadicScalar.from_rational(64, 4, two).is_inexact_zero


def test_exact_rejects_infinite_expansions(two):
    with pytest.raises(DomainError):
        PadicScalar.exact(Fraction(1, 3), two)


def test_residue_of_exact_negative(two):
    assert PadicScalar.exact(-1, two).residue(4) == 15


def test_lift_zero_fills_and_truncate_never_gains(two):
    x = PadicScalar.from_rational(5, 4, two)
    assert x.lift(8).residue() == 5
    assert x.truncate(8).N == 4
    assert x.truncate(2).residue() == 1


def test_valuations(two, five):
    assert valuation(Fraction(12, 5), two) == 2
    assert valuation(Fraction(12, 25), five) == -2
    assert valuation(0, two) is INFINITY


def test_legendre_factorial_valuation(two):
    assert legendre_factorial_valuation(19, two) == 16
    assert sum(legendre_factorial_valuation(n, two) for n in range(1, 20)) == 150


def test_print_arithmetic_round_trip(two):
    x = PadicScalar(2, 3, 10, two)
    text = print_scalar(x, ScalarStyle.ARITHMETIC)
    assert text == "3 * 2^2 + O(2^10)"
    assert parse_scalar(text, two) == x


def test_print_digits(two):
    x = PadicScalar.from_rational(26, 10, two)
    assert print_scalar(x, ScalarStyle.DIGITS) == "...000001101 * 2^1"
    assert parse_scalar("...000001101 * 2^1", two) == x


def test_print_positional(two):
    assert print_scalar(PadicScalar.from_rational(26, 10, two), ScalarStyle.POSITIONAL) == (
        "...0000011010"
    )


def test_parse_digit_form_with_shift(two):
    x = parse_scalar("...01101 * 2^10", two)
    assert (x.v, x.s, x.N) == (10, 13, 15)


def test_bare_digits_are_decimal(two):
    assert parse_scalar("1742", two) == PadicScalar.exact(1742, two)


def test_bare_digits_read_in_base_p_with_the_digit_style(two):
    text = print_scalar(PadicScalar.exact(314, two), ScalarStyle.DIGITS)
    assert text == "100111010"
    assert parse_scalar(text, two) == PadicScalar.exact(100111010, two)
    assert parse_scalar(text, two, ScalarStyle.DIGITS) == PadicScalar.exact(314, two)


@pytest.mark.parametrize("style", list(ScalarStyle))
def test_exact_values_read_back_in_every_style(two, style):
    for value in (0, 1, 5, 12, 314, Fraction(3, 4), Fraction(5, 8)):
        x = PadicScalar.exact(value, two)
        assert parse_scalar(print_scalar(x, style), two, style) == x


def test_exact_fraction_digits(two):
    half = PadicScalar.exact(Fraction(1, 2), two)
    assert print_scalar(half, ScalarStyle.DIGITS) == "0.1"
    assert parse_scalar("0.1", two) == half


def test_exact_negative_digits(two):
    assert print_scalar(PadicScalar.exact(-1, two), ScalarStyle.DIGITS, width=4) == "...1111"


def test_large_prime_digits_are_separated():
    eleven = PrimeContext(11)
    twelve = PadicScalar.exact(12, eleven)
    assert print_scalar(twelve, ScalarStyle.DIGITS) == "1|1"
    assert parse_scalar("1|1", eleven) == twelve


def test_syntax_error_reports_position(two):
    with pytest.raises(ScalarSyntaxError) as info:
        parse_scalar("3 + O(5^4)", two)
    assert info.value.position == 7


@pytest.mark.parametrize("text", ["...0121", "...", "3 * 2^", "3 + O(2^4) junk"])
def test_malformed_literals(two, text):
    with pytest.raises(ScalarSyntaxError):
        parse_scalar(text, two)


def test_arithmetic_round_trip_on_random_scalars(three, rng):
    for _ in range(200):
        N = rng.randint(-3, 12)
        v = rng.randint(N - 6, N - 1)
        x = PadicScalar(v, rng.randrange(1, 3**8), N, three)
        assert parse_scalar(print_scalar(x), three) == x
        assert parse_scalar(print_scalar(x, ScalarStyle.DIGITS), three) == x
