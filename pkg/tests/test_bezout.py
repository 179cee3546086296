from fractions import Fraction

import pytest

from padiclab.backends import RationalBackend, ZealousBackend
from padiclab.casestudies.bezout import (
    bezout,
    bezout_differential,
    bezout_experiment,
    bezout_jacobian,
    bezout_labels,
    boosted_reference,
    hyperplane_jacobian,
    poly_divmod,
)
from padiclab.casestudies.fixtures import bezout_pair
from padiclab.casestudies.linalg import det_division_free
from padiclab.core import INFINITY, PrimeContext, valuation
from padiclab.errors import InexactZeroDivision
from padiclab.lattice import PMatrix, propagate_forward, smith_diagonalize

OPTIMAL_U = ["0011101100", "0100101100", "1101110100", "0010001011"]
OPTIMAL_V = ["1100010100", "1011100100", "0110111100", "0001100101"]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _resultant(P, Q):
    """Sylvester determinant of two polynomials given constant term first."""
    m, n = len(P) - 1, len(Q) - 1
    size = m + n
    rows = [[0] * i + P[::-1] + [0] * (size - m - 1 - i) for i in range(n)]
    rows += [[0] * i + Q[::-1] + [0] * (size - n - 1 - i) for i in range(m)]
    return det_division_free(rows, RationalBackend(PrimeContext(3), 0))


def test_zealous_euclid_loses_digits():
    P, Q = bezout_pair()
    U, V = bezout(list(P.coefficients), list(Q.coefficients), ZealousBackend(P.ctx, 10))
    assert max(x.N for x in U + V) <= 6


def test_boosted_reference_reaches_full_precision():
    P, Q = bezout_pair()
    U, V = boosted_reference(P, Q, 10)
    assert [u.residue() for u in reversed(U)] == [int(d, 2) for d in OPTIMAL_U]
    assert [v.residue() for v in reversed(V)] == [int(d, 2) for d in OPTIMAL_V]
    assert all(x.N == 10 for x in U + V)


def test_diffused_digits_on_the_hyperplane():
    P, Q = bezout_pair()
    image = propagate_forward(hyperplane_jacobian(P, Q), [10] * 8).image
    assert image.diffused_digits() == 14
    assert smith_diagonalize(image.generators).valuations == [10, 10, 10, 10, 14, 14, 16]


def test_square_minor_overcounts_diffused_digits():
    # Freezing the X^3 coefficient of P drops a generator the others do not span.
    P, Q = bezout_pair()
    J = hyperplane_jacobian(P, Q)
    minor = PMatrix(J.rows[1:], J.ctx)
    assert propagate_forward(minor, [10] * 7).image.diffused_digits() == 16
    frozen_constant = PMatrix(J.rows[:3] + J.rows[4:], J.ctx)
    assert propagate_forward(frozen_constant, [10] * 7).image.diffused_digits() == 14


def test_optimal_precision_of_each_coefficient():
    P, Q = bezout_pair()
    forward = propagate_forward(bezout_jacobian(P, Q), [10] * 8)
    assert forward.precisions == [10] * 8
    assert forward.image is None
    for part in (slice(0, 4), slice(4, 8)):
        J = bezout_jacobian(P, Q)
        component = PMatrix(tuple(row[part] for row in J.rows), J.ctx)
        assert propagate_forward(component, [10] * 8).diffused_digits == 0


def test_constant_divisor(two):
    exact = RationalBackend(two, 0)
    U, V = bezout([Fraction(1), Fraction(3), Fraction(1)], [Fraction(1)], exact)
    assert (U, V) == ([], [1, 0])


def test_exact_identity(three, rng):
    exact = RationalBackend(three, 0)
    for _ in range(20):
        P = [Fraction(rng.randrange(-20, 21)) for _ in range(3)] + [Fraction(1)]
        Q = [Fraction(rng.randrange(-20, 21)) for _ in range(2)] + [Fraction(1)]
        try:
            U, V = bezout(P, Q, exact)
        except InexactZeroDivision:
            continue
        total = [a + b for a, b in zip(_poly_mul(U, P), _poly_mul(V, Q), strict=True)]
        assert total[0] == 1
        assert all(c == 0 for c in total[1:])


def test_division_by_inexact_leading_zero(two):
    backend = ZealousBackend(two, 10)
    a = [backend.lift(1), backend.lift(1)]
    b = [backend.lift(1), backend.lift(0)]
    with pytest.raises(InexactZeroDivision):
        poly_divmod(a, b, backend)


@pytest.mark.parametrize("k", range(8, 13))
def test_differential_matches_finite_differences(three, rng, k):
    exact = RationalBackend(three, 0)
    while True:
        P = [Fraction(rng.randrange(-20, 21)) for _ in range(3)] + [Fraction(1)]
        Q = [Fraction(rng.randrange(-20, 21)) for _ in range(3)] + [Fraction(1)]
        try:
            U, V = bezout(P, Q, exact)
        except InexactZeroDivision:
            continue
        if valuation(_resultant(P, Q), three) == 0:
            break
    dP = [Fraction(rng.randrange(-9, 10)) for _ in range(3)]
    dQ = [Fraction(rng.randrange(-9, 10)) for _ in range(3)]
    moved_P = [c + 3**k * d for c, d in zip(P, [*dP, 0], strict=True)]
    moved_Q = [c + 3**k * d for c, d in zip(Q, [*dQ, 0], strict=True)]
    U1, V1 = bezout(moved_P, moved_Q, exact)
    dU, dV = bezout_differential(P, Q, U, V, dP, dQ)
    for before, after, first in ((U, U1, dU), (V, V1, dV)):
        for b, a, f in zip(before, after, first, strict=True):
            v = valuation(a - b - 3**k * f, three)
            assert v is INFINITY or v >= 2 * k - 2


def test_experiment_report():
    P, Q = bezout_pair()
    report = bezout_experiment(P, Q)
    assert bezout_labels(P, Q) == ["U3", "U2", "U1", "U0", "V3", "V2", "V1", "V0"]
    assert report.get("U0", "boosted").agreeing == 10
    assert report.get("diffused_digits").value == "14"
    assert all(report.get(f"{label}:optimal_precision").value == "10" for label in bezout_labels(P, Q))
