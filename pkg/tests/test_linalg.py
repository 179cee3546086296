from fractions import Fraction

import pytest

from padiclab.backends import PFloatBackend, RationalBackend, ZealousBackend
from padiclab.casestudies.fixtures import matrix_m
from padiclab.casestudies.linalg import (
    charpoly,
    charpoly_experiment,
    charpoly_jacobian,
    det_division_free,
    det_experiment,
    det_jacobian,
    det_optimal,
    forward_precisions,
    jacobian_min_valuation,
    lu_differential,
    lu_experiment,
    lu_factor,
    lu_jacobian,
    lu_labels,
)
from padiclab.core import INFINITY, PadicScalar, valuation
from padiclab.errors import PrecisionInsufficient
from padiclab.lattice import PMatrix, hermite_nf, smith_diagonalize
from padiclab.pfloat import PFloatSystem


@pytest.fixture(scope="module")
def M() -> PMatrix:
    return matrix_m()


def _random_unit_minors(ctx, rng, d: int) -> list[list[int]]:
    """Integer matrix whose leading principal minors are units."""
    exact = RationalBackend(ctx, 0)
    while True:
        rows = [[rng.randrange(-50, 51) for _ in range(d)] for _ in range(d)]
        minors = [det_division_free([r[:k] for r in rows[:k]], exact) for k in range(1, d + 1)]
        if all(valuation(m, ctx) == 0 for m in minors):
            return rows


def test_zealous_determinant_is_indistinguishable_from_zero(M):
    det = det_division_free(M.rows, ZealousBackend(M.ctx, 10))
    assert det.indistinguishable_from_zero
    assert det.N == 10


def test_smith_valuations(M):
    assert smith_diagonalize(M).valuations == [0, 2, 3, 5]


def test_optimal_determinant(M):
    det = det_optimal(M)
    assert (det.v, det.s, det.N) == (10, 13, 15)


def test_float_determinant_keeps_five_digits(M):
    floats = PFloatBackend(PFloatSystem(M.ctx, 10))
    det = det_division_free([[floats.from_scalar(x) for x in row] for row in M.rows], floats)
    assert det.e == 10
    assert det.s % 32 == 13


def test_pivoted_float_determinant_is_an_extra_row(M):
    report = det_experiment(M)
    floats = [r for r in report.records if r.backend == "pfloat"]
    assert [r.quantity for r in floats] == ["det", "det:pivoted"]
    assert report.get("det", "pfloat").agreeing >= 5


def test_determinant_of_identity(two):
    identity = PMatrix.identity(3, two)
    assert det_division_free(identity.rows, ZealousBackend(two, 10)) == PadicScalar.one(two)
    assert det_optimal(PMatrix.from_rows([[2, 0], [0, 2]], two)) == PadicScalar.exact(4, two)


def test_determinant_jacobian(M):
    J = det_jacobian(M)
    assert jacobian_min_valuation(J) == 5
    precisions, _ = forward_precisions(J, 10)
    assert precisions == [15]


def test_determinant_jacobian_is_the_comatrix(M):
    values = M.values()
    exact = RationalBackend(M.ctx, 0)
    base = det_division_free(values, exact)
    J = det_jacobian(M)
    h = Fraction(2**12)
    for i in range(4):
        for j in range(4):
            moved = [row[:] for row in values]
            moved[i][j] += h
            assert (det_division_free(moved, exact) - base) / h == J[4 * i + j, 0].value


def test_charpoly_zealous_coefficients(M):
    coeffs = charpoly(M.rows, ZealousBackend(M.ctx, 10))
    expected = [0b0001000010, 0b1000101100, 0b0011100000]
    for x, digits in zip(reversed(coeffs[1:4]), expected, strict=True):
        assert x.N == 10
        assert x.residue() == digits
    assert coeffs[0].indistinguishable_from_zero


def test_charpoly_optimal_precisions(M):
    J = charpoly_jacobian(M)
    precisions, _ = forward_precisions(J, 10)
    assert precisions == [10, 10, 12, 15]
    assert [hermite_nf(J).form[k, k].v for k in range(4)] == [0, 0, 2, 5]


def test_charpoly_of_shifted_matrix(M):
    shifted = PMatrix.from_rows(
        [[x.value + int(i == j) for j, x in enumerate(row)] for i, row in enumerate(M.rows)], M.ctx
    )
    precisions, image = forward_precisions(charpoly_jacobian(shifted), 10)
    assert precisions == [10, 10, 10, 10]
    assert image.diffused_digits() == 7


def test_charpoly_of_zero_matrix(two):
    zero = PMatrix.from_rows([[0, 0], [0, 0]], two)
    assert [c.value for c in charpoly(zero.rows, ZealousBackend(two, 10))] == [0, 0, 1]


def test_lu_zealous_entries(M):
    L, _ = lu_factor(M.rows, ZealousBackend(M.ctx, 10))
    positions = [(i, j) for i in range(4) for j in range(i)]
    entries = {label: L[i][j] for label, (i, j) in zip(lu_labels(4), positions, strict=True)}
    expected = {
        "L21": (-4, 15, 2),
        "L31": (-4, 21, 2),
        "L41": (-4, 11, 2),
        "L32": (0, 35, 6),
        "L42": (0, 21, 6),
        "L43": (1, 3, 3),
    }
    assert {label: (x.v, x.s, x.N) for label, x in entries.items()} == expected


def test_lu_optimal_precisions(M):
    precisions, image = forward_precisions(lu_jacobian(M), 10)
    assert dict(zip(lu_labels(4), precisions, strict=True)) == {
        "L21": 2,
        "L31": 2,
        "L32": 9,
        "L41": 2,
        "L42": 10,
        "L43": 7,
    }
    assert image.diffused_digits() == 9


def test_lu_of_identity(two):
    L, U = lu_factor(PMatrix.identity(3, two).values(), RationalBackend(two, 0))
    assert L == U == [[int(i == j) for j in range(3)] for i in range(3)]


def test_lu_allows_a_vanishing_last_pivot(two):
    L, U = lu_factor([[1, 2], [2, 4]], RationalBackend(two, 0))
    assert L == [[1, 0], [2, 1]]
    assert U == [[1, 2], [0, 0]]
    with pytest.raises(PrecisionInsufficient):
        lu_factor([[0, 1], [1, 0]], RationalBackend(two, 0))


@pytest.mark.parametrize("k", range(8, 13))
def test_lu_differential_matches_finite_differences(three, rng, k):
    exact = RationalBackend(three, 0)
    rows = _random_unit_minors(three, rng, 3)
    h = [[rng.randrange(-9, 10) for _ in range(3)] for _ in range(3)]
    M = PMatrix.from_rows(rows, three)
    L0, U0 = lu_factor(M.values(), exact)
    moved = [[Fraction(rows[i][j] + 3**k * h[i][j]) for j in range(3)] for i in range(3)]
    L1, U1 = lu_factor(moved, exact)
    dL, dU = lu_differential(M, [[Fraction(x) for x in row] for row in h])
    for i in range(3):
        for j in range(3):
            for before, after, first in ((L0, L1, dL), (U0, U1, dU)):
                error = after[i][j] - before[i][j] - 3**k * first[i][j]
                v = valuation(error, three)
                assert v is INFINITY or v >= 2 * k - 2


@pytest.mark.parametrize("k", range(8, 13))
def test_charpoly_jacobian_matches_finite_differences(three, rng, k):
    exact = RationalBackend(three, 0)
    rows = [[rng.randrange(-50, 51) for _ in range(3)] for _ in range(3)]
    h = [[rng.randrange(-9, 10) for _ in range(3)] for _ in range(3)]
    J = charpoly_jacobian(PMatrix.from_rows(rows, three))
    before = charpoly([[Fraction(x) for x in row] for row in rows], exact)
    after = charpoly([[Fraction(rows[i][j] + 3**k * h[i][j]) for j in range(3)] for i in range(3)], exact)
    for c in range(3):
        first = sum(h[i][j] * J[3 * i + j, c].value for i in range(3) for j in range(3))
        error = after[2 - c] - before[2 - c] - 3**k * first
        v = valuation(error, three)
        assert v is INFINITY or v >= 2 * k - 2


def test_experiment_reports(M):
    det = det_experiment(M)
    assert det.get("det", "optimal").precision == "15"
    assert det.get("jacobian_min_valuation").value == "5"
    assert charpoly_experiment(M).get("I+M:diffused_digits").value == "7"
    lu = lu_experiment(M)
    assert lu.get("diffused_digits").value == "9"
    assert lu.get("L43:optimal_precision").value == "7"
