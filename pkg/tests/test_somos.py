from fractions import Fraction

import pytest

from padiclab.backends import RationalBackend
from padiclab.casestudies.linalg import det_division_free
from padiclab.casestudies.somos import (
    SomosMode,
    failure_index,
    somos,
    somos_exact,
    somos_experiment,
    somos_jacobian_rows,
    stabilized_somos,
)
from padiclab.core import INFINITY, PadicScalar, PrimeContext, valuation
from padiclab.errors import DomainError, PrecisionError

ONES = (1, 1, 1, 1)
ONES_THREE = (1, 1, 1, 3)


def test_exact_terms():
    assert somos_exact(ONES, 10)[4:] == [2, 3, 7, 23, 59, 314]
    assert all(u.denominator == 1 for u in somos_exact(ONES, 40))


def test_oracle(two):
    result = somos(ONES, 50, SomosMode.RATIONAL, two)
    assert result.value.residue() == 26
    assert result.render() == "...0000011010"


def test_naive_zealous_fails_at_u54(two):
    assert failure_index(ONES, 53, SomosMode.NAIVE_ZEALOUS, two) is None
    assert failure_index(ONES, 60, SomosMode.NAIVE_ZEALOUS, two) == 54


def test_naive_lazy_demand(two):
    result = somos(ONES, 50, SomosMode.NAIVE_LAZY, two)
    assert result.value.residue() == 26
    assert max(result.demand) == 19


def test_stabilized_zealous(two):
    seeds = [PadicScalar.from_rational(s, 10, two) for s in ONES]
    u50 = stabilized_somos(seeds, 50)
    assert u50.N == 10
    assert u50.residue() == 26


def test_stabilized_lazy(two):
    assert somos(ONES, 50, SomosMode.STABILIZED_LAZY, two).value.residue() == 26


def test_second_sequence_vanishes_at_u15(two):
    result = somos(ONES_THREE, 15, SomosMode.NAIVE_ZEALOUS, two)
    assert result.value.indistinguishable_from_zero
    assert valuation(somos_exact(ONES_THREE, 15)[-1], two) >= 10


@pytest.mark.parametrize("mode", [SomosMode.NAIVE_ZEALOUS, SomosMode.NAIVE_PFLOAT])
def test_second_sequence_naive_failure(two, mode):
    assert failure_index(ONES_THREE, 19, mode, two) == 19


def test_second_sequence_lazy_demand(two):
    result = somos(ONES_THREE, 19, SomosMode.NAIVE_LAZY, two)
    assert result.value.residue() == 7
    assert max(result.demand) == 23


def test_second_sequence_stabilized(two):
    with pytest.raises(PrecisionError):
        somos(ONES_THREE, 19, SomosMode.STABILIZED_ZEALOUS, two, N=10)
    result = somos(ONES_THREE, 19, SomosMode.STABILIZED_ZEALOUS, two, N=11)
    assert result.value.residue(10) == 7


@pytest.mark.parametrize("n", [0, -3])
def test_index_must_be_positive(two, n):
    with pytest.raises(DomainError):
        somos(ONES, n, SomosMode.RATIONAL, two)


def test_stabilized_needs_unit_seeds(two):
    seeds = [PadicScalar.from_rational(s, 10, two) for s in (2, 1, 1, 1)]
    with pytest.raises(DomainError):
        stabilized_somos(seeds, 10)


def test_early_terms_are_the_seeds(two):
    result = somos(ONES_THREE, 4, SomosMode.NAIVE_ZEALOUS, two)
    assert result.value.residue() == 3


def _unit_seeds(rng, p: int) -> list[int]:
    seeds = []
    while len(seeds) < 4:
        s = rng.randrange(1, 200)
        if s % p:
            seeds.append(s)
    return seeds


def _check_window(seeds, p, n):
    ctx = PrimeContext(p)
    units = [valuation(u, ctx) == 0 for u in somos_exact(seeds, n)]
    for k in range(len(units) - 3):
        assert sum(not u for u in units[k : k + 4]) <= 1, (seeds, k)


@pytest.mark.parametrize("p", [2, 3])
def test_at_most_one_non_unit_per_window(rng, p):
    for _ in range(50):
        _check_window(_unit_seeds(rng, p), p, 60)


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3])
def test_at_most_one_non_unit_per_window_many_seeds(rng, p):
    for _ in range(1000):
        _check_window(_unit_seeds(rng, p), p, 60)


@pytest.mark.parametrize("i", [1, 4, 10])
def test_jacobian_determinant(three, rng, i):
    seeds = _unit_seeds(rng, 3)
    rows = somos_jacobian_rows(seeds, i)
    det = det_division_free(rows, RationalBackend(three, 0))
    terms = somos_exact(seeds, i + 4)
    expected = terms[i] * terms[i + 1] * terms[i + 2] * terms[i + 3]
    assert det == expected / (seeds[0] * seeds[1] * seeds[2] * seeds[3])


@pytest.mark.parametrize("k", range(8, 13))
def test_jacobian_matches_finite_differences(three, rng, k):
    seeds = _unit_seeds(rng, 3)
    i = rng.randrange(1, 11)
    rows = somos_jacobian_rows(seeds, i)
    before = somos_exact(seeds, i + 4)[i:]
    for r in range(4):
        moved = [Fraction(s) + (3**k if j == r else 0) for j, s in enumerate(seeds)]
        after = somos_exact(moved, i + 4)[i:]
        for c in range(4):
            v = valuation(after[c] - before[c] - 3**k * rows[r][c], three)
            assert v is INFINITY or v >= 2 * k - 2


def test_experiment_records_every_mode(two):
    report = somos_experiment(ONES_THREE, 19, two)
    backends = {record.backend for record in report.records if record.quantity == "u19"}
    assert backends == {mode.value for mode in SomosMode}
    assert report.get("u19", SomosMode.NAIVE_ZEALOUS.value).value.startswith("FAIL(")
    assert report.get("u19", SomosMode.RATIONAL.value).agreeing == 10
