import pytest

from padiclab.backends import BackendName, PFloatBackend, gauss_jordan_inverse, make_backend
from padiclab.errors import InexactZeroDivision, PrecisionInsufficient
from padiclab.pfloat import PFloatSystem


@pytest.mark.parametrize("name", list(BackendName))
def test_inverse_in_every_backend(name, three):
    backend = make_backend(name, three, 10)
    matrix = [[backend.lift(x) for x in row] for row in [[1, 2], [3, 5]]]
    inverse = gauss_jordan_inverse(matrix, backend)
    expected = [[-5, 2], [3, -1]]
    for row, expected_row in zip(inverse, expected, strict=True):
        for x, e in zip(row, expected_row, strict=True):
            assert backend.to_scalar(x).residue(8) == e % 3**8


@pytest.mark.parametrize("name", list(BackendName))
def test_backend_identities(name, two):
    backend = make_backend(name, two, 12)
    assert backend.is_zero(backend.zero())
    assert not backend.is_zero(backend.one())
    assert backend.valuation(backend.lift(12)) == 2
    x = backend.sub(backend.lift(7), backend.lift(3))
    assert backend.to_scalar(x).residue(6) == 4
    assert backend.to_scalar(backend.neg(backend.one())).residue(6) == 63


def test_singular_matrix_has_no_pivot(two):
    backend = make_backend(BackendName.RATIONAL, two, 10)
    matrix = [[backend.lift(x) for x in row] for row in [[1, 2], [2, 4]]]
    with pytest.raises(PrecisionInsufficient):
        gauss_jordan_inverse(matrix, backend)


def test_float_division_by_zero_is_a_precision_failure(two):
    backend = PFloatBackend(PFloatSystem(two, 8))
    with pytest.raises(InexactZeroDivision):
        backend.div(backend.one(), backend.zero())


@pytest.mark.parametrize(
    "name,prec,value,expected",
    [
        (BackendName.RELAXED, 6, 5, "...000101"),
        (BackendName.PFLOAT, 4, 1, "...0001"),
        (BackendName.ZEALOUS, 5, 6, "...0011 * 2^1"),
    ],
)
def test_renderers(two, name, prec, value, expected):
    backend = make_backend(name, two, prec)
    assert backend.render(backend.lift(value)) == expected
