"""Inversion of Hilbert matrices in p-adic floating-point arithmetic."""

import logging
from fractions import Fraction
from math import comb

from ..backends import BackendName, PFloatBackend, gauss_jordan_inverse
from ..errors import DomainError
from ..pfloat import PFloatSystem, round_to_float
from .report import ExperimentReport, agreeing_digits

log = logging.getLogger(__name__)


def hilbert_matrix(n: int) -> list[list[Fraction]]:
    return [[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)]


def exact_inverse(n: int) -> list[list[int]]:
    """Integral inverse of the n x n Hilbert matrix (closed form, 1-based i, j)."""
    return [
        [
            (-1) ** (i + j)
            * (i + j - 1)
            * comb(n + i - 1, n - j)
            * comb(n + j - 1, n - i)
            * comb(i + j - 2, i - 1) ** 2
            for j in range(1, n + 1)
        ]
        for i in range(1, n + 1)
    ]


def hilbert_experiment(n: int, system: PFloatSystem) -> ExperimentReport:
    """Invert H_n over p-adic floats and count digits agreeing with the exact inverse.

    Raises:
        DomainError: n < 2.
    """
    if n < 2:
        raise DomainError(f"Hilbert size must be at least 2, got {n}")
    ctx = system.ctx
    backend = PFloatBackend(system)
    H = [[round_to_float(x, system) for x in row] for row in hilbert_matrix(n)]
    inverse = gauss_jordan_inverse(H, backend)
    reference = exact_inverse(n)
    scores = [
        agreeing_digits(inverse[i][j].value, Fraction(reference[i][j]), ctx, system.N)
        for i in range(n)
        for j in range(n)
    ]
    average = sum(scores) / len(scores)
    log.info("hilbert n=%d: average %.2f agreeing digits of %d", n, average, system.N)
    report = ExperimentReport(f"hilbert{n}", ctx)
    report.add_float("inverse[1,1]", inverse[0][0], Fraction(reference[0][0]))
    report.add_value("average_agreeing", BackendName.PFLOAT.value, f"{average:.2f}")
    report.add_value("min_agreeing", BackendName.PFLOAT.value, min(scores))
    return report
