"""Named experiments and a parallel runner."""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from time import perf_counter

from ..core import PadicScalar, PrimeContext
from ..pfloat import PFloatSystem
from .adaptive import sqrt_experiment
from .bezout import bezout_experiment
from .fixtures import bezout_pair, degree8_polynomial, degree19_polynomial, matrix_m, sqrt_input
from .hilbert import hilbert_experiment
from .interpolation import interpolation_experiment
from .linalg import charpoly_experiment, det_experiment, lu_experiment
from .powers import xp_experiment
from .report import ExperimentReport
from .somos import somos_experiment

log = logging.getLogger(__name__)

TWO = PrimeContext(2)


def _sqrt() -> ExperimentReport:
    return sqrt_experiment(sqrt_input())


def _det() -> ExperimentReport:
    return det_experiment(matrix_m())


def _charpoly() -> ExperimentReport:
    return charpoly_experiment(matrix_m())


def _lu() -> ExperimentReport:
    return lu_experiment(matrix_m())


def _bezout() -> ExperimentReport:
    return bezout_experiment(*bezout_pair())


def _interp8() -> ExperimentReport:
    return interpolation_experiment(degree8_polynomial())


def _interp19() -> ExperimentReport:
    return interpolation_experiment(degree19_polynomial())


def _hilbert13() -> ExperimentReport:
    return hilbert_experiment(13, PFloatSystem(TWO, 53))


def _somos1111() -> ExperimentReport:
    return somos_experiment((1, 1, 1, 1), 50, TWO)


def _somos1113() -> ExperimentReport:
    return somos_experiment((1, 1, 1, 3), 19, TWO)


def _xp() -> ExperimentReport:
    return xp_experiment(PadicScalar.from_rational(3, 4, TWO), 3)


EXPERIMENTS: dict[str, Callable[[], ExperimentReport]] = {
    "sqrt": _sqrt,
    "det": _det,
    "charpoly": _charpoly,
    "lu": _lu,
    "bezout": _bezout,
    "interp8": _interp8,
    "interp19": _interp19,
    "hilbert13": _hilbert13,
    "somos1111": _somos1111,
    "somos1113": _somos1113,
    "xp": _xp,
}


def run_experiment(name: str) -> ExperimentReport:
    log.info("experiment %s: start", name)
    start = perf_counter()
    report = EXPERIMENTS[name]()
    log.info("experiment %s: done in %.3fs", name, perf_counter() - start)
    return report


def run_suite(names: Sequence[str] | None = None, jobs: int = 1) -> list[ExperimentReport]:
    """Reports for ``names`` (default: all experiments), in the order given.

    Raises:
        KeyError: an unknown experiment name.
    """
    names = list(names or EXPERIMENTS)
    unknown = [n for n in names if n not in EXPERIMENTS]
    if unknown:
        raise KeyError(f"unknown experiments: {', '.join(unknown)}")
    if jobs <= 1:
        return [run_experiment(name) for name in names]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_experiment, names))
