"""
padiclab

A laboratory for p-adic arithmetic: zealous (interval), relaxed (lazy) and
floating-point models side by side, with precision lattices to measure what
each of them loses.
"""

from importlib.metadata import PackageNotFoundError
from importlib.metadata import version as _version

from .core import EXACT, INFINITY, PadicScalar, PrimeContext, ScalarStyle, parse_scalar, print_scalar
from .errors import PadicError, PrecisionFailure
from .lattice import PMatrix, PrecisionLattice
from .newton import PPolynomial, hensel_lift, padic_sqrt
from .pfloat import PFloat, PFloatSystem
from .relaxed import LazyNumber

try:
    # Single source of truth: the version declared in pyproject.toml.
    __version__ = _version("padiclab")
except PackageNotFoundError:  # running from a source tree without an install
    __version__ = "0.0.0+unknown"

__all__ = [
    "EXACT",
    "INFINITY",
    "LazyNumber",
    "PFloat",
    "PFloatSystem",
    "PMatrix",
    "PPolynomial",
    "PadicError",
    "PadicScalar",
    "PrecisionFailure",
    "PrecisionLattice",
    "PrimeContext",
    "ScalarStyle",
    "hensel_lift",
    "padic_sqrt",
    "parse_scalar",
    "print_scalar",
]
