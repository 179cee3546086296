"""x^(p^k) by repeated p-th powers against plain repeated multiplication."""

from ..backends import BackendName
from ..core import PadicScalar, ScalarStyle
from ..zealous import zpow, zpow_p
from .report import ExperimentReport


def iterated_pow_p(x: PadicScalar, k: int) -> PadicScalar:
    """x^(p^k) through k p-th powers, gaining one digit each."""
    for _ in range(k):
        x = zpow_p(x)
    return x


def xp_experiment(x: PadicScalar, k: int = 1) -> ExperimentReport:
    ctx = x.ctx
    report = ExperimentReport("xp", ctx)
    exponent = ctx.p**k
    reference = x.value**exponent
    quantity = f"x^{exponent}"
    report.add_scalar(quantity, "zpow_p", iterated_pow_p(x, k), reference, style=ScalarStyle.ARITHMETIC)
    report.add_scalar(
        quantity, BackendName.ZEALOUS.value, zpow(x, exponent), reference, style=ScalarStyle.ARITHMETIC
    )
    return report
