"""
Adaptive precision.

A computation is a chain of steps. Before each step the state is re-lifted
(zero-filled) to the precisions of its lift plan; after the step, the zealous
output precision must lie inside the step's minimal lattice. The last state
is truncated to the target lattice.
"""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from ..core import EXACT, INFINITY, Extended, PadicScalar
from ..errors import DomainError, HenselHypothesisFailure, LiftPolicyFailure, NotASquare
from ..lattice import PrecisionLattice
from ..newton import (
    PPolynomial,
    SqrtMode,
    hensel_lift,
    is_square_residue,
    padic_sqrt,
    root_mod_p,
)
from ..zealous import zadd, zdiv, zneg
from .report import ExperimentReport

log = logging.getLogger(__name__)

type State = list[PadicScalar]

REFERENCE_DIGITS = 32


@dataclass(frozen=True)
class LiftPlan:
    """Absolute precision of each state entry before a step, and the lattice its output must reach."""

    precisions: tuple[Extended, ...]
    min_lattice: PrecisionLattice | None = None


@dataclass(frozen=True)
class Step:
    name: str
    evaluate: Callable[[State], State]
    plan: Callable[[State], LiftPlan]
    max_lattice: PrecisionLattice | None = None
    # Checks the precision-lemma hypotheses on the lifted state; absent means trusted.
    certificate: Callable[[State], bool] | None = None


@dataclass
class StepChain:
    steps: list[Step] = field(default_factory=list)

    def append(self, step: Step) -> "StepChain":
        self.steps.append(step)
        return self

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class AdaptiveResult:
    state: State
    # Steps whose lattice bounds were taken on trust.
    trusted: tuple[str, ...] = ()


def hull_exponents(H: PrecisionLattice) -> list[Extended]:
    """Exponents of the smallest diagonal lattice containing H."""
    return H.generators.column_valuations()


def truncate_to(state: Sequence[PadicScalar], exponents: Sequence[Extended]) -> State:
    return [x if e is INFINITY else x.truncate(e) for x, e in zip(state, exponents, strict=True)]


def _check_output(index: int, step: Step, out: State, H_min: PrecisionLattice) -> None:
    ctx = H_min.ctx
    for j, x in enumerate(out):
        if x.is_exact:
            continue
        vector = [PadicScalar(x.N, 1, EXACT, ctx) if i == j else 0 for i in range(len(out))]
        if not H_min.contains(vector):
            raise LiftPolicyFailure(index, f"{step.name}: entry {j} only known at O(p^{x.N})")


def run_adaptive(
    chain: StepChain, state: Sequence[PadicScalar], H: PrecisionLattice, target: PrecisionLattice
) -> AdaptiveResult:
    """Evaluate ``chain`` on ``state`` known up to H, returning the state known up to ``target``.

    Raises:
        LiftPolicyFailure: a step's zealous output misses its minimal lattice,
            its minimal lattice exceeds its maximal one, or its certificate fails.
    """
    current = truncate_to(state, hull_exponents(H))
    trusted = []
    for index, step in enumerate(chain.steps):
        plan = step.plan(current)
        current = [x.with_precision(n) for x, n in zip(current, plan.precisions, strict=True)]
        log.debug("step %d (%s): lifted to %s", index, step.name, plan.precisions)
        if step.certificate is None:
            trusted.append(step.name)
        elif not step.certificate(current):
            raise LiftPolicyFailure(index, f"{step.name}: certificate rejected")
        current = step.evaluate(current)
        if plan.min_lattice is not None:
            if step.max_lattice is not None and not step.max_lattice.contains_lattice(plan.min_lattice):
                raise LiftPolicyFailure(index, f"{step.name}: minimal lattice exceeds maximal")
            _check_output(index, step, current, plan.min_lattice)
    return AdaptiveResult(truncate_to(current, hull_exponents(target)), tuple(trusted))


def identity_step(name: str = "id") -> Step:
    return Step(name, lambda s: list(s), lambda s: LiftPlan(tuple(x.N for x in s)))


def _diagonal(exponents: Sequence[int], like: PadicScalar) -> PrecisionLattice:
    return PrecisionLattice.diagonal(list(exponents), like.ctx)


def sqrt_chain(c: PadicScalar, x0: PadicScalar, target: int) -> StepChain:
    """Newton's iteration for X^2 - c as alternating steps x + c/x and x/2.

    The state is (x, c); x is zero-filled to the precision of c before every
    step. After the i-th halving the root is certified to val f'(x0) + r * 2^i
    digits, with r = val f(x0) - 2 val f'(x0).
    """
    ctx = c.ctx
    f = PPolynomial((zneg(c), PadicScalar.zero(ctx), PadicScalar.one(ctx)), ctx)
    vd = f.derivative().evaluate(x0).v
    r = f.evaluate(x0).v - 2 * vd
    if r <= 0:
        raise HenselHypothesisFailure(f"{x0} is not close enough to a square root of {c}")
    two = PadicScalar.exact(2, ctx)
    chain = StepChain()
    i = 0
    while vd + r * 2**i < target:
        i += 1
        certified = min(vd + r * 2**i, target)
        chain.append(
            Step(
                f"newton{i}:x+c/x",
                lambda s: [zadd(s[0], zdiv(s[1], s[0])), s[1]],
                lambda s: LiftPlan((s[1].N, s[1].N)),
            )
        )
        chain.append(
            Step(
                f"newton{i}:halve",
                lambda s: [zdiv(s[0], two), s[1]],
                lambda s, certified=certified: LiftPlan(
                    (s[0].N, s[1].N), _diagonal((certified, s[1].N), s[1])
                ),
            )
        )
    return chain


def adaptive_sqrt(c: PadicScalar) -> PadicScalar:
    """Square root of a unit through :func:`sqrt_chain`, at precision N - val f'(x0).

    Raises:
        DomainError: c is not a unit known to finite precision.
        NotASquare: c is not a square modulo p (modulo 8 at p = 2).
    """
    ctx = c.ctx
    if c.is_exact or c.val != 0:
        raise DomainError(f"adaptive square root needs an inexact unit, got {c}")
    if not is_square_residue(c.s, ctx.p):
        raise NotASquare(f"{c} is not a square in Q{ctx.p}")
    x0 = PadicScalar.exact(root_mod_p(c.s, ctx.p), ctx)
    vd = zadd(x0, x0).v
    target = c.N - vd
    chain = sqrt_chain(c, x0, target)
    H = _diagonal((target, c.N), c)
    result = run_adaptive(chain, [x0.with_precision(c.N), c], H, H)
    return result.state[0]


def sqrt_experiment(c: PadicScalar) -> ExperimentReport:
    """Naive zealous Newton against zero-lift Hensel and the adaptive chain."""
    ctx = c.ctx
    report = ExperimentReport("sqrt", ctx)
    x0 = PadicScalar.exact(root_mod_p(c.s, ctx.p), ctx)
    exact_f = PPolynomial((zneg(c.as_exact()), PadicScalar.zero(ctx), PadicScalar.one(ctx)), ctx)
    reference = hensel_lift(exact_f, x0, c.N + REFERENCE_DIGITS).value
    for mode in SqrtMode:
        report.add_scalar("sqrt", mode.value, padic_sqrt(c, mode), reference)
    report.add_scalar("sqrt", "adaptive", adaptive_sqrt(c), reference)
    return report
