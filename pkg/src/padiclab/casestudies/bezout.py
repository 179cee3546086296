"""
Bezout coefficients of two monic polynomials.

Extended Euclid runs in any backend; the optimal precision comes from the
differential dU = U dR mod Q, dV = V dR mod P with dR = -U dP - V dQ.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction

from ..backends import Backend, BackendName, RationalBackend, ZealousBackend
from ..core import PadicScalar
from ..errors import InexactZeroDivision
from ..lattice import PMatrix, propagate_forward
from ..newton import PPolynomial
from .linalg import PolynomialRing
from .report import ExperimentReport

log = logging.getLogger(__name__)

BOOST_DIGITS = 40


def _trim[T](r: list[T], backend: Backend[T]) -> list[T]:
    # Only exact arithmetic may drop a vanishing leading coefficient.
    if isinstance(backend, RationalBackend):
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_divmod[T](a: Sequence[T], b: Sequence[T], backend: Backend[T]) -> tuple[list[T], list[T]]:
    """Quotient and remainder of a by b (coefficients constant first).

    Raises:
        InexactZeroDivision: the leading coefficient of b is zero at working precision.
    """
    if not b or backend.is_zero(b[-1]):
        raise InexactZeroDivision("leading coefficient of the divisor is indistinguishable from 0")
    rem = list(a)
    if len(rem) < len(b):
        return [], _trim(rem, backend)
    lead = b[-1]
    quotient = [backend.zero()] * (len(rem) - len(b) + 1)
    for k in reversed(range(len(quotient))):
        c = backend.div(rem[k + len(b) - 1], lead)
        quotient[k] = c
        for j in range(len(b) - 1):
            rem[k + j] = backend.sub(rem[k + j], backend.mul(c, b[j]))
    return quotient, _trim(rem[: len(b) - 1], backend)


def bezout[T](P: Sequence[T], Q: Sequence[T], backend: Backend[T]) -> tuple[list[T], list[T]]:
    """(U, V) with U P + V Q = 1, deg U < deg Q and deg V < deg P.

    Raises:
        InexactZeroDivision: a remainder's leading coefficient is indistinguishable
            from 0, or P and Q are not coprime at working precision.
    """
    ring = PolynomialRing(backend)
    r0, r1 = list(P), list(Q)
    s0, s1 = ring.one(), ring.zero()
    t0, t1 = ring.zero(), ring.one()
    while len(r1) > 1:
        q, r = poly_divmod(r0, r1, backend)
        r0, r1 = r1, r
        s0, s1 = s1, ring.sub(s0, ring.mul(tuple(q), s1))
        t0, t1 = t1, ring.sub(t0, ring.mul(tuple(q), t1))
        log.debug("euclid remainder of degree %d", len(r1) - 1)
    if not r1 or backend.is_zero(r1[0]):
        raise InexactZeroDivision("P and Q are not coprime at working precision")
    c = r1[0]
    U = [backend.div(x, c) for x in s1]
    V = [backend.div(x, c) for x in t1]
    return _pad(U, len(Q) - 1, backend), _pad(V, len(P) - 1, backend)


def _pad[T](coeffs: list[T], size: int, backend: Backend[T]) -> list[T]:
    return coeffs + [backend.zero()] * (size - len(coeffs))


def _fmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _fadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    return [
        (a[k] if k < len(a) else Fraction(0)) + (b[k] if k < len(b) else Fraction(0))
        for k in range(size)
    ]


def _fmod(a: Sequence[Fraction], monic: Sequence[Fraction]) -> list[Fraction]:
    rem = list(a)
    d = len(monic) - 1
    for k in reversed(range(d, len(rem))):
        c = rem[k]
        if c:
            for j in range(d + 1):
                rem[k - d + j] -= c * monic[j]
    return (rem + [Fraction(0)] * d)[:d]


def bezout_differential(
    P: Sequence[Fraction],
    Q: Sequence[Fraction],
    U: Sequence[Fraction],
    V: Sequence[Fraction],
    dP: Sequence[Fraction],
    dQ: Sequence[Fraction],
) -> tuple[list[Fraction], list[Fraction]]:
    """(dU, dV) for monic P, Q over Q; coefficient lists are constant first."""
    dR = [-x for x in _fadd(_fmul(U, dP), _fmul(V, dQ))]
    return _fmod(_fmul(U, dR), Q), _fmod(_fmul(V, dR), P)


def _values(f: PPolynomial) -> list[Fraction]:
    return [c.value for c in f.coefficients]


def bezout_labels(P: PPolynomial, Q: PPolynomial) -> list[str]:
    """U_{k} then V_{k}, highest degree first."""
    return [f"U{k}" for k in reversed(range(Q.degree))] + [f"V{k}" for k in reversed(range(P.degree))]


def bezout_jacobian(P: PPolynomial, Q: PPolynomial) -> PMatrix:
    """Derivative of the U, V coefficients in the non-leading coefficients of P then Q.

    Rows and columns list coefficients highest degree first.
    """
    ctx = P.ctx
    backend = RationalBackend(ctx, 0)
    p_vals, q_vals = _values(P), _values(Q)
    U, V = bezout(p_vals, q_vals, backend)
    rows = []
    for which, degree in (("P", P.degree), ("Q", Q.degree)):
        for k in reversed(range(degree)):
            basis = [Fraction(int(i == k)) for i in range(degree)]
            dP = basis if which == "P" else []
            dQ = basis if which == "Q" else []
            dU, dV = bezout_differential(p_vals, q_vals, U, V, dP, dQ)
            rows.append([*reversed(dU), *reversed(dV)])
    return PMatrix.from_fractions(rows, ctx)


def hyperplane_jacobian(P: PPolynomial, Q: PPolynomial) -> PMatrix:
    """Jacobian with the V_{d-1} column dropped: U_{d-1} + V_{d-1} = 0 on the image."""
    J = bezout_jacobian(P, Q)
    drop = Q.degree
    return PMatrix(tuple(row[:drop] + row[drop + 1 :] for row in J.rows), J.ctx)


def boosted_reference(P: PPolynomial, Q: PPolynomial, N: int) -> tuple[list[PadicScalar], list[PadicScalar]]:
    """Zealous Euclid on inputs zero-filled to N + BOOST_DIGITS, truncated back to O(p^N)."""
    lift = N + BOOST_DIGITS
    backend = ZealousBackend(P.ctx, lift)
    U, V = bezout(
        [c.lift(lift) for c in P.coefficients], [c.lift(lift) for c in Q.coefficients], backend
    )
    return [u.truncate(N) for u in U], [v.truncate(N) for v in V]


def bezout_experiment(P: PPolynomial, Q: PPolynomial, N: int = 10) -> ExperimentReport:
    ctx = P.ctx
    report = ExperimentReport("bezout", ctx)
    labels = bezout_labels(P, Q)
    exact_U, exact_V = bezout(_values(P), _values(Q), RationalBackend(ctx, 0))
    reference = [*reversed(exact_U), *reversed(exact_V)]
    U, V = bezout(list(P.coefficients), list(Q.coefficients), ZealousBackend(ctx, N))
    for label, x, ref in zip(labels, [*reversed(U), *reversed(V)], reference, strict=True):
        report.add_scalar(label, BackendName.ZEALOUS.value, x, ref)
    boosted_U, boosted_V = boosted_reference(P, Q, N)
    for label, x, ref in zip(labels, [*reversed(boosted_U), *reversed(boosted_V)], reference, strict=True):
        report.add_scalar(label, "boosted", x, ref)
    precisions = propagate_forward(bezout_jacobian(P, Q), [N] * (P.degree + Q.degree)).precisions
    for label, prec in zip(labels, precisions, strict=True):
        report.add_value(f"{label}:optimal_precision", BackendName.RATIONAL.value, prec)
    image = propagate_forward(hyperplane_jacobian(P, Q), [N] * (P.degree + Q.degree)).image
    report.add_value("diffused_digits", BackendName.RATIONAL.value, image.diffused_digits() if image else "-")
    return report
