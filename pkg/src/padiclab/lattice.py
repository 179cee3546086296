"""
Lattices in Qp^d as precision data.

Hermite normal form, Smith-style diagonalization, diffused digits, dual
lattices and forward/backward propagation of precision through a Jacobian.
All reductions run in zealous arithmetic; exact entries stay exact.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .backends import ZealousBackend, gauss_jordan_inverse
from .core import (
    EXACT,
    INFINITY,
    Extended,
    PadicScalar,
    PrimeContext,
    ScalarStyle,
    parse_scalar,
    print_scalar,
    split_valuation,
    valuation,
)
from .errors import PrecisionInsufficient, ScalarSyntaxError, SurjectivityFailure
from .zealous import zadd, zdiv, zmul, zsub

log = logging.getLogger(__name__)

type Entry = PadicScalar | Fraction | int

RATIONAL_DIGITS = 64


def rational_scalar(x: Fraction | int, ctx: PrimeContext, rel: int = RATIONAL_DIGITS) -> PadicScalar:
    x = Fraction(x)
    if x == 0 or split_valuation(x.denominator, ctx.p)[1] == 1:
        return PadicScalar.exact(x, ctx)
    return PadicScalar.from_rational(x, valuation(x, ctx) + rel, ctx)


def _as_scalar(x: Entry, ctx: PrimeContext) -> PadicScalar:
    return x if isinstance(x, PadicScalar) else PadicScalar.exact(x, ctx)


@dataclass(frozen=True)
class PMatrix:
    """Rectangular matrix of scalars over one prime context."""

    rows: tuple[tuple[PadicScalar, ...], ...]
    ctx: PrimeContext

    def __post_init__(self):
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise ValueError(f"Invalid matrix: ragged rows of widths {sorted(widths)}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Entry]], ctx: PrimeContext) -> "PMatrix":
        return cls(tuple(tuple(_as_scalar(x, ctx) for x in row) for row in rows), ctx)

    @classmethod
    def from_ints(
        cls, rows: Iterable[Iterable[int | Fraction]], ctx: PrimeContext, N: Extended = EXACT
    ) -> "PMatrix":
        """Matrix of rationals, exact or reduced to absolute precision N."""
        if N is EXACT:
            return cls.from_rows(rows, ctx)
        return cls(
            tuple(tuple(PadicScalar.from_rational(x, N, ctx) for x in row) for row in rows), ctx
        )

    @classmethod
    def from_fractions(
        cls, rows: Iterable[Iterable[Fraction | int]], ctx: PrimeContext, rel: int = RATIONAL_DIGITS
    ) -> "PMatrix":
        """Exact where the denominator is a power of p, else ``rel`` digits past the valuation."""
        return cls(tuple(tuple(rational_scalar(x, ctx, rel) for x in row) for row in rows), ctx)

    @classmethod
    def identity(cls, n: int, ctx: PrimeContext) -> "PMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], ctx)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, index: tuple[int, int]) -> PadicScalar:
        i, j = index
        return self.rows[i][j]

    def lists(self) -> list[list[PadicScalar]]:
        return [list(row) for row in self.rows]

    def transpose(self) -> "PMatrix":
        return PMatrix(tuple(zip(*self.rows, strict=True)), self.ctx)

    def column_valuations(self) -> list[Extended]:
        """Smallest valuation of each column (INFINITY for an all-zero column)."""
        return [min((x.val for x in column), default=INFINITY) for column in zip(*self.rows, strict=True)]

    def values(self) -> list[list[Fraction]]:
        return [[x.value for x in row] for row in self.rows]

    def __str__(self) -> str:
        return format_matrix(self)


def format_matrix(M: PMatrix, style: ScalarStyle = ScalarStyle.ARITHMETIC) -> str:
    """Rows separated by ';', entries by ','."""
    return ";".join(",".join(print_scalar(x, style) for x in row) for row in M.rows)


def parse_matrix(text: str, ctx: PrimeContext) -> PMatrix:
    rows = []
    offset = 0
    for row_text in text.split(";"):
        row = []
        for entry in row_text.split(","):
            try:
                row.append(parse_scalar(entry, ctx))
            except ScalarSyntaxError as exc:
                raise ScalarSyntaxError(f"Invalid matrix entry {entry.strip()!r}", offset + exc.position) from exc
            offset += len(entry) + 1
        rows.append(tuple(row))
    try:
        return PMatrix(tuple(rows), ctx)
    except ValueError as exc:
        raise ScalarSyntaxError(str(exc), len(text)) from exc


def matmul(A: PMatrix, B: PMatrix) -> PMatrix:
    zero = PadicScalar.zero(A.ctx)
    out = []
    for row in A.rows:
        out_row = []
        for column in zip(*B.rows, strict=True):
            acc = zero
            for a, b in zip(row, column, strict=True):
                if a.val is INFINITY or b.val is INFINITY:
                    continue
                acc = zadd(acc, zmul(a, b))
            out_row.append(acc)
        out.append(tuple(out_row))
    return PMatrix(tuple(out), A.ctx)


def _power(k: int, ctx: PrimeContext) -> PadicScalar:
    return PadicScalar(k, 1, EXACT, ctx)


def scale_rows(M: PMatrix, exponents: Sequence[int]) -> PMatrix:
    """diag(p^e_1, ..., p^e_n) * M."""
    return PMatrix(
        tuple(
            tuple(zmul(_power(e, M.ctx), x) for x in row)
            for row, e in zip(M.rows, exponents, strict=True)
        ),
        M.ctx,
    )


def scale_columns(M: PMatrix, exponents: Sequence[int]) -> PMatrix:
    """M * diag(p^e_1, ..., p^e_m)."""
    return PMatrix(
        tuple(
            tuple(zmul(x, _power(e, M.ctx)) for x, e in zip(row, exponents, strict=True))
            for row in M.rows
        ),
        M.ctx,
    )


def _row_combine(
    target: list[PadicScalar], factor: PadicScalar, source: list[PadicScalar], start: int
) -> None:
    """target[k] -= factor * source[k] for k >= start."""
    if factor.val is INFINITY:
        return
    for k in range(start, len(target)):
        if source[k].val is INFINITY:
            continue
        target[k] = zsub(target[k], zmul(factor, source[k]))


def _column_pivot(rows: list[list[PadicScalar]], col: int, start: int) -> int:
    best, best_val = -1, INFINITY
    for i in range(start, len(rows)):
        x = rows[i][col]
        if x.indistinguishable_from_zero:
            continue
        if best < 0 or x.v < best_val:
            best, best_val = i, x.v
    return best


@dataclass(frozen=True)
class HermiteResult:
    form: PMatrix
    unimodular_valuation: int = 0


def _reduce_representative(a: PadicScalar, n: int) -> PadicScalar:
    """Exact b / p^w with 0 <= b < p^(n + w) congruent to a modulo p^n."""
    p, ctx = a.ctx.p, a.ctx
    if a.s == 0:
        return PadicScalar.zero(ctx)
    w = max(0, -a.v)
    b = (p ** (a.v + w) * a.s) % p ** (n + w)
    return PadicScalar(-w, b, EXACT, ctx)


def hermite_nf(M: PMatrix) -> HermiteResult:
    """p-adic Hermite normal form of the row lattice of M (n x m, n >= m).

    The result is m x m upper triangular with exact p-power diagonal;
    above-diagonal entries are reduced modulo their column's pivot and
    marked exact whenever their precision reaches the pivot valuation.

    Raises:
        PrecisionInsufficient: a pivot is indistinguishable from 0.
    """
    ctx = M.ctx
    rows = M.lists()
    n, m = M.nrows, M.ncols
    if n < m:
        raise PrecisionInsufficient(f"{n} generators cannot span a rank-{m} lattice")
    exponents = []
    for j in range(m):
        pivot = _column_pivot(rows, j, j)
        if pivot < 0:
            raise PrecisionInsufficient(f"column {j}: pivot indistinguishable from 0")
        rows[j], rows[pivot] = rows[pivot], rows[j]
        head = rows[j][j]
        unit = PadicScalar(0, head.s, head.N - head.v if not head.is_exact else EXACT, ctx)
        rows[j] = [zdiv(x, unit) if x.val is not INFINITY else x for x in rows[j]]
        rows[j][j] = _power(head.v, ctx)
        exponents.append(head.v)
        for i in range(j + 1, n):
            if rows[i][j].val is INFINITY:
                continue
            factor = zdiv(rows[i][j], rows[j][j])
            _row_combine(rows[i], factor, rows[j], j + 1)
            rows[i][j] = PadicScalar.zero(ctx)
    for j in range(m):
        nj = exponents[j]
        for i in range(j):
            a = rows[i][j]
            if a.N < nj:
                continue
            r = _reduce_representative(a, nj)
            q = zdiv(zsub(a, r), rows[j][j])
            _row_combine(rows[i], q, rows[j], j + 1)
            rows[i][j] = r
    log.debug("hermite diagonal exponents %s", exponents)
    return HermiteResult(PMatrix(tuple(tuple(r) for r in rows[:m]), ctx))


@dataclass(frozen=True)
class SmithResult:
    diagonal: tuple[PadicScalar, ...]
    sign: int

    @property
    def valuations(self) -> list[Extended]:
        return [x.val for x in self.diagonal]


def smith_diagonalize(M: PMatrix) -> SmithResult:
    """Diagonal a_1..a_d with nondecreasing valuations and M = P diag Q, det P det Q = sign.

    Raises:
        PrecisionInsufficient: all remaining entries are indistinguishable from 0.
    """
    if not M.is_square:
        raise ValueError(f"Invalid matrix: {M.nrows}x{M.ncols} is not square")
    ctx = M.ctx
    rows = M.lists()
    d = M.nrows
    sign = 1
    diagonal = []
    for k in range(d):
        best = None
        for i in range(k, d):
            for j in range(k, d):
                x = rows[i][j]
                if x.indistinguishable_from_zero:
                    continue
                if best is None or x.v < rows[best[0]][best[1]].v:
                    best = (i, j)
        if best is None:
            raise PrecisionInsufficient(f"step {k}: remaining entries indistinguishable from 0")
        i, j = best
        if i != k:
            rows[k], rows[i] = rows[i], rows[k]
            sign = -sign
        if j != k:
            for row in rows:
                row[k], row[j] = row[j], row[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, d):
            if rows[i][k].val is INFINITY:
                continue
            factor = zdiv(rows[i][k], pivot)
            _row_combine(rows[i], factor, rows[k], k + 1)
            rows[i][k] = PadicScalar.zero(ctx)
        for j in range(k + 1, d):
            rows[k][j] = PadicScalar.zero(ctx)
        diagonal.append(pivot)
    return SmithResult(tuple(diagonal), sign)


def _exact_determinant(rows: list[list[Fraction]]) -> Fraction:
    a = [list(row) for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            if factor:
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return det


def _all_exact(M: PMatrix) -> bool:
    return all(x.is_exact for row in M.rows for x in row)


def determinant_valuation(M: PMatrix) -> Extended:
    """val(det M); exact matrices are reduced over Q, others through the Smith form."""
    if _all_exact(M):
        return valuation(_exact_determinant(M.values()), M.ctx)
    return sum(smith_diagonalize(M).valuations)


@dataclass(frozen=True)
class PrecisionLattice:
    """Full-rank Zp-module in Qp^d spanned by the rows of ``generators``."""

    generators: PMatrix

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Entry]], ctx: PrimeContext) -> "PrecisionLattice":
        return cls(PMatrix.from_rows(rows, ctx))

    @classmethod
    def diagonal(cls, exponents: Sequence[int], ctx: PrimeContext) -> "PrecisionLattice":
        """p^e_1 Zp + ... + p^e_d Zp."""
        d = len(exponents)
        return cls(
            PMatrix.from_rows(
                [[_power(e, ctx) if i == j else 0 for j in range(d)] for i, e in enumerate(exponents)],
                ctx,
            )
        )

    @property
    def ctx(self) -> PrimeContext:
        return self.generators.ctx

    @property
    def dim(self) -> int:
        return self.generators.ncols

    @cached_property
    def hermite(self) -> PMatrix:
        return hermite_nf(self.generators).form

    def contains(self, vector: Sequence[Entry]) -> bool:
        """Membership by substitution against the Hermite form."""
        x = [_as_scalar(e, self.ctx) for e in vector]
        H = self.hermite
        for j in range(self.dim):
            if x[j].val is INFINITY or x[j].indistinguishable_from_zero:
                continue
            c = zdiv(x[j], H[j, j])
            if c.v < 0:
                return False
            x[j] = PadicScalar.zero(self.ctx)
            _row_combine(x, c, list(H.rows[j]), j + 1)
        return all(e.indistinguishable_from_zero for e in x)

    def contains_lattice(self, other: "PrecisionLattice") -> bool:
        return all(self.contains(row) for row in other.generators.rows)

    def diffused_digits(self) -> int:
        return diffused_digits(self)

    def dual(self) -> "PrecisionLattice":
        return dual_lattice(self)


def diffused_digits(L: PrecisionLattice) -> int:
    """log_p of the index of L in the smallest diagonal lattice containing it.

    Equals val(det G) - sum_j min_i val(G_ij) for any generator matrix G.
    """
    columns = L.generators.column_valuations()
    if any(v is INFINITY for v in columns):
        raise PrecisionInsufficient("generator matrix has a zero column")
    G = L.generators
    if G.is_square and _all_exact(G):
        det_val = determinant_valuation(G)
    else:
        det_val = sum(L.hermite[j, j].v for j in range(L.dim))
    if det_val is INFINITY:
        raise PrecisionInsufficient("generators do not span a full-rank lattice")
    return det_val - sum(columns)


def dual_lattice(L: PrecisionLattice) -> PrecisionLattice:
    """Lattice spanned by the rows of the transpose-inverse of the generators."""
    backend = ZealousBackend(L.ctx, 0)
    inverse = gauss_jordan_inverse(L.generators.transpose().lists(), backend)
    return PrecisionLattice(PMatrix.from_rows(inverse, L.ctx))


@dataclass(frozen=True)
class ForwardPrecision:
    precisions: list[int]
    image: PrecisionLattice | None

    @property
    def diffused_digits(self) -> int:
        return 0 if self.image is None else diffused_digits(self.image)


def propagate_forward(J: PMatrix, input_prec: Sequence[int]) -> ForwardPrecision:
    """Optimal output precisions for inputs known at O(p^N_i).

    The rows of diag(p^N_1..p^N_n) * J generate the image of the precision
    lattice; M_j is the smallest valuation in its column j. The image is
    None when J is not of full column rank at working precision.

    Raises:
        SurjectivityFailure: column j vanishes at working precision.
    """
    A = scale_rows(J, input_prec)
    precisions = []
    for j in range(A.ncols):
        column = [A[i, j] for i in range(A.nrows) if not A[i, j].indistinguishable_from_zero]
        if not column:
            raise SurjectivityFailure(j)
        precisions.append(min(x.v for x in column))
    image = None
    if A.nrows >= A.ncols:
        try:
            image = PrecisionLattice(hermite_nf(A).form)
        except PrecisionInsufficient as e:
            log.debug("no image lattice: %s", e)
    return ForwardPrecision(precisions, image)


def propagate_backward(J: PMatrix, target_prec: Sequence[int]) -> list[int | None]:
    """Input precisions N_i that guarantee outputs at O(p^M_j).

    N_i is minus the smallest valuation in row i of J * diag(p^-M_j); a row
    with no usable entry gets ``None`` (that input is not needed).
    """
    B = scale_columns(J, [-m for m in target_prec])
    needed: list[int | None] = []
    for row in B.rows:
        vals = [x.v for x in row if not x.indistinguishable_from_zero]
        needed.append(-min(vals) if vals else None)
    return needed


def image_lattice(H: PrecisionLattice, J: PMatrix) -> PrecisionLattice | None:
    """The lattice dphi(H) spanned by the rows of G * J; None if not full rank."""
    A = matmul(H.generators, J)
    if A.nrows < A.ncols:
        return None
    try:
        return PrecisionLattice(hermite_nf(A).form)
    except PrecisionInsufficient:
        return None


def preclemma_poly_check(J: PMatrix, H: PrecisionLattice, k: int) -> bool:
    """Hypotheses of the precision lemma for polynomial maps with radius r = p^-k.

    True iff H lies in the ball p^k Zp^n and p^(2k-1) Zp^m lies in dphi(H).
    """
    for row in H.generators.rows:
        for x in row:
            if x.val is not INFINITY and not x.indistinguishable_from_zero and x.v < k:
                return False
    image = image_lattice(H, J)
    if image is None:
        return False
    m = J.ncols
    corner = 2 * k - 1
    return all(
        image.contains([_power(corner, J.ctx) if i == j else 0 for i in range(m)]) for j in range(m)
    )
