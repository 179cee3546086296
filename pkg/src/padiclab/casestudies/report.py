"""Experiment reports: per-quantity records rendered as TSV or a rich table."""

from dataclasses import dataclass, field
from fractions import Fraction

from rich.console import Console
from rich.table import Table

from ..core import INFINITY, Extended, PadicScalar, PrimeContext, ScalarStyle, print_scalar, valuation
from ..pfloat import PFloat, render

TSV_COLUMNS = ("quantity", "backend", "value", "precision", "reference", "agreeing")


def agreeing_digits(computed: Fraction | None, reference: Fraction, ctx: PrimeContext, cap: int) -> int:
    """Digits of ``computed`` that match ``reference`` from the reference valuation on.

    A wrong valuation (or a missing value) counts as 0; a perfect match counts ``cap``.
    """
    if computed is None:
        return 0
    v_ref = valuation(reference, ctx)
    if v_ref is INFINITY:
        return cap if computed == 0 else 0
    if computed == 0 or valuation(computed, ctx) != v_ref:
        return 0
    diff = valuation(computed - reference, ctx)
    if diff is INFINITY:
        return cap
    return min(cap, diff - v_ref)


def _precision_text(N: Extended) -> str:
    return "exact" if N is INFINITY else str(N)


@dataclass
class QuantityRecord:
    quantity: str
    backend: str
    value: str
    precision: str
    reference: str = "-"
    agreeing: int | None = None

    def cells(self) -> list[str]:
        agreeing = "-" if self.agreeing is None else str(self.agreeing)
        return [self.quantity, self.backend, self.value, self.precision, self.reference, agreeing]


@dataclass
class ExperimentReport:
    """Rows of (value, claimed precision, reference, agreeing digits) for one experiment."""

    experiment: str
    ctx: PrimeContext
    records: list[QuantityRecord] = field(default_factory=list)

    def add(self, record: QuantityRecord) -> QuantityRecord:
        self.records.append(record)
        return record

    def add_scalar(
        self,
        quantity: str,
        backend: str,
        computed: PadicScalar,
        reference: Fraction | None = None,
        *,
        style: ScalarStyle = ScalarStyle.DIGITS,
    ) -> QuantityRecord:
        """Record a zealous or oracle scalar; agreement is capped at its relative precision."""
        agreeing = None
        ref_text = "-"
        if reference is not None:
            ref_scalar = PadicScalar.from_rational(reference, _reference_precision(computed), self.ctx)
            ref_text = print_scalar(ref_scalar, style)
            cap = computed.rel if computed.rel is not INFINITY else ref_scalar.rel
            if computed.indistinguishable_from_zero:
                agreeing = 0
            else:
                agreeing = agreeing_digits(computed.value, reference, self.ctx, cap)
        return self.add(
            QuantityRecord(
                quantity,
                backend,
                print_scalar(computed, style),
                _precision_text(computed.N),
                ref_text,
                agreeing,
            )
        )

    def add_float(
        self, quantity: str, computed: PFloat, reference: Fraction | None = None
    ) -> QuantityRecord:
        system = computed.system
        agreeing = None
        ref_text = "-"
        if reference is not None:
            agreeing = agreeing_digits(computed.value, reference, self.ctx, system.N)
            ref_text = render_reference(reference, self.ctx, system.N)
        precision = f"rel {system.N}" if computed.is_finite else "-"
        return self.add(QuantityRecord(quantity, "pfloat", render(computed), precision, ref_text, agreeing))

    def add_failure(self, quantity: str, backend: str, reason: str) -> QuantityRecord:
        return self.add(QuantityRecord(quantity, backend, f"FAIL({reason})", "-"))

    def add_value(self, quantity: str, backend: str, value: object) -> QuantityRecord:
        return self.add(QuantityRecord(quantity, backend, str(value), "-"))

    def get(self, quantity: str, backend: str | None = None) -> QuantityRecord:
        for record in self.records:
            if record.quantity == quantity and (backend is None or record.backend == backend):
                return record
        raise KeyError(f"{self.experiment}: no record {quantity!r} for {backend or 'any backend'}")

    def average_agreement(self, backend: str) -> float:
        scores = [r.agreeing for r in self.records if r.backend == backend and r.agreeing is not None]
        return sum(scores) / len(scores) if scores else 0.0

    def to_tsv(self) -> str:
        lines = ["\t".join(TSV_COLUMNS)]
        lines.extend("\t".join(record.cells()) for record in self.records)
        return "\n".join(lines) + "\n"

    def to_table(self) -> Table:
        table = Table(title=f"{self.experiment} ({self.ctx})")
        for column in TSV_COLUMNS:
            table.add_column(column, style="cyan" if column == "quantity" else None)
        for record in self.records:
            table.add_row(*record.cells())
        return table

    def print_table(self, console: Console | None = None) -> None:
        (console or Console()).print(self.to_table())


def _reference_precision(computed: PadicScalar) -> int:
    if computed.is_exact:
        return max(computed.v, 0) + 64
    return computed.N


def render_reference(reference: Fraction, ctx: PrimeContext, rel: int) -> str:
    """Reference value at relative precision ``rel`` in digit style."""
    if reference == 0:
        return "0"
    v = valuation(reference, ctx)
    return print_scalar(PadicScalar.from_rational(reference, v + rel, ctx), ScalarStyle.DIGITS)
