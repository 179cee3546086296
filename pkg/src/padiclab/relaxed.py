"""
Lazy and relaxed p-adic integers.

A ``LazyNumber`` is a node of a computation DAG. Digits are produced on
demand by the node's producer and cached; ``x.digit(n)`` extends the cache up
to index n. Producers for sums, products, shifts, fixed points, quotients
and external oracles are provided. The product is the relaxed
multiplication: digit n reads operand digits only up to index n, and the
pending contributions are kept in a carry polynomial in a formal variable t.

A DAG caches state on every query: it must not be queried from two threads
at once.
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import networkx as nx

from .core import PadicScalar, PrimeContext, from_base_p, to_base_p
from .errors import ContractionViolation, DomainError, ValuationCapExceeded

log = logging.getLogger(__name__)

KARATSUBA_THRESHOLD = 32


class LazyNumber:
    """A p-adic integer whose digits are produced on demand."""

    def __init__(self, ctx: PrimeContext, label: str = ""):
        self.ctx = ctx
        self.label = label or type(self).__name__
        self._digits: list[int] = []
        self.high_water = -1

    def _produce(self, n: int) -> int:
        raise NotImplementedError

    def operands(self) -> tuple["LazyNumber", ...]:
        return ()

    def digit(self, n: int) -> int:
        """The n-th base-p digit (cached)."""
        if n < 0:
            raise IndexError(f"negative digit index {n}")
        if n > self.high_water:
            self.high_water = n
        digits = self._digits
        while len(digits) <= n:
            digits.append(self._produce(len(digits)))
        return digits[n]

    __getitem__ = digit

    @property
    def demand(self) -> int:
        """Number of leading digits requested so far."""
        return self.high_water + 1

    @property
    def computed(self) -> int:
        return len(self._digits)

    def residue(self, N: int) -> int:
        """The represented integer modulo p^N."""
        return from_base_p([self.digit(i) for i in range(N)], self.ctx)

    def to_scalar(self, N: int) -> PadicScalar:
        return PadicScalar(0, self.residue(N), N, self.ctx)

    def __repr__(self) -> str:
        shown = "".join(str(d) for d in reversed(self._digits[:16]))
        return f"<{self.label} ...{shown}>"

    def __add__(self, other: "LazyNumber | int") -> "LazyNumber":
        return lazy_add(self, _wrap(other, self.ctx))

    def __radd__(self, other: int) -> "LazyNumber":
        return lazy_add(_wrap(other, self.ctx), self)

    def __sub__(self, other: "LazyNumber | int") -> "LazyNumber":
        return lazy_sub(self, _wrap(other, self.ctx))

    def __rsub__(self, other: int) -> "LazyNumber":
        return lazy_sub(_wrap(other, self.ctx), self)

    def __mul__(self, other: "LazyNumber | int") -> "LazyNumber":
        return lazy_mul(self, _wrap(other, self.ctx))

    def __rmul__(self, other: int) -> "LazyNumber":
        return lazy_mul(_wrap(other, self.ctx), self)

    def __truediv__(self, other: "LazyNumber | int") -> "LazyNumber":
        return lazy_div(self, _wrap(other, self.ctx))

    def __neg__(self) -> "LazyNumber":
        return lazy_neg(self)


def _wrap(x: "LazyNumber | int", ctx: PrimeContext) -> LazyNumber:
    return x if isinstance(x, LazyNumber) else LazyConstant(x, ctx)


class LazyConstant(LazyNumber):
    """Digits of an exact integer; negative integers expand in Zp."""

    def __init__(self, n: int, ctx: PrimeContext):
        super().__init__(ctx, label=f"const({n})")
        self.n = n
        self._rest = n

    def _produce(self, n: int) -> int:
        self._rest, d = divmod(self._rest, self.ctx.p)
        return d


class LazySum(LazyNumber):
    """x + y (sign=1) or x - y (sign=-1) with carry or borrow."""

    def __init__(self, x: LazyNumber, y: LazyNumber, sign: int = 1):
        super().__init__(x.ctx, label="add" if sign > 0 else "sub")
        self.x, self.y, self.sign = x, y, sign
        self._carry = 0

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self.x, self.y)

    def _produce(self, n: int) -> int:
        self._carry, d = divmod(
            self.x.digit(n) + self.sign * self.y.digit(n) + self._carry, self.ctx.p
        )
        return d


class LazyShift(LazyNumber):
    """p^k * x for k >= 0; for k < 0 drops the |k| lowest digits of x."""

    def __init__(self, x: LazyNumber, k: int):
        super().__init__(x.ctx, label=f"shift({k})")
        self.x, self.k = x, k

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self.x,)

    def _produce(self, n: int) -> int:
        index = n - self.k
        return self.x.digit(index) if index >= 0 else 0


def paving_squares(n: int) -> Iterator[tuple[int, int, int]]:
    """Squares (i0, j0, size) of the relaxed paving that complete at digit n.

    Each square covers x-indices i0..i0+size-1 against y-indices j0..j0+size-1
    and contributes to positions n and above only.
    """
    m, size = n + 2, 1
    while m > 1:
        yield size - 1, (m - 1) * size - 1, size
        if m > 2:
            yield (m - 1) * size - 1, size - 1, size
        if m % 2:
            break
        m //= 2
        size *= 2


def _poly_add_into(acc: list[int], poly: list[int]) -> None:
    if len(acc) < len(poly):
        acc.extend([0] * (len(poly) - len(acc)))
    for k, c in enumerate(poly):
        acc[k] += c


def poly_mul(a: list[int], b: list[int]) -> list[int]:
    """Product of dense little-endian polynomials; Karatsuba above the threshold."""
    if not a or not b:
        return []
    if min(len(a), len(b)) < KARATSUBA_THRESHOLD:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return out
    half = max(len(a), len(b)) // 2
    a0, a1 = a[:half], a[half:]
    b0, b1 = b[:half], b[half:]
    z0 = poly_mul(a0, b0)
    z2 = poly_mul(a1, b1)
    sa, sb = list(a0), list(b0)
    _poly_add_into(sa, a1)
    _poly_add_into(sb, b1)
    z1 = poly_mul(sa, sb)
    for k, c in enumerate(z0):
        z1[k] -= c
    for k, c in enumerate(z2):
        z1[k] -= c
    out = [0] * (len(a) + len(b) - 1)
    for k, c in enumerate(z0):
        out[k] += c
    for k, c in enumerate(z1):
        if c:
            out[k + half] += c
    for k, c in enumerate(z2):
        out[k + 2 * half] += c
    return out


class LazyProduct(LazyNumber):
    """Relaxed product x * y.

    The carry is a dense polynomial in t: before digit n is produced, its
    coefficient k is the pending contribution to position n + k. Digit n adds
    the paving squares that end at n, emits the constant coefficient mod p
    and divides by t. The carry is never evaluated at t = p.
    """

    def __init__(self, x: LazyNumber, y: LazyNumber):
        super().__init__(x.ctx, label="mul")
        self.x, self.y = x, y
        self._carry: list[int] = []
        self._base = 0
        self.touches = 0

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self.x, self.y)

    def pending_carry(self) -> list[int]:
        """Coefficients of the carry polynomial, lowest first."""
        return self._carry[self._base :]

    def _produce(self, n: int) -> int:
        x, y = self.x, self.y
        s, base = self._carry, self._base
        for i0, j0, size in paving_squares(n):
            a = [x.digit(i) for i in range(i0, i0 + size)]
            b = [y.digit(j) for j in range(j0, j0 + size)]
            self.touches += 2 * size
            block = poly_mul(a, b)
            if len(s) < base + len(block):
                s.extend([0] * (base + len(block) - len(s)))
            for k, c in enumerate(block):
                s[base + k] += c
        head = s[base] if base < len(s) else 0
        high, d = divmod(head, self.ctx.p)
        base += 1
        if high:
            if base < len(s):
                s[base] += high
            else:
                s.append(high)
        if base > 64 and 2 * base > len(s):
            del s[:base]
            base = 0
        self._base = base
        return d


class _SelfReference(LazyNumber):
    """Read-only view of a fixed point restricted to its computed digits."""

    def __init__(self, target: "LazyFixedPoint"):
        super().__init__(target.ctx, label="self")
        self.target = target

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self.target,)

    def digit(self, n: int) -> int:
        computed = self.target.computed
        if n >= computed:
            raise ContractionViolation(n, computed)
        if n > self.high_water:
            self.high_water = n
        return self.target.digit(n)

    __getitem__ = digit


type DigitRule = Callable[[LazyNumber, int], int]


class LazyFixedPoint(LazyNumber):
    """Fixed point of a contraction given digit by digit.

    ``rule(me, n)`` returns digit n and may read ``me.digit(k)`` for k < n only.
    """

    def __init__(self, ctx: PrimeContext, rule: DigitRule | None = None):
        super().__init__(ctx, label="fixed_point")
        self._rule = rule
        self._me = _SelfReference(self)
        self._body: LazyNumber | None = None

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self._body,) if self._body is not None else ()

    def _produce(self, n: int) -> int:
        if self._rule is None:
            raise DomainError("fixed point has no rule")
        return self._rule(self._me, n) % self.ctx.p


def lazy_fixed_point(rule: DigitRule, ctx: PrimeContext) -> LazyFixedPoint:
    return LazyFixedPoint(ctx, rule)


def fixed_point_of(map_: Callable[[LazyNumber], LazyNumber], ctx: PrimeContext) -> LazyFixedPoint:
    """Fixed point of a map on lazy numbers, e.g. ``lambda x: 1 + p * x``.

    The map must be a contraction: digit n of map_(x) may depend on digits
    of x below n only.
    """
    fp = LazyFixedPoint(ctx)
    body = map_(fp._me)
    fp._body = body
    fp._rule = lambda _me, n: body.digit(n)
    return fp


class LazyOracle(LazyNumber):
    """Digits supplied by ``compute(prec)``, a residue modulo p^prec.

    The oracle is queried at power-of-two precisions and memoized;
    ``demand`` records how many digits callers actually asked for.
    """

    def __init__(self, compute: Callable[[int], int], ctx: PrimeContext, label: str = "oracle"):
        super().__init__(ctx, label=label)
        self._compute = compute
        self._fetched: list[int] = []
        self.queries: list[int] = []

    def digit(self, n: int) -> int:
        if n >= len(self._fetched):
            self._fetch(n)
        return super().digit(n)

    __getitem__ = digit

    def _fetch(self, n: int) -> None:
        """One query at the smallest power of two above n."""
        prec = 1
        while prec <= n:
            prec *= 2
        self.queries.append(prec)
        residue = self._compute(prec) % self.ctx.p**prec
        digits = to_base_p(residue, self.ctx)
        self._fetched = digits + [0] * (prec - len(digits))

    def _produce(self, n: int) -> int:
        return self._fetched[n]


class LazyQuotient(LazyNumber):
    """a / b in Zp; the fixed point is set up on the first digit request."""

    def __init__(self, a: LazyNumber, b: LazyNumber):
        super().__init__(a.ctx, label="div")
        self.a, self.b = a, b
        self._result: LazyNumber | None = None
        self.shift = 0

    def operands(self) -> tuple[LazyNumber, ...]:
        return (self.a, self.b)

    def _setup(self) -> LazyNumber:
        p = self.ctx.p
        v = lazy_val(self.b)
        self.shift = v
        a, b = shift_right(self.a, v), shift_right(self.b, v)
        c = pow(b.digit(0), -1, p)
        ac = lazy_mul(a, LazyConstant(c, self.ctx))
        w = shift_right(lazy_sub(LazyConstant(1, self.ctx), lazy_mul(b, LazyConstant(c, self.ctx))), 1)
        log.debug("division set up with divisor valuation %d, c = %d", v, c)
        return fixed_point_of(lambda x: lazy_add(ac, shift_left(lazy_mul(w, x), 1)), self.ctx)

    def _produce(self, n: int) -> int:
        if self._result is None:
            self._result = self._setup()
        return self._result.digit(n)


def lazy_add(x: LazyNumber, y: LazyNumber) -> LazyNumber:
    _check_context(x, y)
    return LazySum(x, y, 1)


def lazy_sub(x: LazyNumber, y: LazyNumber) -> LazyNumber:
    _check_context(x, y)
    return LazySum(x, y, -1)


def lazy_neg(x: LazyNumber) -> LazyNumber:
    return LazySum(LazyConstant(0, x.ctx), x, -1)


def lazy_mul(x: LazyNumber, y: LazyNumber) -> LazyNumber:
    _check_context(x, y)
    return LazyProduct(x, y)


def lazy_div(a: LazyNumber, b: LazyNumber) -> LazyNumber:
    """a / b, where a must be divisible by p^val(b) in Zp.

    Raises (on the first digit request):
        ValuationCapExceeded: b shows no nonzero digit below the valuation cap.
    """
    _check_context(a, b)
    return LazyQuotient(a, b)


def shift_left(x: LazyNumber, k: int) -> LazyNumber:
    return LazyShift(x, k) if k else x


def shift_right(x: LazyNumber, k: int) -> LazyNumber:
    return LazyShift(x, -k) if k else x


def _check_context(x: LazyNumber, y: LazyNumber) -> None:
    if x.ctx != y.ctx:
        raise DomainError(f"mixed prime contexts: {x.ctx} and {y.ctx}")


def lazy_val(x: LazyNumber, bound: int | None = None) -> int:
    """Index of the first nonzero digit, searched below ``bound`` (default val_cap)."""
    bound = x.ctx.val_cap if bound is None else bound
    for i in range(bound):
        if x.digit(i):
            return i
    raise ValuationCapExceeded(f"no nonzero digit among the first {bound}")


@dataclass(frozen=True)
class EqualityVerdict:
    """Outcome of a bounded equality test.

    ``equal`` only certifies agreement of the first ``bound`` digits.
    """

    equal: bool
    bound: int
    index: int | None = None

    def __bool__(self) -> bool:
        return self.equal


def lazy_is_equal(x: LazyNumber, y: LazyNumber, bound: int) -> EqualityVerdict:
    for i in range(bound):
        if x.digit(i) != y.digit(i):
            return EqualityVerdict(False, bound, i)
    return EqualityVerdict(True, bound)


def computation_graph(root: LazyNumber) -> nx.DiGraph:
    """The DAG below ``root`` (edges point from a node to its operands)."""
    graph = nx.DiGraph()
    stack = [root]
    while stack:
        node = stack.pop()
        key = id(node)
        if key in graph and graph.nodes[key].get("visited"):
            continue
        graph.add_node(key, label=node.label, computed=node.computed, demand=node.demand, visited=True)
        for operand in node.operands():
            graph.add_edge(key, id(operand))
            stack.append(operand)
    return graph
