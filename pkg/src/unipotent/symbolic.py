"""Symbolic collection: Hall polynomial tables stored as straight-line programs.

For each position r of the ordering, collecting

    (prod_{s>r} x_s(a_s)) x_r(b) = x_r(b) prod_{s>r} x_s(c_rs(b, a_{r+1}, ..., a_N))

once over a ring of straight-line programs gives the table row r.  A product
x*y is then N substitutions: right-multiply by x_r(y_r) for r = 1..N.

Programs are hash-consed DAGs of add/neg/mul nodes.  Zero detection uses
fingerprints (values at random points modulo 2^61 - 1), so that terms which
cancel are eliminated during collection just as they would be over a field.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Sequence

from .classical import check_characteristic, direct_multiply
from .collect import (CollectedElement, Word, collect, identity_element)
from .presentation import Presentation
from .rings import Ring, UnivariatePolyModP

FP_PRIME = (1 << 61) - 1
FP_POINTS = 2
DEFAULT_NODE_CAP = 10 ** 6
STRATEGIES = ("cfl", "cfo", "sd")


class MemoryGuard(MemoryError):
    """A table build exceeded the configured node cap."""


# --- straight-line programs ----------------------------------------------------

INPUT, CONST, ADD, NEG, MUL = range(5)


class SLPGraph:
    """Shared node store.  Node ids are topologically ordered by construction."""

    def __init__(self, ninputs: int, cap: int = DEFAULT_NODE_CAP, seed: int = 0):
        self.cap = cap
        self.ops: list[tuple] = []
        self.fp: list[tuple] = []
        self.deg: list[int] = []
        self._index: dict[tuple, int] = {}
        rng = Random(seed)
        self.points = [[rng.randrange(1, FP_PRIME) for _ in range(ninputs)] for _ in range(FP_POINTS)]
        self.inputs = [self._node((INPUT, k)) for k in range(ninputs)]
        self.zero = self._node((CONST, 0))
        self.one = self._node((CONST, 1))

    def __len__(self):
        return len(self.ops)

    def _node(self, key: tuple) -> int:
        h = self._index.get(key)
        if h is not None:
            return h
        op = key[0]
        f, d = self.fp, self.deg
        if op == INPUT:
            val = tuple(pt[key[1]] for pt in self.points)
            deg = 1
        elif op == CONST:
            val = (key[1] % FP_PRIME,) * FP_POINTS
            deg = 0
        elif op == ADD:
            val = tuple((u + v) % FP_PRIME for u, v in zip(f[key[1]], f[key[2]]))
            deg = max(d[key[1]], d[key[2]])
        elif op == NEG:
            val = tuple((-u) % FP_PRIME for u in f[key[1]])
            deg = d[key[1]]
        else:
            val = tuple(u * v % FP_PRIME for u, v in zip(f[key[1]], f[key[2]]))
            deg = d[key[1]] + d[key[2]]
        if op != CONST and not any(val):
            return self.zero
        if len(self.ops) >= self.cap:
            raise MemoryGuard(f"straight-line program exceeded {self.cap} nodes")
        h = len(self.ops)
        self.ops.append(key)
        self.fp.append(val)
        self.deg.append(deg)
        self._index[key] = h
        return h


class SLPRing(Ring):
    """Ring whose elements are node ids of an :class:`SLPGraph`."""

    characteristic = 0

    def __init__(self, graph: SLPGraph):
        self.graph = graph
        self.name = "SLP"
        self.zero = graph.zero
        self.one = graph.one

    def add(self, x, y):
        if x == self.zero:
            return y
        if y == self.zero:
            return x
        return self.graph._node((ADD,) + ((x, y) if x < y else (y, x)))

    def neg(self, x):
        if x == self.zero:
            return x
        if self.graph.ops[x][0] == NEG:
            return self.graph.ops[x][1]
        return self.graph._node((NEG, x))

    def mul(self, x, y):
        if x == self.zero or y == self.zero:
            return self.zero
        if x == self.one:
            return y
        if y == self.one:
            return x
        return self.graph._node((MUL,) + ((x, y) if x < y else (y, x)))

    def eq(self, x, y):
        return self.graph.fp[x] == self.graph.fp[y]

    def is_zero(self, x):
        return x == self.zero

    def from_int(self, n):
        return self.graph._node((CONST, int(n)))


@dataclass(frozen=True)
class SLProgram:
    """A compiled program: registers 0..ninputs-1 hold inputs, then one per instruction.

    ``code`` holds ``(op, x, y)`` with register operands (``x`` is the constant
    for CONST).  ``outputs`` lists ``(target, register)``.
    """

    ninputs: int
    code: tuple
    outputs: tuple

    @property
    def size(self) -> int:
        return len(self.code)

    def run(self, ring: Ring, inputs: Sequence) -> list:
        regs = list(inputs)
        add, mul, neg, const = ring.add, ring.mul, ring.neg, ring.from_int
        for op, x, y in self.code:
            if op == ADD:
                regs.append(add(regs[x], regs[y]))
            elif op == MUL:
                regs.append(mul(regs[x], regs[y]))
            elif op == NEG:
                regs.append(neg(regs[x]))
            else:
                regs.append(const(x))
        return [(s, regs[k]) for s, k in self.outputs]


def compile_program(graph: SLPGraph, outputs: Sequence[tuple[int, int]],
                    input_nodes: Sequence[int]) -> SLProgram:
    """Straight-line program for the given ``(target, node)`` outputs."""
    reg = {h: k for k, h in enumerate(input_nodes)}
    needed = set()
    stack = [h for _, h in outputs]
    while stack:
        h = stack.pop()
        if h in needed or h in reg:
            continue
        needed.add(h)
        op = graph.ops[h]
        if op[0] == INPUT:
            raise ValueError("program depends on an input outside its row")
        if op[0] in (ADD, MUL):
            stack += [op[1], op[2]]
        elif op[0] == NEG:
            stack.append(op[1])
    code = []
    for h in sorted(needed):
        op = graph.ops[h]
        reg[h] = len(input_nodes) + len(code)
        if op[0] == CONST:
            code.append((CONST, op[1], 0))
        elif op[0] == NEG:
            code.append((NEG, reg[op[1]], 0))
        else:
            code.append((op[0], reg[op[1]], reg[op[2]]))
    return SLProgram(len(input_nodes), tuple(code), tuple((s, reg[h]) for s, h in outputs))


# --- tables ---------------------------------------------------------------------

@dataclass
class SymbolicTables:
    """Row r computes c_rs for s > r from inputs (b, a_{r+1}, ..., a_N).

    Rows use ordering positions.  Entries with c_rs = a_s are not stored.
    """

    pres: Presentation
    strategy: str
    rows: list
    entries: dict = field(repr=False)
    node_count: int = 0

    @property
    def N(self) -> int:
        return self.pres.N

    @property
    def ordering(self):
        return self.pres.ordering

    def entry_count(self) -> int:
        """Number of polynomials c_rs, r < s (including trivial ones)."""
        return self.N * (self.N - 1) // 2


def _row_word(pres: Presentation, ring: SLPRing, r: int) -> Word:
    g = ring.graph
    w = Word(ring)
    for s in range(r + 1, pres.N):
        w.append(s, g.inputs[s + 1])
    w.append(r, g.inputs[0])
    return w


def build_symbolic_tables(pres: Presentation, strategy: str = "cfo",
                          cap: int = DEFAULT_NODE_CAP, seed: int = 0) -> SymbolicTables:
    """Collect the N defining words symbolically with ``strategy``.

    ``strategy`` is ``cfl``, ``cfo`` or ``sd`` (closed-form formulas; these
    require the representation ordering of a classical type).
    """
    strategy = strategy.lower()
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown symbolic strategy {strategy!r}")
    if strategy == "cfl" and not pres.ordering.left_additive:
        raise ValueError("CFL needs a left-additive ordering")
    if strategy == "cfo" and not pres.ordering.additive:
        raise ValueError("CFO needs an additive ordering")
    rs, N = pres.rs, pres.N
    if strategy == "sd" and pres.ordering.order != tuple(range(N)):
        raise ValueError("SD tables need the representation ordering")
    graph = SLPGraph(N + 1, cap=cap, seed=seed)
    ring = SLPRing(graph)
    if strategy == "sd":
        check_characteristic(rs, ring)
    rows, entries = [], {}
    for r in range(N):
        if strategy == "sd":
            left = [graph.zero] * (r + 1) + [graph.inputs[s + 1] for s in range(r + 1, N)]
            right = [graph.zero] * N
            right[r] = graph.inputs[0]
            coeffs = direct_multiply(rs, ring, left, right)
        else:
            coeffs = collect(pres, _row_word(pres, ring, r), strategy).coeffs
        if coeffs[r] != graph.inputs[0] or any(c != graph.zero for c in coeffs[:r]):
            raise ValueError(f"row {r + 1} does not have the expected shape")
        outputs = [(s, coeffs[s]) for s in range(r + 1, N) if coeffs[s] != graph.inputs[s + 1]]
        for s, h in outputs:
            entries[r, s] = h
        rows.append(compile_program(graph, outputs, [graph.inputs[0]] + graph.inputs[r + 2:]))
    return SymbolicTables(pres, strategy, rows, {k: (graph, h) for k, h in entries.items()},
                          node_count=len(graph))


def _row_inputs(c: list, r: int, b) -> list:
    return [b] + c[r + 1:]


def _mul_by_root(tables: SymbolicTables, ring: Ring, c: list, r: int, b):
    if ring.is_zero(b):
        return
    updates = tables.rows[r].run(ring, _row_inputs(c, r, b))
    c[r] = ring.add(c[r], b)
    for s, v in updates:
        c[s] = v


def _check(tables: SymbolicTables, *xs):
    for x in xs:
        if x.ordering != tables.ordering:
            raise ValueError("element ordering does not match the symbolic tables")


def symbolic_multiply(tables: SymbolicTables, ring: Ring, x: CollectedElement,
                      y: CollectedElement) -> CollectedElement:
    _check(tables, x, y)
    c = list(x.coeffs)
    for r, b in enumerate(y.coeffs):
        _mul_by_root(tables, ring, c, r, b)
    return CollectedElement(x.ordering, tuple(c))


def symbolic_invert(tables: SymbolicTables, ring: Ring, x: CollectedElement) -> CollectedElement:
    """x^-1 = x_N(-a_N) ... x_1(-a_1), built by right multiplication."""
    _check(tables, x)
    c = list(identity_element(x.ordering, ring).coeffs)
    for r in reversed(range(tables.N)):
        _mul_by_root(tables, ring, c, r, ring.neg(x.coeffs[r]))
    return CollectedElement(x.ordering, tuple(c))


# --- degrees ----------------------------------------------------------------------

def _scaled_point(ring: UnivariatePolyModP, rng: Random, n: int) -> list:
    return [ring.constant_times_t(rng.randrange(1, ring.p)) for _ in range(n)]


def entry_degrees(tables: SymbolicTables, seed: int = 1) -> dict[tuple[int, int], int]:
    """Total degree of every stored c_rs (trivial entries c_rs = a_s have degree 1)."""
    ring = UnivariatePolyModP()
    rng = Random(seed)
    out = {}
    for r, prog in enumerate(tables.rows):
        for _ in range(2):
            vals = prog.run(ring, _scaled_point(ring, rng, prog.ninputs))
            for s, v in vals:
                out[r, s] = max(out.get((r, s), 0), ring.degree(v))
    return out


def product_degrees(tables: SymbolicTables, seed: int = 1, repeats: int = 2) -> list[int]:
    """Total degrees of the product Hall polynomials F_r(a_1..a_N, b_1..b_N).

    F_r is evaluated at (t*a, t*b) for random a, b; its t-degree is the total
    degree unless the leading form vanishes at the point (probability at most
    deg/2^61).  The maximum over ``repeats`` points is returned.
    """
    ring = UnivariatePolyModP()
    rng = Random(seed)
    N = tables.N
    best = [0] * N
    for _ in range(repeats):
        x = CollectedElement(tables.ordering, tuple(_scaled_point(ring, rng, N)))
        y = CollectedElement(tables.ordering, tuple(_scaled_point(ring, rng, N)))
        z = symbolic_multiply(tables, ring, x, y)
        best = [max(d, ring.degree(v)) for d, v in zip(best, z.coeffs)]
    return best


@dataclass(frozen=True)
class DegreeStats:
    max_degree: int
    avg_degree: Fraction
    count: int


def hall_degree_stats(tables: SymbolicTables, seed: int = 1) -> DegreeStats:
    """Maximum and exact average total degree of the product Hall polynomials."""
    degs = [d for d in product_degrees(tables, seed) if d > 0]
    if not degs:
        return DegreeStats(0, Fraction(0), 0)
    return DegreeStats(max(degs), Fraction(sum(degs), len(degs)), len(degs))


def table_report(tables: SymbolicTables, seed: int = 1) -> list[tuple]:
    """Rows ``(type, rank, strategy, r, s, node count, total degree)`` per stored entry.

    Indices are 1-based ordering positions; node count is the size of the
    program computing that single entry.
    """
    rs = tables.pres.rs
    degs = entry_degrees(tables, seed)
    rows = []
    for (r, s), (graph, h) in sorted(tables.entries.items()):
        prog = compile_program(graph, [(s, h)], [graph.inputs[0]] + graph.inputs[r + 2:])
        rows.append((rs.cartan, rs.rank, tables.strategy, r + 1, s + 1, prog.size, degs[r, s]))
    return rows
