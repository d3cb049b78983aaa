"""Split FC presentations: commutator tails read off the matrix representation.

For an ordered pair of roots (alpha, beta) with alpha + beta a root the table
holds entries ``(t, C, i, j)`` with

    x_beta(b) x_alpha(a) = x_alpha(a) x_beta(b) prod_t x_t(C a^i b^j),
    alpha_t = i alpha + j beta.

The tail factors commute with each other for classical types, so their
order is immaterial; they are stored by ascending position in the active
ordering.  Constants are derived by expanding the commutator
``x_beta(-b) x_alpha(-a) x_beta(b) x_alpha(a)`` over Q[a, b] and peeling root
elements off in increasing height.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from random import Random

from .classical import layout, root_entries
from .rings import PolynomialRing, Ring, SparsePoly
from .rootsystem import Ordering, RootSystem, representation_order


class PresentationError(RuntimeError):
    pass


# --- sparse unitriangular matrices: {(row, col): value} off the diagonal ------

def _sparse_root(rs, ring, r, t):
    return {(row, col): v for row, col, v in root_entries(rs, ring, r, t)}


def _sparse_mul(ring, x, y):
    """(I + x)(I + y) - I."""
    out = dict(x)
    for k, v in y.items():
        out[k] = ring.add(out[k], v) if k in out else v
    by_row = {}
    for (q, c), v in y.items():
        by_row.setdefault(q, []).append((c, v))
    for (r, q), v in x.items():
        for c, w in by_row.get(q, ()):
            p = ring.mul(v, w)
            out[r, c] = ring.add(out[r, c], p) if (r, c) in out else p
    return {k: v for k, v in out.items() if not ring.is_zero(v)}


def _primary_entry(rs, r):
    """Matrix cell that carries the coefficient of root r, and its scale."""
    lay = layout(rs)
    i, j = rs.labels[r]
    if rs.cartan == "A":
        return (j - 1, i - 1), 1
    if j == 0:
        return (lay.pos(0), lay.pos(i)), 2
    return (lay.pos(j), lay.pos(i)), 1


@dataclass(frozen=True)
class TailEntry:
    t: int
    C: int
    i: int
    j: int


@lru_cache(maxsize=None)
def commutator_table(rs: RootSystem) -> dict[tuple[int, int], tuple[TailEntry, ...]]:
    """Tails for every ordered pair (alpha, beta) of roots with alpha + beta a root."""
    ring = PolynomialRing(["a", "b"])
    a, b = ring.gens()
    na, nb = ring.neg(a), ring.neg(b)
    by_height = sorted(range(rs.N), key=lambda r: (rs.heights[r], r))
    cells = {r: _primary_entry(rs, r) for r in range(rs.N)}
    table = {}
    for (al, be) in rs.sum_table:
        m = _sparse_root(rs, ring, be, nb)
        m = _sparse_mul(ring, m, _sparse_root(rs, ring, al, na))
        m = _sparse_mul(ring, m, _sparse_root(rs, ring, be, b))
        m = _sparse_mul(ring, m, _sparse_root(rs, ring, al, a))
        entries = []
        while m:
            for t in by_height:
                cell, scale = cells[t]
                if cell in m:
                    break
            else:
                raise PresentationError(f"cannot peel commutator of {rs.labels[al]}, {rs.labels[be]}")
            val = m[cell]
            if len(val.terms) != 1:
                raise PresentationError("commutator tail is not a monomial")
            (ea, eb), c = next(iter(val.terms.items()))
            if c % scale:
                raise PresentationError("non-integral structure constant")
            C = int(c) // scale
            expect = tuple(ea * x + eb * y for x, y in zip(rs.vectors[al], rs.vectors[be]))
            if expect != rs.vectors[t]:
                raise PresentationError("tail root does not match its exponents")
            entries.append(TailEntry(t, C, ea, eb))
            coeff = SparsePoly(2, {(ea, eb): -C})
            m = _sparse_mul(ring, _sparse_root(rs, ring, t, coeff), m)
        table[al, be] = tuple(entries)
    return table


def table_rows(rs: RootSystem) -> list[tuple]:
    """CSV rows ``type, rank, r, s, t, i, j, C`` (1-based representation indices)."""
    rows = []
    for (al, be), entries in sorted(commutator_table(rs).items()):
        for e in entries:
            rows.append((rs.cartan, rs.rank, al + 1, be + 1, e.t + 1, e.i, e.j, e.C))
    return rows


def dump_table_csv(rs: RootSystem) -> str:
    lines = ["type,rank,r,s,t,i,j,C"]
    lines += [",".join(map(str, row)) for row in table_rows(rs)]
    return "\n".join(lines) + "\n"


# --- presentations bound to an ordering -------------------------------------------

@dataclass(eq=False)
class Presentation:
    """Relations of U for one ordering, indexed by ordering positions.

    ``redrs[p][q]`` (p < q) gives the tail of x_q(b) x_p(a) = x_p(a) x_q(b) * tail
    as tuples ``(t, C, i, j)`` meaning x_t(C a^i b^j).  ``addrs[p][q]`` gives
    the middle factor of x_q(b) x_p(a) = x_p(a) * middle * x_q(b), with the
    sign of (-b)^j folded into C.  ``None`` means the pair commutes.
    """

    rs: RootSystem
    ordering: Ordering
    table: dict
    redrs: list = field(repr=False)
    addrs: list = field(repr=False)

    @property
    def N(self):
        return self.rs.N

    def with_flipped_constant(self, pair=None) -> "Presentation":
        """A corrupted copy with one structure constant negated (mutation testing)."""
        table = dict(self.table)
        if pair is None:
            pair = next(k for k in sorted(table) if table[k])
        first, *rest = table[pair]
        table[pair] = (TailEntry(first.t, -first.C, first.i, first.j), *rest)
        return _build(self.rs, self.ordering, table)


def _build(rs: RootSystem, ordering: Ordering, table) -> Presentation:
    N = rs.N
    pos = ordering.pos
    order = ordering.order
    redrs = [[None] * N for _ in range(N)]
    addrs = [[None] * N for _ in range(N)]
    for p in range(N):
        for q in range(p + 1, N):
            r, s = order[p], order[q]
            tail = table.get((r, s))
            if tail:
                redrs[p][q] = tuple(sorted((pos[e.t], e.C, e.i, e.j) for e in tail))
            # x_s(b) x_r(a) = x_r(a) prod x_t(C_{ji,s,r} a^i (-b)^j) x_s(b)
            rev = table.get((s, r))
            if rev:
                addrs[p][q] = tuple(sorted(
                    (pos[e.t], -e.C if e.i % 2 else e.C, e.j, e.i) for e in rev))
    return Presentation(rs, ordering, table, redrs, addrs)


_CACHE: dict = {}


def presentation(rs: RootSystem, ordering: Ordering | None = None) -> Presentation:
    if ordering is None:
        ordering = representation_order(rs)
    key = (rs.cartan, rs.rank, ordering.order)
    pres = _CACHE.get(key)
    if pres is None:
        pres = _CACHE[key] = _build(rs, ordering, commutator_table(rs))
    return pres


def addrs_tail(pres: Presentation, r: int, s: int) -> tuple:
    """Middle factor for x_s(b) x_r(a) with r before s (ordering positions)."""
    if not r < s:
        raise ValueError("addrs_tail needs r < s in the ordering")
    return pres.addrs[r][s] or ()


@dataclass
class ValidationReport:
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_presentation(pres: Presentation, ring: Ring, trials: int = 100,
                          seed: int = 0) -> ValidationReport:
    """Associativity, inverses and agreement of the collectors on random input."""
    from .collect import (CollectedElement, collect_generic, random_element,
                          u_invert, u_multiply, word_from_element)

    rng = Random(seed)
    report = ValidationReport()
    methods = ["cfl", "generic"]
    if pres.ordering.left_additive:
        methods.append("ctl")
    if pres.ordering.additive:
        methods.append("cfo")
    if not pres.ordering.left_additive:
        methods.remove("cfl")
    zero = CollectedElement(pres.ordering, (ring.zero,) * pres.N)
    for k in range(trials):
        report.trials += 1
        u, v, w = (random_element(pres.ordering, ring, rng) for _ in range(3))
        m = methods[k % len(methods)]
        try:
            left = u_multiply(pres, ring, u_multiply(pres, ring, u, v, m), w, m)
            right = u_multiply(pres, ring, u, u_multiply(pres, ring, v, w, m), m)
            if not left.equal(ring, right):
                report.failures.append(("associativity", m, k))
            if not u_multiply(pres, ring, u, u_invert(pres, ring, u, m), m).equal(ring, zero):
                report.failures.append(("inverse", m, k))
            results = [u_multiply(pres, ring, u, v, mm) for mm in methods]
            if any(not x.equal(ring, results[0]) for x in results[1:]):
                report.failures.append(("agreement", m, k))
        except Exception as exc:  # runaway collection on a corrupted table
            report.failures.append(("error", m, k, repr(exc)))
    return report
