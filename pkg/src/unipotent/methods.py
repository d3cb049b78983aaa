"""One entry point per multiplication method, each bound to its ordering.

=========  ==========================================  =========================
method     algorithm                                   ordering
=========  ==========================================  =========================
ctl        collection to the left                      height
cfl        collection from the left                    height
cfo        collection from the outside                 Papi (lex-least w0 word)
scfl       Hall polynomials built by CFL               height
scfo       Hall polynomials built by CFO               Papi
sd         Hall polynomials from the closed formulas   representation
direct     closed-form product/inverse formulas        representation
matrix     product of matrices, then extraction        representation
=========  ==========================================  =========================
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .classical import (check_characteristic, direct_invert, direct_multiply,
                        embed_matrix, extract_coeffs, matrix_method_multiply,
                        unitriangular_inverse)
from .collect import CollectedElement, reorder, u_invert, u_multiply
from .presentation import Presentation, presentation
from .rings import Ring
from .rootsystem import (Ordering, RootSystem, height_order, representation_order,
                         w0_ordering)
from .symbolic import (DEFAULT_NODE_CAP, SymbolicTables, build_symbolic_tables,
                       symbolic_invert, symbolic_multiply)

METHODS = ("ctl", "cfl", "cfo", "scfl", "scfo", "sd", "direct", "matrix")
COLLECTION_METHODS = ("ctl", "cfl", "cfo")
FORMULA_METHODS = ("sd", "direct", "matrix")


def default_ordering(rs: RootSystem, method: str) -> Ordering:
    method = method.lower()
    if method in ("ctl", "cfl", "scfl"):
        return height_order(rs)
    if method in ("cfo", "scfo"):
        return w0_ordering(rs)
    if method in FORMULA_METHODS or method == "generic":
        return representation_order(rs)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


@lru_cache(maxsize=None)
def _tables(rs: RootSystem, method: str, cap: int) -> SymbolicTables:
    pres = presentation(rs, default_ordering(rs, method))
    return build_symbolic_tables(pres, {"scfl": "cfl", "scfo": "cfo", "sd": "sd"}[method], cap=cap)


@dataclass
class Method:
    """Multiplication and inversion for one method on one root system."""

    rs: RootSystem
    name: str
    cap: int = DEFAULT_NODE_CAP
    ordering: Ordering = field(init=False)
    pres: Presentation = field(init=False)
    tables: SymbolicTables | None = field(init=False, default=None)

    def __post_init__(self):
        self.name = self.name.lower()
        self.ordering = default_ordering(self.rs, self.name)
        self.pres = presentation(self.rs, self.ordering)

    def prepare(self, ring: Ring):
        """Build symbolic tables and check ring support; may raise."""
        if self.name in FORMULA_METHODS:
            check_characteristic(self.rs, ring)
        if self.name in ("scfl", "scfo", "sd") and self.tables is None:
            self.tables = _tables(self.rs, self.name, self.cap)
        return self

    def element(self, ring: Ring, x: CollectedElement) -> CollectedElement:
        """x re-expressed in this method's ordering."""
        return reorder(ring, x, self.ordering)

    def multiply(self, ring: Ring, x: CollectedElement, y: CollectedElement) -> CollectedElement:
        self.prepare(ring)
        n = self.name
        if n in COLLECTION_METHODS:
            return u_multiply(self.pres, ring, x, y, n)
        if n in ("scfl", "scfo", "sd"):
            return symbolic_multiply(self.tables, ring, x, y)
        self._check_rep(x, y)
        if n == "direct":
            c = direct_multiply(self.rs, ring, x.coeffs, y.coeffs)
        else:
            c = matrix_method_multiply(self.rs, ring, x.coeffs, y.coeffs)
        return CollectedElement(self.ordering, tuple(c))

    def invert(self, ring: Ring, x: CollectedElement) -> CollectedElement:
        self.prepare(ring)
        n = self.name
        if n in COLLECTION_METHODS:
            return u_invert(self.pres, ring, x, n)
        if n in ("scfl", "scfo", "sd"):
            return symbolic_invert(self.tables, ring, x)
        self._check_rep(x)
        if n == "direct":
            c = direct_invert(self.rs, ring, x.coeffs)
        else:
            m = unitriangular_inverse(ring, embed_matrix(self.rs, ring, x.coeffs))
            c = extract_coeffs(self.rs, ring, m)
        return CollectedElement(self.ordering, tuple(c))

    def _check_rep(self, *xs):
        for x in xs:
            if x.ordering != self.ordering:
                raise ValueError("element ordering does not match the method")


def get_method(rs: RootSystem, name: str, cap: int = DEFAULT_NODE_CAP) -> Method:
    return Method(rs, name, cap)
