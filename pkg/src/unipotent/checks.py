"""Randomised consistency suites shared by ``selftest`` and the acceptance tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from random import Random
from typing import Sequence

from .classical import (embed_by_root_maps, embed_matrix, extract_coeffs, identity_matrix,
                        layout, matrix_multiply,
                        preserves_form, root_matrix, unitriangular_inverse)
from .collect import (CollectedElement, Word, collect, identity_element, random_element,
                      reorder)
from .methods import FORMULA_METHODS, METHODS, get_method
from .presentation import presentation, validate_presentation
from .rings import Ring
from .rootsystem import (RootSystem, height_order, representation_order, w0_ordering)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, *info):
        self.failures.append(info)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", first failure {self.failures[0]}" if self.failures else ""
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures{extra}"


def supported_methods(rs: RootSystem, ring: Ring, methods: Sequence[str] = METHODS) -> list[str]:
    """Methods usable over ``ring`` (the closed formulas for B need odd characteristic)."""
    if rs.cartan == "B" and ring.characteristic == 2:
        return [m for m in methods if m not in FORMULA_METHODS]
    return list(methods)


def _rep_tuple(ring, x: CollectedElement, rep) -> tuple:
    return reorder(ring, x, rep).coeffs


def _equal(ring, xs, ys) -> bool:
    return len(xs) == len(ys) and all(ring.eq(a, b) for a, b in zip(xs, ys))


def agreement(rs: RootSystem, ring: Ring, trials: int, seed: int = 0,
              methods: Sequence[str] | None = None) -> CheckResult:
    """All methods give the same product and inverse.

    Methods sharing an ordering are compared directly; one result per
    ordering is then reordered into the Papi ordering (additive in every
    type, so reordering uses CFO) and compared there.
    """
    methods = supported_methods(rs, ring, methods or METHODS)
    res = CheckResult(f"agreement {rs.name} over {ring.name}")
    impls = [get_method(rs, m).prepare(ring) for m in methods]
    groups: dict = {}
    for M in impls:
        groups.setdefault(M.ordering, []).append(M)
    hub = w0_ordering(rs)
    rep = representation_order(rs)
    rng = Random(seed)
    for k in range(trials):
        x, y = random_element(rep, ring, rng), random_element(rep, ring, rng)
        res.cases += 1
        ref = None
        for ordering, members in groups.items():
            gx, gy = reorder(ring, x, ordering), reorder(ring, y, ordering)
            outs = [(M.name, M.multiply(ring, gx, gy), M.invert(ring, gx)) for M in members]
            name0, p0, i0 = outs[0]
            for name, p, i in outs[1:]:
                if not p.equal(ring, p0):
                    res.fail("multiply", name, k)
                if not i.equal(ring, i0):
                    res.fail("invert", name, k)
            hp, hi = reorder(ring, p0, hub), reorder(ring, i0, hub)
            if ref is None:
                ref = (hp, hi)
                continue
            if not hp.equal(ring, ref[0]):
                res.fail("multiply", name0, k)
            if not hi.equal(ring, ref[1]):
                res.fail("invert", name0, k)
    return res


def word_agreement(rs: RootSystem, ring: Ring, trials: int, seed: int = 0,
                   length: int | None = None) -> CheckResult:
    """Random words (with inverse letters) collected by CTL, CFL and CFO against the matrix oracle."""
    res = CheckResult(f"word collection {rs.name} over {ring.name}")
    rng = Random(seed)
    rep = representation_order(rs)
    length = length or max(2, rs.N)
    specs = [(presentation(rs, height_order(rs)), ("ctl", "cfl")),
             (presentation(rs, w0_ordering(rs)), ("cfo",))]
    oracle_ok = not (rs.cartan == "B" and ring.characteristic == 2)
    for k in range(trials):
        terms = []
        for _ in range(rng.randrange(0, length + 1)):
            a = ring.random_element(rng)
            if not ring.is_zero(a):
                terms.append((rng.randrange(rs.N), a, rng.choice((1, -1))))
        outs = []
        for pres, names in specs:
            for name in names:
                w = Word(ring)
                for r, a, e in terms:
                    w.append(pres.ordering.pos[r], a, e)
                outs.append((name, _rep_tuple(ring, collect(pres, w, name), rep)))
        res.cases += 1
        if oracle_ok:
            m = identity_matrix(ring, layout(rs).n)
            for r, a, e in terms:
                m = matrix_multiply(ring, m, root_matrix(rs, ring, r, a if e == 1 else ring.neg(a)))
            outs.append(("oracle", extract_coeffs(rs, ring, m)))
        for name, c in outs:
            if not _equal(ring, c, outs[0][1]):
                res.fail(name, k)
    return res


def oracle(rs: RootSystem, ring: Ring, trials: int, seed: int = 0,
           methods: Sequence[str] = ("direct", "matrix", "cfo", "cfl")) -> CheckResult:
    """Products and inverses against matrices built from the root maps; form preservation."""
    res = CheckResult(f"matrix oracle {rs.name} over {ring.name}")
    if rs.cartan == "B" and ring.characteristic == 2:
        res.name += " (skipped: the B representation needs odd characteristic)"
        return res
    rng = Random(seed)
    rep = representation_order(rs)
    impls = [get_method(rs, m).prepare(ring) for m in methods]
    for k in range(trials):
        x, y = random_element(rep, ring, rng), random_element(rep, ring, rng)
        mx, my = embed_by_root_maps(rs, ring, x.coeffs), embed_by_root_maps(rs, ring, y.coeffs)
        res.cases += 1
        if rs.cartan != "A" and not (preserves_form(rs, ring, mx) and preserves_form(rs, ring, my)):
            res.fail("form", k)
        if not all(_equal(ring, r1, r2) for r1, r2 in zip(embed_matrix(rs, ring, x.coeffs), mx)):
            res.fail("embed", k)
        want_p = extract_coeffs(rs, ring, matrix_multiply(ring, mx, my))
        want_i = extract_coeffs(rs, ring, unitriangular_inverse(ring, mx))
        for M in impls:
            ex, ey = M.element(ring, x), M.element(ring, y)
            if not _equal(ring, _rep_tuple(ring, M.multiply(ring, ex, ey), rep), want_p):
                res.fail("multiply", M.name, k)
            if not _equal(ring, _rep_tuple(ring, M.invert(ring, ex), rep), want_i):
                res.fail("invert", M.name, k)
    return res


def axioms(rs: RootSystem, ring: Ring, method: str, triples: int, seed: int = 0) -> CheckResult:
    """Associativity, u * u^-1 = 1 and (u^-1)^-1 = u for one method in its own ordering."""
    M = get_method(rs, method).prepare(ring)
    res = CheckResult(f"group axioms {rs.name} {method} over {ring.name}")
    rng = Random(seed)
    one = identity_element(M.ordering, ring)
    for k in range(triples):
        x, y, z = (random_element(M.ordering, ring, rng) for _ in range(3))
        res.cases += 1
        left = M.multiply(ring, M.multiply(ring, x, y), z)
        right = M.multiply(ring, x, M.multiply(ring, y, z))
        if not left.equal(ring, right):
            res.fail("associativity", k)
        xi = M.invert(ring, x)
        if not M.multiply(ring, x, xi).equal(ring, one):
            res.fail("inverse", k)
        if not M.invert(ring, xi).equal(ring, x):
            res.fail("double inverse", k)
    return res


def presentation_validation(rs: RootSystem, ring: Ring, trials: int, seed: int = 0,
                            mutate: bool = False) -> CheckResult:
    res = CheckResult(f"presentation {rs.name} over {ring.name}" + (" (mutated)" if mutate else ""))
    for ordering in (representation_order(rs), height_order(rs), w0_ordering(rs)):
        pres = presentation(rs, ordering)
        if mutate:
            pres = pres.with_flipped_constant()
        rep = validate_presentation(pres, ring, trials, seed)
        res.cases += rep.trials
        for f in rep.failures:
            res.fail(ordering.name, *f)
    return res
