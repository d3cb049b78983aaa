"""Bruhat normal form g = u t w u' and its word problem.

The torus part is stored as a tuple of rank-many units (adjoint-style
coordinates).  Multiplication in G itself is out of scope; the unipotent
parts are manipulated through :mod:`unipotent.collect`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .collect import CollectedElement, identity_element
from .presentation import Presentation
from .rings import Ring, RingError
from .rootsystem import (WeylElement, from_word, inversion_set, reduced_word,
                         weyl_identity, weyl_length)


class BruhatError(ValueError):
    pass


@dataclass(frozen=True)
class TorusElement:
    values: tuple
    inverses: tuple

    def __len__(self):
        return len(self.values)


def torus_element(ring: Ring, values: Sequence) -> TorusElement:
    invs = []
    for v in values:
        try:
            iv = ring.inv(v)
        except (RingError, ZeroDivisionError) as exc:
            raise BruhatError(f"torus entry {ring.format(v)} is not invertible") from exc
        if not ring.eq(ring.mul(v, iv), ring.one):
            raise BruhatError(f"torus entry {ring.format(v)} is not invertible")
        invs.append(iv)
    return TorusElement(tuple(values), tuple(invs))


def torus_identity(ring: Ring, n: int) -> TorusElement:
    return TorusElement((ring.one,) * n, (ring.one,) * n)


@dataclass(frozen=True)
class BruhatForm:
    pres: Presentation
    u: CollectedElement
    t: TorusElement
    w: WeylElement
    word: tuple
    u_prime: CollectedElement
    support: frozenset

    def format(self, ring: Ring) -> str:
        t = "(" + ", ".join(ring.format(v) for v in self.t.values) + ")"
        w = "w(" + ",".join(map(str, self.word)) + ")"
        return " | ".join([self.u.format(ring), t, w, self.u_prime.format(ring)])


def bruhat_create(pres: Presentation, ring: Ring, u: CollectedElement, t: TorusElement | Sequence,
                  w: WeylElement, u_prime: CollectedElement,
                  word: Sequence[int] | None = None) -> BruhatForm:
    """Validated Bruhat form; u' must vanish outside Phi_w and ``word`` must be reduced for w."""
    rs = pres.rs
    for x in (u, u_prime):
        if x.ordering != pres.ordering:
            raise BruhatError("unipotent part is not in the presentation's ordering")
    if not isinstance(t, TorusElement):
        t = torus_element(ring, t)
    if len(t) != rs.rank:
        raise BruhatError(f"torus part needs {rs.rank} entries, got {len(t)}")
    if word is None:
        word = reduced_word(rs, w)
    word = tuple(word)
    if any(not 1 <= k <= rs.rank for k in word):
        raise BruhatError("Weyl word uses an unknown simple reflection")
    if from_word(rs, word) != w:
        raise BruhatError("stored word does not represent w")
    if len(word) != weyl_length(rs, w):
        raise BruhatError("stored word is not reduced")
    phi_w = inversion_set(rs, w)
    pos = u_prime.ordering.pos
    for r in range(rs.N):
        if r not in phi_w and not ring.is_zero(u_prime.coeffs[pos[r]]):
            raise BruhatError(f"u' has a nonzero coefficient at {rs.format_root(r)} outside Phi_w")
    return BruhatForm(pres, u, t, w, word, u_prime, phi_w)


def bruhat_identity(pres: Presentation, ring: Ring) -> BruhatForm:
    e = identity_element(pres.ordering, ring)
    return bruhat_create(pres, ring, e, torus_identity(ring, pres.rs.rank),
                         weyl_identity(pres.rs), e)


def bruhat_equal(ring: Ring, x: BruhatForm, y: BruhatForm) -> bool:
    """Word problem: at most n + N + l(w) ring equality tests.

    The torus is compared first, then w (no ring operations), then u, then
    u' on Phi_w only.
    """
    if x.pres.rs is not y.pres.rs or x.pres.ordering != y.pres.ordering:
        raise BruhatError("forms belong to different groups or orderings")
    eq = ring.eq
    for a, b in zip(x.t.values, y.t.values):
        if not eq(a, b):
            return False
    if x.w != y.w:
        return False
    for a, b in zip(x.u.coeffs, y.u.coeffs):
        if not eq(a, b):
            return False
    pos = x.u_prime.ordering.pos
    for r in sorted(x.support):
        if not eq(x.u_prime.coeffs[pos[r]], y.u_prime.coeffs[pos[r]]):
            return False
    return True
