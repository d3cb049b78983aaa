"""Words in U, the collection strategies, and element operations.

A :class:`Word` is a doubly linked chain held in parallel arrays (a node
pool with a free list).  Node roots are *positions* in the presentation's
ordering, so "r < s" below always means "r comes before s".

Collectors:

* :func:`collect_to_left`    (CTL) -- left-additive orderings
* :func:`collect_from_left`  (CFL) -- left-additive orderings
* :func:`collect_from_outside` (CFO) -- additive orderings
* :func:`collect_generic`    -- any ordering; used by :func:`reorder`
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence

from .presentation import Presentation, presentation
from .rings import Ring
from .classical import left_multiply_root
from .rootsystem import (Ordering, WeylElement, inversion_set, representation_order,
                         separation_ordering)

NIL = -1
STEP_BUDGET = 10**9


class CollectionError(RuntimeError):
    pass


class BudgetExceeded(CollectionError):
    pass


class WordSyntaxError(ValueError):
    pass


# --- collected elements -----------------------------------------------------------

@dataclass(frozen=True)
class CollectedElement:
    """prod_p x_{order[p]}(coeffs[p]) in the given ordering."""

    ordering: Ordering
    coeffs: tuple

    def __len__(self):
        return len(self.coeffs)

    def coefficient(self, root: int):
        return self.coeffs[self.ordering.pos[root]]

    def by_root(self) -> tuple:
        """Coefficients listed in representation order."""
        pos = self.ordering.pos
        return tuple(self.coeffs[pos[r]] for r in range(len(self.coeffs)))

    def equal(self, ring: Ring, other: "CollectedElement") -> bool:
        return u_equal(ring, self, other)

    def format(self, ring: Ring) -> str:
        return "(" + ", ".join(ring.format(c) for c in self.coeffs) + ")"

    def csv_row(self, ring: Ring) -> str:
        return ",".join([self.ordering.name] + [ring.format(c) for c in self.coeffs])


def from_root_coeffs(ordering: Ordering, by_root: Sequence) -> CollectedElement:
    """Element whose coefficient of root r is ``by_root[r]``."""
    return CollectedElement(ordering, tuple(by_root[r] for r in ordering.order))


def identity_element(ordering: Ordering, ring: Ring) -> CollectedElement:
    return CollectedElement(ordering, (ring.zero,) * len(ordering))


def random_element(ordering: Ordering, ring: Ring, rng: Random) -> CollectedElement:
    return CollectedElement(ordering, tuple(ring.random_element(rng) for _ in ordering.order))


def u_equal(ring: Ring, x: CollectedElement, y: CollectedElement) -> bool:
    """Componentwise comparison; at most N equality tests."""
    if x.ordering != y.ordering:
        raise ValueError("elements are collected in different orderings")
    eq = ring.eq
    for a, b in zip(x.coeffs, y.coeffs):
        if not eq(a, b):
            return False
    return True


# --- words ----------------------------------------------------------------------

class Word:
    """Product of terms x_r(a)^eps stored as an index-linked chain."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.root: list[int] = []
        self.coeff: list = []
        self.eps: list[int] = []
        self.prev: list[int] = []
        self.next: list[int] = []
        self.free: list[int] = []
        self.head = NIL
        self.tail = NIL
        self.length = 0

    def _alloc(self, r, a, e) -> int:
        if self.free:
            h = self.free.pop()
            self.root[h], self.coeff[h], self.eps[h] = r, a, e
            self.prev[h] = self.next[h] = NIL
            return h
        self.root.append(r)
        self.coeff.append(a)
        self.eps.append(e)
        self.prev.append(NIL)
        self.next.append(NIL)
        return len(self.root) - 1

    def append(self, r: int, a, e: int = 1) -> int:
        h = self._alloc(r, a, e)
        self.prev[h] = self.tail
        if self.tail == NIL:
            self.head = h
        else:
            self.next[self.tail] = h
        self.tail = h
        self.length += 1
        return h

    def insert_after(self, h: int, r: int, a) -> int:
        """New node x_r(a) after node h."""
        n = self._alloc(r, a, 1)
        nxt = self.next[h]
        self.prev[n] = h
        self.next[n] = nxt
        self.next[h] = n
        if nxt == NIL:
            self.tail = n
        else:
            self.prev[nxt] = n
        self.length += 1
        return n

    def remove(self, h: int):
        p, n = self.prev[h], self.next[h]
        if p == NIL:
            self.head = n
        else:
            self.next[p] = n
        if n == NIL:
            self.tail = p
        else:
            self.prev[n] = p
        self.free.append(h)
        self.length -= 1

    def move_before(self, h: int, target: int):
        """Unlink h and relink it immediately before target."""
        p, n = self.prev[h], self.next[h]
        if p == NIL:
            self.head = n
        else:
            self.next[p] = n
        if n == NIL:
            self.tail = p
        else:
            self.prev[n] = p
        tp = self.prev[target]
        self.prev[h] = tp
        self.next[h] = target
        self.prev[target] = h
        if tp == NIL:
            self.head = h
        else:
            self.next[tp] = h

    def nodes(self) -> Iterable[int]:
        h = self.head
        while h != NIL:
            yield h
            h = self.next[h]

    def terms(self) -> list[tuple[int, object, int]]:
        return [(self.root[h], self.coeff[h], self.eps[h]) for h in self.nodes()]

    def node_at(self, position: int) -> int:
        """Handle of the node at 1-based ``position``."""
        if not 1 <= position <= self.length:
            raise IndexError(f"position {position} outside 1..{self.length}")
        h = self.head
        for _ in range(position - 1):
            h = self.next[h]
        return h

    def position_of(self, h: int) -> int:
        k = 1
        for n in self.nodes():
            if n == h:
                return k
            k += 1
        raise IndexError("node not in chain")

    def check(self):
        """Chain integrity: links are mutual, length matches, no zero terms."""
        count, prev = 0, NIL
        for h in self.nodes():
            if self.prev[h] != prev:
                raise CollectionError("broken predecessor link")
            if self.ring.is_zero(self.coeff[h]):
                raise CollectionError("zero term in word")
            prev = h
            count += 1
        if prev != self.tail or count != self.length:
            raise CollectionError("chain length or tail mismatch")


def word_from_terms(pres: Presentation, ring: Ring, terms: Iterable[tuple]) -> Word:
    """Build a word from ``(root, coeff, eps)`` triples; roots are root indices."""
    w = Word(ring)
    pos = pres.ordering.pos
    for term in terms:
        r, a = term[0], term[1]
        e = term[2] if len(term) > 2 else 1
        if ring.is_zero(a):
            raise ValueError("zero coefficient in word")
        if e not in (1, -1):
            raise ValueError("exponent must be +1 or -1")
        w.append(pos[r], a, e)
    return w


def word_from_element(pres: Presentation, ring: Ring, x: CollectedElement, word: Word | None = None,
                      inverse: bool = False) -> Word:
    """Append the terms of x (or of x^-1 as reversed inverse terms) to a word."""
    w = Word(ring) if word is None else word
    pos = pres.ordering.pos
    order = x.ordering.order
    items = list(zip(order, x.coeffs))
    if inverse:
        items.reverse()
    for r, a in items:
        if not ring.is_zero(a):
            w.append(pos[r], a, -1 if inverse else 1)
    return w


def word_terms(pres: Presentation, w: Word) -> list[tuple[int, object, int]]:
    """Terms with roots translated back to root indices."""
    order = pres.ordering.order
    return [(order[r], a, e) for r, a, e in w.terms()]


_TERM = re.compile(r"\s*x\[([^\]]+)\]\(([^)]*)\)(\^-1)?\s*")


def parse_word(text: str, rs, ring: Ring) -> list[tuple[int, object, int]]:
    """Parse ``x[root](coeff)[^-1] ...``; roots are 1-based representation indices
    or pair labels ``i,j``."""
    terms = []
    k = 0
    text = text.strip()
    while k < len(text):
        m = _TERM.match(text, k)
        if not m:
            raise WordSyntaxError(f"cannot parse term at position {k + 1}: {text[k:k + 20]!r}")
        try:
            r = rs.parse_root(m.group(1))
            a = ring.parse(m.group(2))
        except Exception as exc:
            raise WordSyntaxError(f"bad term at position {k + 1}: {exc}") from None
        if not ring.is_zero(a):
            terms.append((r, a, -1 if m.group(3) else 1))
        k = m.end()
    return terms


def format_word(terms, rs, ring: Ring) -> str:
    out = []
    for r, a, e in terms:
        out.append(f"x[{r + 1}]({ring.format(a)})" + ("^-1" if e == -1 else ""))
    return " ".join(out)


# --- relation application ------------------------------------------------------------

def _tail_value(ring: Ring, C: int, a, i: int, b, j: int, cache: dict):
    key = (i, j)
    v = cache.get(key)
    if v is None:
        pa = a if i == 1 else cache.setdefault(("a", i), _power(ring, a, i))
        pb = b if j == 1 else cache.setdefault(("b", j), _power(ring, b, j))
        v = cache[key] = ring.mul(pa, pb)
    if C == 1:
        return v
    if C == -1:
        return ring.neg(v)
    return ring.mul(ring.from_int(C), v)


def _power(ring, x, k):
    v = x
    for _ in range(k - 1):
        v = ring.mul(v, x)
    return v


def _swap(w: Word, pres: Presentation, h: int, additive: bool) -> tuple[int, int]:
    """Rewrite x_s(b) x_r(a) (s = prev of h, r = h, s > r).

    With ``additive`` the tail goes between x_r and x_s, otherwise after x_s.
    Returns (number of tail terms inserted, last inserted node or NIL).
    """
    ring = w.ring
    p = w.prev[h]
    r, s = w.root[h], w.root[p]
    a, b = w.coeff[h], w.coeff[p]
    tail = (pres.addrs if additive else pres.redrs)[r][s]
    w.move_before(h, p)
    if not tail:
        return 0, NIL
    anchor = h if additive else p
    cache: dict = {}
    count = 0
    last = NIL
    for t, C, i, j in tail:
        v = _tail_value(ring, C, a, i, b, j, cache)
        if ring.is_zero(v):
            continue
        anchor = last = w.insert_after(anchor, t, v)
        count += 1
    return count, last


def _merge_into_prev(w: Word, h: int) -> int:
    """x_r(a) x_r(b) -> x_r(a+b) kept in the earlier node.

    Returns the surviving node, or NIL when the sum vanished (both removed).
    """
    ring = w.ring
    p = w.prev[h]
    w.coeff[p] = ring.add(w.coeff[p], w.coeff[h])
    w.remove(h)
    if ring.is_zero(w.coeff[p]):
        w.remove(p)
        return NIL
    return p


def _invert_term(w: Word, h: int):
    w.coeff[h] = w.ring.neg(w.coeff[h])
    w.eps[h] = 1


def collect_subword(pres: Presentation, w: Word, j: int) -> tuple[Word, int, int]:
    """One collection step at 1-based position j; returns (w, j1, j2).

    Positions follow the collection-from-left bookkeeping: after a swap the
    moved term keeps moving (j2 = j1) while its predecessor is not smaller;
    otherwise j2 skips past the inserted tail.  A vanishing merge removes
    both terms.
    """
    h = w.node_at(j)
    _, j1, j2 = _cfl_step(pres, w, h, j)
    return w, j1, j2


def _cfl_step(pres, w, h, j):
    """Handle-level step used by CFL.  Returns (next handle, j1, j2)."""
    if w.eps[h] == -1:
        _invert_term(w, h)
        return h, j, j
    p = w.prev[h]
    if p == NIL or w.root[p] < w.root[h]:
        return w.next[h], j, j + 1
    if w.root[p] == w.root[h]:
        after = w.next[h]
        keep = _merge_into_prev(w, h)
        return (after if keep == NIL else keep), j - 1, j - 1
    count, last = _swap(w, pres, h, additive=False)
    pp = w.prev[h]
    if pp != NIL and w.root[pp] >= w.root[h]:
        return h, j - 1, j - 1
    return (last if count else p), j - 1, j + count


# --- strategies -------------------------------------------------------------------

def _result(pres: Presentation, w: Word) -> CollectedElement:
    ring = w.ring
    coeffs = [ring.zero] * pres.N
    last = -1
    for h in w.nodes():
        r = w.root[h]
        if r <= last or w.eps[h] != 1:
            raise CollectionError("word is not collected")
        coeffs[r] = w.coeff[h]
        last = r
    return CollectedElement(pres.ordering, tuple(coeffs))


def _require(pres: Presentation, left_additive=False, additive=False):
    if left_additive and not pres.ordering.left_additive:
        raise CollectionError(f"ordering {pres.ordering.name!r} is not left-additive")
    if additive and not pres.ordering.additive:
        raise CollectionError(f"ordering {pres.ordering.name!r} is not additive")


def collect_from_left(pres: Presentation, w: Word, budget: int = STEP_BUDGET) -> CollectedElement:
    """Scan left to right, moving each out-of-place term left (CFL)."""
    _require(pres, left_additive=True)
    root, prev, nxt, eps = w.root, w.prev, w.next, w.eps
    h = w.head
    steps = 0
    while h != NIL:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"collection exceeded {budget} steps")
        if eps[h] == -1:
            _invert_term(w, h)
            continue
        p = prev[h]
        if p == NIL or root[p] < root[h]:
            h = nxt[h]
            continue
        if root[p] == root[h]:
            after = nxt[h]
            keep = _merge_into_prev(w, h)
            h = keep if keep != NIL else after
            continue
        count, last = _swap(w, pres, h, additive=False)
        pp = prev[h]
        if pp != NIL and root[pp] >= root[h]:
            continue
        # h settled: x_r, x_s and the ascending tail are in order
        h = last if count else p
    return _result(pres, w)


def collect_to_left(pres: Presentation, w: Word, budget: int = STEP_BUDGET) -> CollectedElement:
    """For r = 1..N move the rightmost uncollected x_r left onto the collected prefix (CTL)."""
    _require(pres, left_additive=True)
    root, prev, eps, coeff = w.root, w.prev, w.eps, w.coeff
    redrs = pres.redrs
    for h in list(w.nodes()):
        if eps[h] == -1:
            _invert_term(w, h)
    prefix_end = NIL
    steps = 0
    for r in range(pres.N):
        while True:
            h = w.tail
            while h != prefix_end and root[h] != r:
                h = prev[h]
            if h == prefix_end:
                break
            while True:
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(f"collection exceeded {budget} steps")
                p = prev[h]
                if p == prefix_end:
                    break
                if root[p] == r:
                    h = _merge_into_prev(w, h)
                    if h == NIL:
                        break
                elif redrs[r][root[p]] is None:
                    # commuting neighbours: exchange node contents instead of relinking
                    root[h], root[p] = root[p], r
                    coeff[h], coeff[p] = coeff[p], coeff[h]
                    h = p
                else:
                    _swap(w, pres, h, additive=False)
            if h != NIL:
                prefix_end = h
                break
    return _result(pres, w)


def _l_step(pres, w, i, ipos, additive=True):
    """CollectSubwordL: returns (next cursor, its position, length change)."""
    root, prev = w.root, w.prev
    if w.eps[i] == -1:
        _invert_term(w, i)
        return i, ipos, 0
    p = prev[i]
    if p == NIL or root[p] < root[i]:
        return w.next[i], ipos + 1, 0
    if root[p] == root[i]:
        after = w.next[i]
        keep = _merge_into_prev(w, i)
        if keep == NIL:
            return after, ipos - 1, -2
        return keep, ipos - 1, -1
    count, _ = _swap(w, pres, i, additive=additive)
    return i, ipos - 1, count


def _r_step(pres, w, j, jpos):
    """CollectSubwordR: returns (next cursor, its position, length change)."""
    root, nxt = w.root, w.next
    if w.eps[j] == -1:
        _invert_term(w, j)
        return j, jpos, 0
    n = nxt[j]
    if n == NIL or root[j] < root[n]:
        return w.prev[j], jpos - 1, 0
    if root[j] == root[n]:
        before = w.prev[j]
        keep = _merge_into_prev(w, n)
        if keep == NIL:
            return before, jpos - 1, -2
        return keep, jpos, -1
    count, _ = _swap(w, pres, n, additive=True)
    return j, jpos + 1 + count, count


def collect_from_outside(pres: Presentation, w: Word, budget: int = STEP_BUDGET) -> CollectedElement:
    """Alternate left and right cursors until they meet (CFO).

    Once the cursors meet, the left cursor keeps going to the end of the word:
    the prefix it leaves behind is always collected, so this finishes the
    merge of the two collected halves.
    """
    _require(pres, additive=True)
    i, ipos = w.head, 1
    j, jpos = w.tail, w.length
    steps = 0
    while ipos < jpos:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"collection exceeded {budget} steps")
        i, ipos, L = _l_step(pres, w, i, ipos)
        jpos += L
        if ipos < jpos:
            j, jpos, L = _r_step(pres, w, j, jpos)
    while i != NIL:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"collection exceeded {budget} steps")
        i, ipos, _ = _l_step(pres, w, i, ipos)
    return _result(pres, w)


def collect_generic(pres: Presentation, w: Word, budget: int = STEP_BUDGET) -> CollectedElement:
    """Left-to-right collection that re-scans every inserted tail; any ordering."""
    i, ipos = w.head, 1
    steps = 0
    while i != NIL:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"collection exceeded {budget} steps")
        i, ipos, _ = _l_step(pres, w, i, ipos, additive=False)
    return _result(pres, w)


COLLECTORS = {
    "ctl": collect_to_left,
    "cfl": collect_from_left,
    "cfo": collect_from_outside,
    "generic": collect_generic,
}


def collect(pres: Presentation, w: Word, method: str = "generic") -> CollectedElement:
    try:
        fn = COLLECTORS[method]
    except KeyError:
        raise ValueError(f"unknown collection method {method!r}") from None
    return fn(pres, w)


# --- element operations ---------------------------------------------------------

def _check_ordering(pres, *xs):
    for x in xs:
        if x.ordering != pres.ordering:
            raise ValueError("element ordering does not match the presentation")


def u_multiply(pres: Presentation, ring: Ring, x: CollectedElement, y: CollectedElement,
               method: str = "cfl") -> CollectedElement:
    _check_ordering(pres, x, y)
    w = word_from_element(pres, ring, x)
    word_from_element(pres, ring, y, w)
    return collect(pres, w, method)


def u_invert(pres: Presentation, ring: Ring, x: CollectedElement, method: str = "cfl") -> CollectedElement:
    _check_ordering(pres, x)
    return collect(pres, word_from_element(pres, ring, x, inverse=True), method)


def best_method(ordering: Ordering) -> str:
    if ordering.additive:
        return "cfo"
    if ordering.left_additive:
        return "cfl"
    return "generic"


def reorder(ring: Ring, x: CollectedElement, target: Ordering) -> CollectedElement:
    """The same group element collected in ``target``."""
    if x.ordering == target:
        return x
    pres = presentation(target.rs, target)
    w = Word(ring)
    pos = target.pos
    for r, a in zip(x.ordering.order, x.coeffs):
        if not ring.is_zero(a):
            w.append(pos[r], a)
    return collect(pres, w, best_method(target))


# --- separation -------------------------------------------------------------------

def _rep_coeffs(ring: Ring, x: CollectedElement) -> tuple:
    rep = representation_order(x.ordering.rs)
    return reorder(ring, x, rep).coeffs


def single_term_separate(pres: Presentation, ring: Ring, u: CollectedElement, alpha: int,
                         w: WeylElement | None = None, method: str = "direct"):
    """Split u = x_alpha(a) * v with v free of alpha.

    ``alpha`` is a root (representation index).  Tails of x_alpha never land
    on alpha itself, so a is the alpha-coefficient of u in any ordering and
    v = x_alpha(-a) * u.  With ``method="direct"`` v is computed by the
    row update of the matrix representation (O(l) ring operations) and
    returned in u's ordering when that is the representation ordering;
    otherwise ``method`` names a collector run in u's ordering.
    When ``w`` is given, u must be supported on Phi_w and alpha in Phi_w.
    """
    _check_ordering(pres, u)
    rs = pres.rs
    if w is not None:
        phi_w = inversion_set(rs, w)
        if alpha not in phi_w:
            raise ValueError(f"{rs.format_root(alpha)} is not in the inversion set of w")
        pos = u.ordering.pos
        if any(not ring.is_zero(u.coeffs[pos[r]]) for r in range(rs.N) if r not in phi_w):
            raise ValueError("u is not supported on the inversion set of w")
    a = u.coefficient(alpha)
    if method == "direct":
        rep = representation_order(rs)
        coeffs = u.coeffs if u.ordering == rep else _rep_coeffs(ring, u)
        v = left_multiply_root(rs, ring, alpha, ring.neg(a), coeffs)
        v = CollectedElement(representation_order(rs), v)
        if v.ordering != u.ordering:
            v = reorder(ring, v, u.ordering)
        return a, v
    w_ = Word(ring)
    if not ring.is_zero(a):
        w_.append(u.ordering.pos[alpha], ring.neg(a))
    word_from_element(pres, ring, u, w_)
    return a, collect(pres, w_, method)


def peel_ordering(rs, w: WeylElement) -> Ordering:
    """Phi+ minus Phi_w by height, then Phi_w in representation order."""
    phi_w = inversion_set(rs, w)
    head = sorted((r for r in range(rs.N) if r not in phi_w), key=lambda r: (rs.heights[r], r))
    return Ordering(rs, tuple(head) + tuple(sorted(phi_w)), "peel")


def weyl_separate(pres: Presentation, ring: Ring, u: CollectedElement, w: WeylElement,
                  method: str = "direct"):
    """Split u = v2 * v1 with v2 over Phi+ minus Phi_w and v1 over Phi_w.

    Both parts are returned as elements of one ordering whose final block is
    Phi_w, so concatenating their words gives u.  ``method="direct"`` peels
    the roots outside Phi_w in increasing height by single-term separation
    (ordering :func:`peel_ordering`); ``method="collect"`` recollects u in
    :func:`separation_ordering` and splits the coefficient list.
    """
    _check_ordering(pres, u)
    rs = pres.rs
    phi_w = inversion_set(rs, w)
    if method == "collect":
        target = separation_ordering(rs, w)
        c = reorder(ring, u, target).coeffs
        k = rs.N - len(phi_w)
        zero = (ring.zero,)
        return (CollectedElement(target, c[:k] + zero * len(phi_w)),
                CollectedElement(target, zero * k + c[k:]))
    if method != "direct":
        raise ValueError(f"unknown separation method {method!r}")
    target = peel_ordering(rs, w)
    rep = representation_order(rs)
    v = u.coeffs if u.ordering == rep else _rep_coeffs(ring, u)
    k = rs.N - len(phi_w)
    head = []
    for alpha in target.order[:k]:
        a = v[alpha]
        head.append(a)
        v = left_multiply_root(rs, ring, alpha, ring.neg(a), v)
    tail = tuple(v[r] for r in target.order[k:])
    zero = (ring.zero,)
    return (CollectedElement(target, tuple(head) + zero * len(phi_w)),
            CollectedElement(target, zero * k + tail))
