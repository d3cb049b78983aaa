"""Classical root systems with pair labels, orderings and the Weyl group.

Roots are indexed ``0..N-1`` in representation order.  Pair labels follow
the matrix-representation conventions: ``(i, j)`` is ``e_i - e_j``,
``(i, -j)`` is ``e_i + e_j`` (``2e_i`` when ``j == i``, type C) and ``(i, 0)``
is ``e_i`` (type B).  Type A uses coordinates ``e_1..e_{l+1}``.

The Weyl group acts on the right: ``alpha (w1 w2) = (alpha w1) w2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

TYPES = ("A", "B", "C", "D")


class RootSystemError(ValueError):
    pass


def _j_sequence(cartan: str, rank: int) -> list[int]:
    """Second-index order used by the representation ordering."""
    if cartan == "A":
        return list(range(1, rank + 2))
    neg = list(range(-rank, 0))
    if cartan == "B":
        return list(range(1, rank + 1)) + [0] + neg
    return list(range(1, rank + 1)) + neg


def _label_vector(cartan: str, dim: int, label: tuple[int, int]) -> tuple[int, ...]:
    i, j = label
    v = [0] * dim
    v[i - 1] += 1
    if j > 0:
        v[j - 1] -= 1
    elif j < 0:
        v[-j - 1] += 1
    return tuple(v)


@dataclass(eq=False)
class RootSystem:
    cartan: str
    rank: int
    labels: tuple[tuple[int, int], ...]
    vectors: tuple[tuple[int, ...], ...]
    simple: tuple[int, ...]              # root index of alpha_1..alpha_l
    coeffs: tuple[tuple[int, ...], ...]  # expansion in simple roots
    dim: int

    def __post_init__(self):
        self.N = len(self.labels)
        self.label_index = {lab: k for k, lab in enumerate(self.labels)}
        self.vector_index = {v: k for k, v in enumerate(self.vectors)}
        self.heights = tuple(sum(c) for c in self.coeffs)
        table = {}
        for r, vr in enumerate(self.vectors):
            for s, vs in enumerate(self.vectors):
                t = self.vector_index.get(tuple(a + b for a, b in zip(vr, vs)))
                if t is not None:
                    table[r, s] = t
        self.sum_table = table
        # (r, s, t) with r < s and alpha_r + alpha_s = alpha_t
        self.sum_triples = tuple((r, s, t) for (r, s), t in table.items() if r < s)

    @property
    def name(self) -> str:
        return f"{self.cartan}{self.rank}"

    def format_root(self, r: int) -> str:
        i, j = self.labels[r]
        return f"a[{i},{j}]"

    def parse_root(self, text: str) -> int:
        """Accept a 1-based index in representation order or a pair label."""
        text = text.strip()
        if text.startswith("a[") and text.endswith("]"):
            text = text[2:-1]
        try:
            if "," in text:
                i, j = (int(x) for x in text.split(","))
                return self.label_index[(i, j)]
            k = int(text)
        except (ValueError, KeyError):
            raise RootSystemError(f"unknown root {text!r} in {self.name}") from None
        if not 1 <= k <= self.N:
            raise RootSystemError(f"root index {k} out of range 1..{self.N}")
        return k - 1

    def __repr__(self):
        return f"RootSystem({self.name}, N={self.N})"


def positive_root_count(cartan: str, rank: int) -> int:
    return {"A": rank * (rank + 1) // 2, "B": rank * rank, "C": rank * rank,
            "D": rank * (rank - 1)}[cartan]


@lru_cache(maxsize=None)
def build_root_system(cartan: str, rank: int) -> RootSystem:
    cartan = cartan.upper()
    if cartan not in TYPES:
        raise RootSystemError(f"unsupported Cartan type {cartan!r}")
    min_rank = 2 if cartan == "D" else 1
    if not isinstance(rank, int) or rank < min_rank:
        raise RootSystemError(f"rank {rank!r} too small for type {cartan}")
    dim = rank + 1 if cartan == "A" else rank
    js = _j_sequence(cartan, rank)
    labels = []
    for i in range(1, dim + 1):
        for j in js:
            if cartan == "A" and j <= i:
                continue
            if cartan != "A" and 0 < j <= i:
                continue
            if j < 0 and -j < i:
                continue
            if j == -i and cartan != "C":
                continue
            labels.append((i, j))
    vectors = [_label_vector(cartan, dim, lab) for lab in labels]
    index = {v: k for k, v in enumerate(vectors)}

    simple_labels = [(k, k + 1) for k in range(1, rank)]
    if cartan == "A":
        simple_labels.append((rank, rank + 1))
    elif cartan == "B":
        simple_labels.append((rank, 0))
    elif cartan == "C":
        simple_labels.append((rank, -rank))
    else:
        simple_labels.append((rank - 1, -rank))
    simple = [labels.index(lab) for lab in simple_labels]

    # simple-root expansions by breadth-first search from the simple roots
    coeffs: dict[int, tuple[int, ...]] = {}
    frontier = []
    for k, r in enumerate(simple):
        c = [0] * rank
        c[k] = 1
        coeffs[r] = tuple(c)
        frontier.append(r)
    while frontier:
        nxt = []
        for r in frontier:
            for k, s in enumerate(simple):
                t = index.get(tuple(a + b for a, b in zip(vectors[r], vectors[s])))
                if t is not None and t not in coeffs:
                    c = list(coeffs[r])
                    c[k] += 1
                    coeffs[t] = tuple(c)
                    nxt.append(t)
        frontier = nxt
    assert len(coeffs) == len(labels)
    return RootSystem(cartan, rank, tuple(labels), tuple(vectors), tuple(simple),
                      tuple(coeffs[k] for k in range(len(labels))), dim)


def root_sum(rs: RootSystem, r: int, s: int) -> int | None:
    return rs.sum_table.get((r, s))


def root_height(rs: RootSystem, r: int) -> int:
    return rs.heights[r]


# --- orderings ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Ordering:
    """A total order on the positive roots: ``order[p]`` is the root at position p."""

    rs: RootSystem
    order: tuple[int, ...]
    name: str = "custom"

    def __post_init__(self):
        if sorted(self.order) != list(range(self.rs.N)):
            raise RootSystemError("ordering is not a permutation of the positive roots")
        pos = [0] * self.rs.N
        for p, r in enumerate(self.order):
            pos[r] = p
        object.__setattr__(self, "pos", tuple(pos))

    def __eq__(self, other):
        return (isinstance(other, Ordering) and other.rs is self.rs
                and other.order == self.order)

    def __hash__(self):
        return hash((self.rs.name, self.order))

    def __len__(self):
        return len(self.order)

    @cached_property
    def left_additive(self) -> bool:
        return check_left_additive(self.rs, self)

    @cached_property
    def additive(self) -> bool:
        return check_additive(self.rs, self)

    def format(self) -> str:
        return ",".join(self.rs.format_root(r) for r in self.order)


def check_left_additive(rs: RootSystem, ordering: Ordering) -> bool:
    pos = ordering.pos
    return all(pos[t] > pos[r] and pos[t] > pos[s] for r, s, t in rs.sum_triples)


def check_additive(rs: RootSystem, ordering: Ordering) -> bool:
    pos = ordering.pos
    return all(min(pos[r], pos[s]) < pos[t] < max(pos[r], pos[s])
               for r, s, t in rs.sum_triples)


def check_additive_on(rs: RootSystem, roots: Sequence[int]) -> bool:
    """Additivity of a sequence of roots covering a subset of the positive roots."""
    pos = {r: p for p, r in enumerate(roots)}
    for r, s, t in rs.sum_triples:
        if r in pos and s in pos:
            if t not in pos:
                return False
            if not min(pos[r], pos[s]) < pos[t] < max(pos[r], pos[s]):
                return False
    return True


def representation_order(rs: RootSystem) -> Ordering:
    return Ordering(rs, tuple(range(rs.N)), "rep")


def height_order(rs: RootSystem) -> Ordering:
    """Order compatible with height; ties broken by representation order."""
    return Ordering(rs, tuple(sorted(range(rs.N), key=lambda r: (rs.heights[r], r))), "height")


# --- Weyl group -------------------------------------------------------------------

@dataclass(frozen=True)
class WeylElement:
    """Signed permutation: ``e_i w = sign(perm[i-1]) e_{|perm[i-1]|}``."""

    perm: tuple[int, ...]


def weyl_identity(rs: RootSystem) -> WeylElement:
    return WeylElement(tuple(range(1, rs.dim + 1)))


def act_vector(w: WeylElement, v: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(v)
    for i, x in enumerate(v):
        if x:
            k = w.perm[i]
            if k > 0:
                out[k - 1] += x
            else:
                out[-k - 1] -= x
    return tuple(out)


def _signed_root(rs: RootSystem, v: tuple[int, ...]) -> tuple[int, int]:
    r = rs.vector_index.get(v)
    if r is not None:
        return 1, r
    r = rs.vector_index.get(tuple(-x for x in v))
    if r is None:
        raise RootSystemError(f"{v} is not a root")
    return -1, r


def reflection(rs: RootSystem, beta: int) -> WeylElement:
    b = rs.vectors[beta]
    bb = sum(x * x for x in b)
    perm = []
    for k in range(rs.dim):
        img = [Fraction(0)] * rs.dim
        img[k] = Fraction(1)
        f = Fraction(2 * b[k], bb)
        img = [x - f * y for x, y in zip(img, b)]
        (m, x), = [(m, x) for m, x in enumerate(img) if x]
        perm.append((m + 1) * int(x))
    return WeylElement(tuple(perm))


def simple_reflection(rs: RootSystem, k: int) -> WeylElement:
    """Reflection in the simple root alpha_k (``k`` is 1-based)."""
    return reflection(rs, rs.simple[k - 1])


def reflect_root(rs: RootSystem, r: int, beta: int) -> tuple[int, int]:
    """``alpha_r s_beta`` as ``(sign, positive root index)``."""
    return _signed_root(rs, act_vector(reflection(rs, beta), rs.vectors[r]))


def weyl_act(rs: RootSystem, w: WeylElement, r: int) -> tuple[int, int]:
    return _signed_root(rs, act_vector(w, rs.vectors[r]))


def weyl_multiply(w1: WeylElement, w2: WeylElement) -> WeylElement:
    """The product w1 w2 (apply w1 first)."""
    out = []
    for k in w1.perm:
        m = w2.perm[abs(k) - 1]
        out.append(m if k > 0 else -m)
    return WeylElement(tuple(out))


def weyl_inverse(w: WeylElement) -> WeylElement:
    out = [0] * len(w.perm)
    for i, k in enumerate(w.perm):
        out[abs(k) - 1] = (i + 1) if k > 0 else -(i + 1)
    return WeylElement(tuple(out))


def from_word(rs: RootSystem, word: Sequence[int]) -> WeylElement:
    w = weyl_identity(rs)
    for k in word:
        w = weyl_multiply(w, simple_reflection(rs, k))
    return w


def _is_positive(rs: RootSystem, v) -> bool:
    return v in rs.vector_index


def inversion_set(rs: RootSystem, w: WeylElement) -> frozenset[int]:
    winv = weyl_inverse(w)
    return frozenset(r for r, v in enumerate(rs.vectors)
                     if not _is_positive(rs, act_vector(winv, v)))


def weyl_length(rs: RootSystem, w: WeylElement) -> int:
    return len(inversion_set(rs, w))


def reduced_word(rs: RootSystem, w: WeylElement) -> list[int]:
    """Greedy reduced word: repeatedly strip the smallest left descent."""
    word = []
    simple_vecs = [rs.vectors[r] for r in rs.simple]
    reflections = [simple_reflection(rs, k) for k in range(1, rs.rank + 1)]
    while True:
        for k, v in enumerate(simple_vecs):
            if not _is_positive(rs, act_vector(w, v)):
                word.append(k + 1)
                w = weyl_multiply(reflections[k], w)
                break
        else:
            return word


def longest_element(rs: RootSystem) -> WeylElement:
    n = rs.dim
    if rs.cartan == "A":
        return WeylElement(tuple(n - i for i in range(n)))
    perm = [-(i + 1) for i in range(n)]
    if rs.cartan == "D" and n % 2 == 1:
        perm[-1] = n
    return WeylElement(tuple(perm))


def lex_least_w0_word(rs: RootSystem) -> list[int]:
    return reduced_word(rs, longest_element(rs))


def papi_sequence(rs: RootSystem, word: Sequence[int]) -> list[int]:
    """Roots ``beta_k s_{beta_{k+1}} ... s_{beta_m}`` for k = 1..m."""
    reflections = [simple_reflection(rs, k) for k in range(1, rs.rank + 1)]
    u = weyl_identity(rs)
    out = []
    for k in reversed(word):
        sign, r = weyl_act(rs, u, rs.simple[k - 1])
        if sign < 0:
            raise RootSystemError(f"word {list(word)} is not reduced")
        out.append(r)
        u = weyl_multiply(reflections[k - 1], u)
    out.reverse()
    if len(set(out)) != len(out):
        raise RootSystemError(f"word {list(word)} is not reduced")
    return out


def papi_ordering(rs: RootSystem, word: Sequence[int]) -> list[int]:
    """Additive ordering of the inversion set of the element with reduced ``word``."""
    return papi_sequence(rs, word)


def w0_ordering(rs: RootSystem) -> Ordering:
    return Ordering(rs, tuple(papi_sequence(rs, lex_least_w0_word(rs))), "papi")


def separation_ordering(rs: RootSystem, w: WeylElement) -> Ordering:
    """Additive ordering of all positive roots ending with the block Phi_w.

    Built from the reduced word of ``w0 w^-1`` followed by that of ``w``,
    which is a reduced word for ``w0``.
    """
    w0 = longest_element(rs)
    head = reduced_word(rs, weyl_multiply(w0, weyl_inverse(w)))
    tail = reduced_word(rs, w)
    return Ordering(rs, tuple(papi_sequence(rs, head + tail)), "separation")


def random_reduced_word(rs: RootSystem, w: WeylElement, rng) -> list[int]:
    """A reduced word for w, stripping a uniformly chosen left descent at each step."""
    word = []
    simple_vecs = [rs.vectors[r] for r in rs.simple]
    reflections = [simple_reflection(rs, k) for k in range(1, rs.rank + 1)]
    while True:
        descents = [k for k, v in enumerate(simple_vecs) if not _is_positive(rs, act_vector(w, v))]
        if not descents:
            return word
        k = rng.choice(descents)
        word.append(k + 1)
        w = weyl_multiply(reflections[k], w)
