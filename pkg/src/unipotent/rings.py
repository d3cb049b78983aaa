"""Coefficient rings.

Ring elements are plain Python values (``int`` residues, ``gmpy2.mpq``,
``SparsePoly``); a ring object carries the operations.  Algorithms never use
``+``/``*`` on coefficients directly, they go through the ring, which is what
lets :class:`CountingRing` count every operation an algorithm performs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Iterable, Sequence

from gmpy2 import mpq


class RingError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Ring:
    """Base class.  Subclasses provide zero/one and the arithmetic."""

    name = "ring"
    characteristic = 0

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def eq(self, x, y) -> bool:
        return x == y

    def is_zero(self, x) -> bool:
        return self.eq(x, self.zero)

    def inv(self, x):
        raise RingError(f"{self.name}: no inverse for {x!r}")

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def random_element(self, rng: Random):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class PrimeField(Ring):
    """The field Z/pZ with canonical residues in [0, p)."""

    def __init__(self, p: int):
        if not (isinstance(p, int) and p < 2**31 and is_prime(p)):
            raise RingError(f"modulus must be a prime below 2^31, got {p!r}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1
        self.name = f"GF({p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def reduce(self, x: int) -> int:
        return x % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return (-x) % self.p

    def mul(self, x, y):
        return (x * y) % self.p

    def eq(self, x, y):
        return x == y

    def is_zero(self, x):
        return x == 0

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return pow(x, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def parse(self, text):
        return int(text.strip()) % self.p

    def random_element(self, rng):
        return rng.randrange(self.p)


def fp_reduce(p: int, x: int) -> int:
    return PrimeField(p).reduce(x)


def rat_normalize(n: int, d: int):
    if d == 0:
        raise ZeroDivisionError("zero denominator")
    return mpq(n, d)


class RationalField(Ring):
    """Q with ``gmpy2.mpq`` elements.

    ``bits`` only controls :meth:`random_element`: a random numerator and a
    random denominator of up to ``bits`` bits, and a random sign.
    """

    name = "QQ"
    characteristic = 0

    def __init__(self, bits: int = 32):
        self.bits = bits
        self.zero = mpq(0)
        self.one = mpq(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def is_zero(self, x):
        return x == 0

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in QQ")
        return 1 / x

    def from_int(self, n):
        return mpq(n)

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            n, d = text.split("/")
            return rat_normalize(int(n), int(d))
        return mpq(int(text))

    def format(self, x):
        return str(x)

    def random_element(self, rng):
        num = rng.getrandbits(self.bits)
        den = rng.getrandbits(self.bits) or 1
        if rng.random() < 0.5:
            num = -num
        return mpq(num, den)


# --- sparse multivariate polynomials ----------------------------------------

def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class SparsePoly:
    """Polynomial over Q as ``{exponent tuple: coefficient}``.

    Coefficients are ``int`` or ``Fraction``; zero coefficients are never
    stored.  Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {} if terms is None else terms
        self._hash = None

    @classmethod
    def constant(cls, nvars, c):
        c = _norm(c)
        return cls(nvars, {(0,) * nvars: c} if c != 0 else {})

    @classmethod
    def variable(cls, nvars, k):
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == SparsePoly.constant(self.nvars, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if len(self.terms) < len(other.terms):
            self, other = other, self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return SparsePoly(self.nvars, out)

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return SparsePoly(self.nvars)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return SparsePoly(self.nvars, out)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self):
        """Terms in graded-lexicographic order, largest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def evaluate(self, ring: Ring, values: Sequence):
        """Evaluate at ``values`` (ring elements) using ``ring`` operations."""
        total = ring.zero
        for e, c in self.terms.items():
            c = _norm(c)
            if isinstance(c, Fraction):
                term = ring.mul(ring.from_int(c.numerator), ring.inv(ring.from_int(c.denominator)))
            else:
                term = ring.from_int(c)
            for v, k in zip(values, e):
                for _ in range(k):
                    term = ring.mul(term, v)
            total = ring.add(total, term)
        return total

    def __repr__(self):
        return f"SparsePoly({format_poly(self, None)})"


def format_poly(f: SparsePoly, names: Sequence[str] | None) -> str:
    if names is None:
        names = [f"x{k + 1}" for k in range(f.nvars)]
    if not f.terms:
        return "0"
    parts = []
    for e, c in f.sorted_terms():
        c = _norm(c)
        factors = [f"{n}^{k}" if k > 1 else n for n, k in zip(names, e) if k]
        if not factors:
            mono = str(abs(c))
        elif abs(c) == 1:
            mono = "*".join(factors)
        else:
            mono = "*".join([str(abs(c))] + factors)
        parts.append(("-" if c < 0 else "+", mono))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, mono in parts[1:]:
        text += f" {sign} {mono}"
    return text


_MONO_SPLIT = re.compile(r"\s*([+-])\s*")


class PolynomialRing(Ring):
    """Q[x_1, ..., x_n] with :class:`SparsePoly` elements."""

    characteristic = 0

    def __init__(self, names: Sequence[str] | int):
        if isinstance(names, int):
            names = [f"a{k + 1}" for k in range(names)]
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.zero = SparsePoly(self.nvars)
        self.one = SparsePoly.constant(self.nvars, 1)
        self.name = "QQ[" + ",".join(self.names) + "]"
        self._index = {n: k for k, n in enumerate(self.names)}

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def gen(self, k: int | str) -> SparsePoly:
        if isinstance(k, str):
            k = self._index[k]
        return SparsePoly.variable(self.nvars, k)

    def gens(self):
        return [self.gen(k) for k in range(self.nvars)]

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def eq(self, x, y):
        return x.terms == y.terms

    def is_zero(self, x):
        return not x.terms

    def inv(self, x):
        if len(x.terms) == 1:
            (e, c), = x.terms.items()
            if not any(e):
                return SparsePoly.constant(self.nvars, 1 / Fraction(c))
        raise RingError(f"{format_poly(x, self.names)} is not a unit")

    def from_int(self, n):
        return SparsePoly.constant(self.nvars, n)

    def constant(self, c):
        return SparsePoly.constant(self.nvars, c)

    def format(self, x):
        return format_poly(x, self.names)

    def parse(self, text):
        text = text.strip()
        if not text:
            raise RingError("empty polynomial")
        if text[0] not in "+-":
            text = "+" + text
        pieces = _MONO_SPLIT.split(text)[1:]
        total = self.zero
        for sign, mono in zip(pieces[0::2], pieces[1::2]):
            term = self.one
            for factor in mono.split("*"):
                factor = factor.strip()
                if not factor:
                    raise RingError(f"bad monomial {mono!r}")
                if factor[0].isdigit():
                    n, _, d = factor.partition("/")
                    term = term * self.constant(Fraction(int(n), int(d) if d else 1))
                    continue
                name, _, exp = factor.partition("^")
                if name not in self._index:
                    raise RingError(f"unknown variable {name!r}")
                g = self.gen(name)
                for _ in range(int(exp) if exp else 1):
                    term = term * g
            total = total - term if sign == "-" else total + term
        return total

    def random_element(self, rng, terms: int = 3, max_deg: int = 2):
        total = self.zero
        for _ in range(terms):
            e = [0] * self.nvars
            for _ in range(rng.randint(0, max_deg)):
                e[rng.randrange(self.nvars)] += 1
            total = total + SparsePoly(self.nvars, {tuple(e): rng.randint(-5, 5) or 1})
        return total


# --- instrumentation ----------------------------------------------------------

OP_KINDS = ("add", "neg", "mul", "eq", "inv")


class UnivariatePolyModP(Ring):
    """Dense polynomials in one variable t over GF(p); elements are tuples, low degree first.

    Used to read off total degrees: f(t*x) has t-degree deg f for generic x.
    """

    def __init__(self, p: int = (1 << 61) - 1):
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})[t]"
        self.zero = ()
        self.one = (1,)
        self.t = (0, 1)

    @staticmethod
    def _trim(c):
        n = len(c)
        while n and not c[n - 1]:
            n -= 1
        return tuple(c[:n])

    def add(self, x, y):
        if len(x) < len(y):
            x, y = y, x
        p = self.p
        out = list(x)
        for k, v in enumerate(y):
            out[k] = (out[k] + v) % p
        return self._trim(out)

    def neg(self, x):
        p = self.p
        return tuple((-v) % p for v in x)

    def mul(self, x, y):
        if not x or not y:
            return ()
        p = self.p
        out = [0] * (len(x) + len(y) - 1)
        for i, u in enumerate(x):
            if u:
                for j, v in enumerate(y):
                    out[i + j] += u * v
        return self._trim([v % p for v in out])

    def from_int(self, n):
        return self._trim([n % self.p])

    def constant_times_t(self, c: int):
        return self._trim([0, c % self.p])

    def degree(self, x) -> int:
        return len(x) - 1

    def random_element(self, rng):
        return self._trim([rng.randrange(self.p) for _ in range(3)])


@dataclass
class OpCounter:
    """Counts of ring operations performed through a :class:`CountingRing`."""

    add: int = 0
    neg: int = 0
    mul: int = 0
    eq: int = 0
    inv: int = 0

    def reset(self):
        for k in OP_KINDS:
            setattr(self, k, 0)

    def snapshot(self) -> "OpCounter":
        return OpCounter(**{k: getattr(self, k) for k in OP_KINDS})

    def total(self) -> int:
        return sum(getattr(self, k) for k in OP_KINDS)

    def __sub__(self, other: "OpCounter") -> "OpCounter":
        return OpCounter(**{k: getattr(self, k) - getattr(other, k) for k in OP_KINDS})


class CountingRing(Ring):
    """Wrap ``base`` so that every operation is tallied in ``counter``.

    Subtraction is counted as one addition.
    """

    def __init__(self, base: Ring, counter: OpCounter | None = None):
        self.base = base
        self.counter = counter if counter is not None else OpCounter()
        self.zero = base.zero
        self.one = base.one
        self.characteristic = base.characteristic
        self.name = base.name

    def __eq__(self, other):
        return isinstance(other, CountingRing) and other.base == self.base

    def __hash__(self):
        return hash(("counting", self.base))

    def add(self, x, y):
        self.counter.add += 1
        return self.base.add(x, y)

    def sub(self, x, y):
        self.counter.add += 1
        return self.base.sub(x, y)

    def neg(self, x):
        self.counter.neg += 1
        return self.base.neg(x)

    def mul(self, x, y):
        self.counter.mul += 1
        return self.base.mul(x, y)

    def eq(self, x, y):
        self.counter.eq += 1
        return self.base.eq(x, y)

    def is_zero(self, x):
        self.counter.eq += 1
        return self.base.is_zero(x)

    def inv(self, x):
        self.counter.inv += 1
        return self.base.inv(x)

    def from_int(self, n):
        return self.base.from_int(n)

    def parse(self, text):
        return self.base.parse(text)

    def format(self, x):
        return self.base.format(x)

    def random_element(self, rng):
        return self.base.random_element(rng)


def base_ring(ring: Ring) -> Ring:
    while isinstance(ring, CountingRing):
        ring = ring.base
    return ring


def count_ops(ring: Ring, action) -> tuple[OpCounter, object]:
    """Run ``action(counting_ring)`` with a fresh counter.

    Returns ``(snapshot, result)``.
    """
    counter = OpCounter()
    result = action(CountingRing(base_ring(ring), counter))
    return counter.snapshot(), result


def ring_from_spec(spec: str, bits: int = 32) -> Ring:
    """Parse ``fp:<p>``, ``q`` or ``poly:<nvars>``."""
    spec = spec.strip().lower()
    if spec.startswith("fp:"):
        return PrimeField(int(spec[3:]))
    if spec in ("q", "qq"):
        return RationalField(bits)
    if spec.startswith("poly:"):
        return PolynomialRing(int(spec[5:]))
    raise RingError(f"unknown ring spec {spec!r}")


def ring_spec(ring: Ring) -> str:
    ring = base_ring(ring)
    if isinstance(ring, PrimeField):
        return f"fp:{ring.p}"
    if isinstance(ring, RationalField):
        return "q"
    if isinstance(ring, PolynomialRing):
        return f"poly:{ring.nvars}"
    return ring.name


def elements_equal(ring: Ring, xs: Iterable, ys: Iterable) -> bool:
    return all(ring.eq(x, y) for x, y in zip(xs, ys))
