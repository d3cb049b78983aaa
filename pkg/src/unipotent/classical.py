"""Matrix representations and closed-form arithmetic for types A, B, C, D.

Coefficient tuples are indexed by representation order (the root indices of
:class:`~unipotent.rootsystem.RootSystem`).  Matrices are lists of rows over a
ring, 0-based; ``Layout.pos`` maps an index of the J-sequence
``1..l, 0, -l..-1`` to its row.  ``phi(a)`` is the product of the root maps
``x_r(a_r)`` in representation order and is lower unitriangular.

Derived quantities of an element ``a`` (types B, C, D):

* ``pp[i]``   -- a''_i, the entry at (pos(-i), pos(i))
* ``p0[i]``   -- a'_{i0}, the entry at (pos(-i), pos(0)), type B only
* ``pj[i,j]`` -- a'_{ij}, the entry at (pos(-i), pos(-j)), i < j
* ``pn[i,j]`` -- a'_{i,-j}, the entry at (pos(-i), pos(j)), i < j
"""
from __future__ import annotations

from functools import lru_cache

from .rings import Ring
from .rootsystem import RootSystem


class UnsupportedCharacteristic(ValueError):
    """Type B formulas divide by 2 and need odd characteristic."""


class NotInImage(ValueError):
    pass


class Layout:
    """Index bookkeeping shared by the formulas of one root system."""

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.cartan = rs.cartan
        self.l = l = rs.rank
        self.n = {"A": l + 1, "B": 2 * l + 1}.get(rs.cartan, 2 * l)
        self.index = rs.label_index

    def pos(self, q: int) -> int:
        if q > 0:
            return q - 1
        if q == 0:
            return self.l
        return self.n + q

    def jprime(self, j: int) -> list[int]:
        """J'_j = [j+1..l, -l..-(j+1)]."""
        l = self.l
        return list(range(j + 1, l + 1)) + list(range(-l, -j))


@lru_cache(maxsize=None)
def layout(rs: RootSystem) -> Layout:
    return Layout(rs)


def check_characteristic(rs: RootSystem, ring: Ring):
    if rs.cartan == "B" and ring.characteristic == 2:
        raise UnsupportedCharacteristic(
            "type B formulas need odd characteristic; use type C instead")


# --- matrices -------------------------------------------------------------------

def identity_matrix(ring: Ring, n: int) -> list[list]:
    return [[ring.one if r == c else ring.zero for c in range(n)] for r in range(n)]


def matrix_multiply(ring: Ring, x, y) -> list[list]:
    """Classical cubic product, skipping structurally zero entries of x."""
    n = len(x)
    zero = ring.zero
    out = []
    for r in range(n):
        row = []
        xr = x[r]
        for c in range(n):
            acc = zero
            first = True
            for q in range(n):
                if ring.is_zero(xr[q]) or ring.is_zero(y[q][c]):
                    continue
                term = ring.mul(xr[q], y[q][c])
                acc = term if first else ring.add(acc, term)
                first = False
            row.append(acc)
        out.append(row)
    return out


def unitriangular_inverse(ring: Ring, m) -> list[list]:
    """Inverse of a lower unitriangular matrix by forward substitution."""
    n = len(m)
    inv = identity_matrix(ring, n)
    for c in range(n):
        for r in range(c + 1, n):
            acc = m[r][c]
            for q in range(c + 1, r):
                acc = ring.add(acc, ring.mul(m[r][q], inv[q][c]))
            inv[r][c] = ring.neg(acc)
    return inv


def form_matrix(rs: RootSystem, ring: Ring) -> list[list] | None:
    """Gram matrix Q with phi Q phi^T = Q for every phi in the image."""
    lay = layout(rs)
    n = lay.n
    if rs.cartan == "A":
        return None
    q = [[ring.zero] * n for _ in range(n)]
    for k in range(n):
        v = ring.one
        if rs.cartan == "C" and k >= lay.l:
            v = ring.neg(ring.one)
        if rs.cartan == "B" and k == lay.l:
            v = ring.from_int(2)
        q[k][n - 1 - k] = v
    return q


def transpose(m):
    return [list(col) for col in zip(*m)]


def preserves_form(rs: RootSystem, ring: Ring, m) -> bool:
    q = form_matrix(rs, ring)
    if q is None:
        return True
    lhs = matrix_multiply(ring, matrix_multiply(ring, m, q), transpose(m))
    return all(ring.eq(x, y) for rl, rq in zip(lhs, q) for x, y in zip(rl, rq))


def root_entries(rs: RootSystem, ring: Ring, r: int, t) -> list[tuple[int, int, object]]:
    """Off-diagonal entries (row, col, value) of the root map x_r(t)."""
    lay = layout(rs)
    pos = lay.pos
    i, j = rs.labels[r]
    if rs.cartan == "A":
        return [(j - 1, i - 1, t)]
    if j > 0:
        return [(pos(j), pos(i), t), (pos(-i), pos(-j), ring.neg(t))]
    if j == 0:
        return [(pos(0), pos(i), ring.add(t, t)), (pos(-i), pos(0), ring.neg(t)),
                (pos(-i), pos(i), ring.neg(ring.mul(t, t)))]
    if j == -i:
        return [(pos(-i), pos(i), t)]
    m = -j
    mirror = t if rs.cartan == "C" else ring.neg(t)
    return [(pos(-m), pos(i), t), (pos(-i), pos(m), mirror)]


def root_matrix(rs: RootSystem, ring: Ring, r: int, t) -> list[list]:
    m = identity_matrix(ring, layout(rs).n)
    for row, col, v in root_entries(rs, ring, r, t):
        m[row][col] = v
    return m


def embed_by_root_maps(rs: RootSystem, ring: Ring, a) -> list[list]:
    """phi(a) as the literal product of root maps in representation order."""
    check_characteristic(rs, ring)
    n = layout(rs).n
    m = identity_matrix(ring, n)
    for r in range(rs.N):
        entries = root_entries(rs, ring, r, a[r])
        # right multiplication by I + E: column c gains sum of v * column q
        updates = {}
        for q, c, v in entries:
            col = updates.setdefault(c, [m[k][c] for k in range(n)])
            for k in range(n):
                col[k] = ring.add(col[k], ring.mul(m[k][q], v))
        for c, col in updates.items():
            for k in range(n):
                m[k][c] = col[k]
    return m


# --- derived quantities -----------------------------------------------------------

class _Coeffs:
    """Read access a(i, j) by pair label; zero for labels that are not roots."""

    __slots__ = ("vals", "index", "zero")

    def __init__(self, lay: Layout, vals, zero):
        self.vals = vals
        self.index = lay.index
        self.zero = zero

    def __call__(self, i, j):
        k = self.index.get((i, j))
        return self.zero if k is None else self.vals[k]


def derived(rs: RootSystem, ring: Ring, a):
    """The primed quantities of ``a``; see the module docstring."""
    lay = layout(rs)
    l = lay.l
    T = rs.cartan
    A = _Coeffs(lay, a, ring.zero)
    add, mul, neg, sub = ring.add, ring.mul, ring.neg, ring.sub
    pp, p0, pj, pn = {}, {}, {}, {}
    for i in range(l, 0, -1):
        s = None
        for k in range(i + 1, l + 1):
            term = mul(A(i, k), A(i, -k))
            s = term if s is None else add(s, term)
        if T == "B":
            v = neg(mul(A(i, 0), A(i, 0)))
        elif T == "C":
            v = A(i, -i)
        else:
            v = ring.zero
        pp[i] = v if s is None else sub(v, s)
    for i in range(l, 0, -1):
        if T == "B":
            v = neg(A(i, 0))
            for k in range(i + 1, l + 1):
                v = sub(v, mul(A(i, k), p0[k]))
            p0[i] = v
        for j in range(i + 1, l + 1):
            v = neg(A(i, j))
            for k in range(i + 1, j):
                v = sub(v, mul(A(i, k), pj[k, j]))
            pj[i, j] = v
    for i in range(l, 0, -1):
        for j in range(i + 1, l + 1):
            v = A(i, -j) if T == "C" else neg(A(i, -j))
            for k in range(i + 1, j):
                v = sub(v, mul(A(i, k), pn[k, j]))
            v = sub(v, mul(A(i, j), pp[j]))
            if T == "B":
                t = mul(A(i, 0), A(j, 0))
                v = sub(v, add(t, t))
            for k in lay.jprime(j):
                term = mul(A(i, k), A(j, -k))
                if T == "C" and k < 0:
                    v = add(v, term)
                else:
                    v = sub(v, term)
            pn[i, j] = v
    return pp, p0, pj, pn


def _aprime_neg(pj, pn, j, k):
    """a'_{j,-k} for k in J'_j (k negative means a'_{j,|k|})."""
    return pn[j, k] if k > 0 else pj[j, -k]


def embed_matrix(rs: RootSystem, ring: Ring, a) -> list[list]:
    """phi(a) assembled entry by entry from the coefficients and derived quantities."""
    check_characteristic(rs, ring)
    lay = layout(rs)
    pos, l, n = lay.pos, lay.l, lay.n
    m = identity_matrix(ring, n)
    if rs.cartan == "A":
        for r, (i, j) in enumerate(rs.labels):
            m[j - 1][i - 1] = a[r]
        return m
    for r, (i, j) in enumerate(rs.labels):
        if j == 0:
            m[pos(0)][pos(i)] = ring.add(a[r], a[r])
        elif j != -i:
            m[pos(j)][pos(i)] = a[r]
    pp, p0, pj, pn = derived(rs, ring, a)
    for i in range(1, l + 1):
        m[pos(-i)][pos(i)] = pp[i]
        if rs.cartan == "B":
            m[pos(-i)][pos(0)] = p0[i]
        for j in range(i + 1, l + 1):
            m[pos(-i)][pos(-j)] = pj[i, j]
            m[pos(-i)][pos(j)] = pn[i, j]
    return m


def extract_coeffs(rs: RootSystem, ring: Ring, m, validate: bool = False) -> tuple:
    """Inverse of :func:`embed_matrix` on its image."""
    check_characteristic(rs, ring)
    if validate:
        if not preserves_form(rs, ring, m):
            raise NotInImage("matrix does not preserve the bilinear form")
    lay = layout(rs)
    pos = lay.pos
    out = [ring.zero] * rs.N
    if rs.cartan == "A":
        for r, (i, j) in enumerate(rs.labels):
            out[r] = m[j - 1][i - 1]
        return tuple(out)
    half = ring.inv(ring.from_int(2)) if rs.cartan == "B" else None
    diag = []
    for r, (i, j) in enumerate(rs.labels):
        if j == 0:
            out[r] = ring.mul(m[pos(0)][pos(i)], half)
        elif j == -i:
            diag.append((r, i))
        else:
            out[r] = m[pos(j)][pos(i)]
    C = _Coeffs(lay, out, ring.zero)
    for r, i in diag:
        v = m[pos(-i)][pos(i)]
        for k in range(i + 1, lay.l + 1):
            v = ring.add(v, ring.mul(C(i, k), C(i, -k)))
        out[r] = v
    if validate and tuple(map(tuple, embed_matrix(rs, ring, out))) != tuple(map(tuple, m)):
        raise NotInImage("matrix is not in the image of phi")
    return tuple(out)


# --- direct formulas --------------------------------------------------------------

def _multiply_A(rs, ring, a, b):
    lay = layout(rs)
    idx = lay.index
    add, mul = ring.add, ring.mul
    c = [None] * rs.N
    for r, (i, j) in enumerate(rs.labels):
        v = add(a[r], b[r])
        for k in range(i + 1, j):
            v = add(v, mul(b[idx[i, k]], a[idx[k, j]]))
        c[r] = v
    return tuple(c)


def _invert_A(rs, ring, a):
    idx = layout(rs).index
    d = [None] * rs.N
    for r, (i, j) in enumerate(rs.labels):
        v = ring.neg(a[r])
        for k in range(i + 1, j):
            v = ring.sub(v, ring.mul(d[idx[i, k]], a[idx[k, j]]))
        d[r] = v
    return tuple(d)


def direct_multiply(rs: RootSystem, ring: Ring, a, b) -> tuple:
    """Coefficients of phi(a) phi(b) by the recursive closed-form formulas."""
    check_characteristic(rs, ring)
    if rs.cartan == "A":
        return _multiply_A(rs, ring, a, b)
    lay = layout(rs)
    l, T = lay.l, rs.cartan
    add, mul, sub = ring.add, ring.mul, ring.sub
    A = _Coeffs(lay, a, ring.zero)
    B = _Coeffs(lay, b, ring.zero)
    pp, p0, pj, pn = derived(rs, ring, a)
    out = [None] * rs.N
    C = _Coeffs(lay, out, ring.zero)
    idx = lay.index
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            v = add(A(i, j), B(i, j))
            for k in range(i + 1, j):
                v = add(v, mul(B(i, k), A(k, j)))
            out[idx[i, j]] = v
        if T == "B":
            v = add(A(i, 0), B(i, 0))
            for k in range(i + 1, l + 1):
                v = add(v, mul(B(i, k), A(k, 0)))
            out[idx[i, 0]] = v
        for j in range(i + 1, l + 1):
            v = add(A(i, -j), B(i, -j))
            for k in range(i + 1, j):
                v = add(v, mul(B(i, k), A(k, -j)))
            v = add(v, mul(pp[j], B(i, j)))
            if T == "B":
                t = mul(B(i, 0), p0[j])
                v = add(v, add(t, t))
            for k in lay.jprime(j):
                v = add(v, mul(B(i, k), _aprime_neg(pj, pn, j, k)))
            out[idx[i, -j]] = v
    if T == "C":
        bpp, _, _, _ = _double_primes_only(rs, ring, b)
        for i in range(1, l + 1):
            v = add(pp[i], bpp[i])
            for k in range(i + 1, l + 1):
                v = add(v, mul(C(i, k), C(i, -k)))
            for k in lay.jprime(i):
                v = add(v, mul(B(i, k), _aprime_neg(pj, pn, i, k)))
            out[idx[i, -i]] = v
    return tuple(out)


def _double_primes_only(rs, ring, b):
    """b''_i for type C (the only derived quantity of a right operand needed)."""
    lay = layout(rs)
    B = _Coeffs(lay, b, ring.zero)
    pp = {}
    for i in range(1, lay.l + 1):
        v = B(i, -i)
        for k in range(i + 1, lay.l + 1):
            v = ring.sub(v, ring.mul(B(i, k), B(i, -k)))
        pp[i] = v
    return pp, None, None, None


def direct_invert(rs: RootSystem, ring: Ring, a) -> tuple:
    """Coefficients of phi(a)^-1, evaluated recursively."""
    check_characteristic(rs, ring)
    if rs.cartan == "A":
        return _invert_A(rs, ring, a)
    lay = layout(rs)
    l, T = lay.l, rs.cartan
    mul, sub, neg, add = ring.mul, ring.sub, ring.neg, ring.add
    A = _Coeffs(lay, a, ring.zero)
    pp, p0, pj, pn = derived(rs, ring, a)
    out = [None] * rs.N
    D = _Coeffs(lay, out, ring.zero)
    idx = lay.index
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            v = neg(A(i, j))
            for k in range(i + 1, j):
                v = sub(v, mul(D(i, k), A(k, j)))
            out[idx[i, j]] = v
        if T == "B":
            v = neg(A(i, 0))
            for k in range(i + 1, l + 1):
                v = sub(v, mul(D(i, k), A(k, 0)))
            out[idx[i, 0]] = v
        for j in range(l, i, -1):
            v = neg(A(i, -j))
            for k in range(i + 1, j):
                v = sub(v, mul(D(i, k), A(k, -j)))
            v = sub(v, mul(pp[j], D(i, j)))
            if T == "B":
                t = mul(D(i, 0), p0[j])
                v = sub(v, add(t, t))
            for k in lay.jprime(j):
                v = sub(v, mul(D(i, k), _aprime_neg(pj, pn, j, k)))
            out[idx[i, -j]] = v
        if T == "C":
            v = neg(pp[i])
            for k in range(i + 1, l + 1):
                v = add(v, mul(D(i, k), D(i, -k)))
            for k in lay.jprime(i):
                v = sub(v, mul(D(i, k), _aprime_neg(pj, pn, i, k)))
            out[idx[i, -i]] = v
    return tuple(out)


def matrix_method_multiply(rs: RootSystem, ring: Ring, a, b) -> tuple:
    """Method D: full phi(a) times the coefficient columns of phi(b), then extract.

    Only the first l columns of the product are needed.  Those depend on the
    first l columns of phi(b), which hold plain coefficients plus b''_i
    (needed in type C only).
    """
    check_characteristic(rs, ring)
    lay = layout(rs)
    n, pos = lay.n, lay.pos
    left = embed_matrix(rs, ring, a)
    ncols = n - 1 if rs.cartan == "A" else lay.l
    # significant columns of phi(b): col[c] = {row: value}
    cols = [{c: ring.one} for c in range(ncols)]
    for r, (i, j) in enumerate(rs.labels):
        if rs.cartan == "A":
            cols[i - 1][j - 1] = b[r]
        elif j == 0:
            cols[pos(i)][pos(0)] = ring.add(b[r], b[r])
        elif j != -i:
            cols[pos(i)][pos(j)] = b[r]
    if rs.cartan == "C":
        bpp = _double_primes_only(rs, ring, b)[0]
        for i in range(1, lay.l + 1):
            cols[pos(i)][pos(-i)] = bpp[i]
    prod = identity_matrix(ring, n)
    for c in range(ncols):
        col = cols[c]
        for r in range(c + 1, n):
            acc = None
            for q, v in col.items():
                if q > r:
                    continue
                term = v if q == r else ring.mul(left[r][q], v)
                acc = term if acc is None else ring.add(acc, term)
            prod[r][c] = acc
    return extract_coeffs(rs, ring, prod)


# --- sparse left multiplication by one root element --------------------------------

def _column_entry(lay: Layout, ring: Ring, u, row: int, col: int):
    """Entry (row, col) of phi(u) for a coefficient column ``col < l``.

    Only entries that are plain coefficients (or structural 0/1) are
    supported; the callers never need the derived ones.
    """
    rs = lay.rs
    if row == col:
        return ring.one
    if row < col:
        return ring.zero
    i = col + 1
    if rs.cartan == "A":
        return u[lay.index[i, row + 1]]
    l = lay.l
    if row < l:
        return u[lay.index[i, row + 1]]
    if rs.cartan == "B" and row == l:
        v = u[lay.index[i, 0]]
        return ring.add(v, v)
    m = row - lay.n  # row = pos(m), m negative
    k = lay.index.get((i, m))
    if k is None or m == -i:
        raise KeyError((row, col))
    return u[k]


def left_multiply_root(rs: RootSystem, ring: Ring, r: int, t, u) -> tuple:
    """Coefficients of x_r(t) * u using only the O(l) entries that change.

    The product is phi(u) with the rows touched by the root map updated;
    only coefficient columns are recomputed.  In type C the diagonal
    coefficients c_{p,-p} are adjusted incrementally.
    """
    check_characteristic(rs, ring)
    lay = layout(rs)
    T = rs.cartan
    entries = root_entries(rs, ring, r, t)
    by_row: dict[int, list] = {}
    for row, col, v in entries:
        by_row.setdefault(row, []).append((col, v))
    out = list(u)
    half = ring.inv(ring.from_int(2)) if T == "B" else None
    changed: dict[tuple[int, int], tuple] = {}   # label -> (old, new)
    diag_delta: dict[int, object] = {}           # C: change of entry (pos(-p), pos(p))
    l, n = lay.l, lay.n
    for row, srcs in by_row.items():
        # which coefficient columns does this row carry?
        if T == "A":
            target = [(p, (p + 1, row + 1)) for p in range(row)]
        elif row < l:
            target = [(p, (p + 1, row + 1)) for p in range(row)]
        elif T == "B" and row == l:
            target = [(p, (p + 1, 0)) for p in range(l)]
        else:
            m = row - n
            top = -m if T == "C" else -m - 1
            target = [(p, (p + 1, m)) for p in range(top)]
        for p, label in target:
            delta = None
            for q, v in srcs:
                if q < p:
                    continue
                e = _column_entry(lay, ring, u, q, p)
                term = v if q == p else ring.mul(v, e)
                delta = term if delta is None else ring.add(delta, term)
            if delta is None:
                continue
            if label[1] == -label[0]:
                diag_delta[label[0]] = delta
                continue
            k = lay.index[label]
            old = out[k]
            if label[1] == 0:
                new = ring.add(old, ring.mul(delta, half))
            else:
                new = ring.add(old, delta)
            out[k] = new
            changed[label] = (old, new)
    if T == "C":
        touched_rows = {lab[0] for lab in changed} | set(diag_delta)
        for p in sorted(touched_rows):
            k = lay.index[p, -p]
            v = out[k]
            if p in diag_delta:
                v = ring.add(v, diag_delta[p])
            ks = {abs(lab[1]) for lab in changed if lab[0] == p and lab[1] != -p}
            for m in sorted(ks):
                if m <= p:
                    continue
                old_a, new_a = changed.get((p, m), (out[lay.index[p, m]],) * 2)
                old_b, new_b = changed.get((p, -m), (out[lay.index[p, -m]],) * 2)
                v = ring.add(v, ring.sub(ring.mul(new_a, new_b), ring.mul(old_a, old_b)))
            out[k] = v
    return tuple(out)
