"""
Dense linear algebra over F_p for small primes p.

Vectors over F_2 are Python ints used as bitsets (bit j is coordinate j).
Vectors over odd F_p are tuples of residues.  ``as_vector`` and
``vector_entries`` convert between these and plain sequences.

A Subspace always stores its basis in reduced row-echelon form, so two
subspaces are equal exactly when their stored rows are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SubspaceNotContained, DimensionMismatch


def as_vector(v, p, dim):
    """Normalize a sequence (or an int bitset when p == 2) to internal form."""
    if p == 2:
        if isinstance(v, int):
            if v >> dim:
                raise DimensionMismatch(f"bitset {v:b} wider than {dim}")
            return v
        if len(v) != dim:
            raise DimensionMismatch(f"vector of length {len(v)}, expected {dim}")
        out = 0
        for j, e in enumerate(v):
            if e % 2:
                out |= 1 << j
        return out
    if len(v) != dim:
        raise DimensionMismatch(f"vector of length {len(v)}, expected {dim}")
    return tuple(int(e) % p for e in v)


def vector_entries(v, p, dim):
    if p == 2:
        return [(v >> j) & 1 for j in range(dim)]
    return list(v)


def is_zero(v):
    if isinstance(v, int):
        return v == 0
    return not any(v)


def vec_add(a, b, p):
    if p == 2:
        return a ^ b
    return tuple((x + y) % p for x, y in zip(a, b))


def vec_scale(a, c, p):
    if p == 2:
        return a if c % 2 else 0
    return tuple((c * x) % p for x in a)


def vec_sub(a, b, p):
    if p == 2:
        return a ^ b
    return tuple((x - y) % p for x, y in zip(a, b))


def zero_vector(p, dim):
    return 0 if p == 2 else (0,) * dim


def unit_vector(j, p, dim):
    if p == 2:
        return 1 << j
    v = [0] * dim
    v[j] = 1
    return tuple(v)


def _pivot(v, p):
    if p == 2:
        return (v & -v).bit_length() - 1
    for j, e in enumerate(v):
        if e:
            return j
    return -1


class Echelon:
    """Mutable incremental row reducer; the workhorse behind Subspace.

    Rows are kept fully reduced, so ``reduce`` is a single pass.
    """

    __slots__ = ("p", "dim", "rows")

    def __init__(self, p, dim, rows=None):
        self.p = p
        self.dim = dim
        self.rows = dict(rows) if rows else {}

    def copy(self):
        return Echelon(self.p, self.dim, self.rows)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        p = self.p
        if p == 2:
            for piv, row in self.rows.items():
                if (v >> piv) & 1:
                    v ^= row
            return v
        v = list(v)
        for piv, row in self.rows.items():
            c = v[piv]
            if c:
                for j in range(piv, self.dim):
                    if row[j]:
                        v[j] = (v[j] - c * row[j]) % p
        return tuple(v)

    def add(self, v):
        """Insert v; return True if the span grew."""
        v = self.reduce(v)
        p = self.p
        if is_zero(v):
            return False
        piv = _pivot(v, p)
        if p == 2:
            for q, row in list(self.rows.items()):
                if (row >> piv) & 1:
                    self.rows[q] = row ^ v
        else:
            inv = pow(v[piv], p - 2, p)
            v = tuple((inv * e) % p for e in v)
            for q, row in list(self.rows.items()):
                c = row[piv]
                if c:
                    self.rows[q] = tuple((a - c * b) % p for a, b in zip(row, v))
        self.rows[piv] = v
        return True

    def contains(self, v):
        return is_zero(self.reduce(v))

    def freeze(self):
        return Subspace(self.p, self.dim, tuple(self.rows[k] for k in sorted(self.rows)))


@dataclass(frozen=True)
class FpMatrix:
    p: int
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch("storage length does not match shape")
        if any(not (0 <= e < self.p) for e in self.entries):
            raise ValueError("entries must be reduced mod p")

    @classmethod
    def from_rows(cls, rows, p, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
            flat.extend(int(e) % p for e in r)
        return cls(p, len(rows), cols, tuple(flat))

    @classmethod
    def identity(cls, n, p):
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], p, n)

    @classmethod
    def zero(cls, r, c, p):
        return cls(p, r, c, (0,) * (r * c))

    def entry(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return FpMatrix.from_rows(
            [[self.entry(i, j) for i in range(self.rows)] for j in range(self.cols)],
            self.p, self.rows)

    def __matmul__(self, other):
        if self.p != other.p or self.cols != other.rows:
            raise DimensionMismatch("incompatible matrices")
        p = self.p
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(r[k] * other.entry(k, j) for k in range(self.cols)) % p
                        for j in range(other.cols)])
        return FpMatrix.from_rows(out, p, other.cols)

    def apply(self, v):
        """Matrix times column vector, in internal vector form."""
        p = self.p
        ent = vector_entries(v, p, self.cols)
        res = [sum(self.entry(i, k) * ent[k] for k in range(self.cols)) % p
               for i in range(self.rows)]
        return as_vector(res, p, self.rows)

    def is_invertible(self):
        return self.rows == self.cols and rank(self) == self.rows

    def row_vectors(self):
        return [as_vector(self.row(i), self.p, self.cols) for i in range(self.rows)]


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    rows: tuple

    @property
    def dim(self):
        return len(self.rows)

    @property
    def pivots(self):
        return tuple(_pivot(r, self.p) for r in self.rows)

    @property
    def basis(self):
        return FpMatrix.from_rows(
            [vector_entries(r, self.p, self.ambient_dim) for r in self.rows],
            self.p, self.ambient_dim)

    def echelon(self):
        return Echelon(self.p, self.ambient_dim, zip(self.pivots, self.rows))

    def __contains__(self, v):
        return contains(self, v)

    def coordinates(self, v):
        """Coefficients of v in terms of the stored basis rows."""
        p = self.p
        v = as_vector(v, p, self.ambient_dim) if not isinstance(v, (int, tuple)) else v
        coeffs = []
        rest = v
        for piv, row in zip(self.pivots, self.rows):
            if p == 2:
                c = (rest >> piv) & 1
            else:
                c = rest[piv]
            coeffs.append(c)
            if c:
                rest = vec_sub(rest, vec_scale(row, c, p), p)
        if not is_zero(rest):
            raise SubspaceNotContained("vector not in subspace")
        return coeffs

    def from_coordinates(self, coeffs):
        v = zero_vector(self.p, self.ambient_dim)
        for c, row in zip(coeffs, self.rows):
            if c % self.p:
                v = vec_add(v, vec_scale(row, c, self.p), self.p)
        return v

    def complement_pivots(self):
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]


def rank(m):
    e = Echelon(m.p, m.cols)
    for v in m.row_vectors():
        e.add(v)
    return len(e)


def span(vectors, ambient_dim, p=2):
    e = Echelon(p, ambient_dim)
    for v in vectors:
        if not isinstance(v, int) or p != 2:
            v = as_vector(v, p, ambient_dim)
        e.add(v)
    return e.freeze()


def full_space(ambient_dim, p=2):
    return span([unit_vector(j, p, ambient_dim) for j in range(ambient_dim)], ambient_dim, p)


def zero_space(ambient_dim, p=2):
    return Subspace(p, ambient_dim, ())


def _check(a, b):
    if a.p != b.p or a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("subspaces live in different ambient spaces")


def sum_spaces(a, b):
    _check(a, b)
    e = a.echelon()
    for r in b.rows:
        e.add(r)
    return e.freeze()


def contains(s, v):
    if not isinstance(v, int) or s.p != 2:
        v = as_vector(v, s.p, s.ambient_dim)
    if s.p == 2:
        for piv, row in zip(s.pivots, s.rows):
            if (v >> piv) & 1:
                v ^= row
        return v == 0
    return s.echelon().contains(v)


def is_subspace(sub, ambient):
    _check(sub, ambient)
    return all(contains(ambient, r) for r in sub.rows)


def quotient_dim(ambient, sub):
    if not is_subspace(sub, ambient):
        raise SubspaceNotContained("sub is not contained in ambient")
    return ambient.dim - sub.dim


def kernel(m):
    """Subspace of column vectors x with m x = 0 (dimension m.cols)."""
    p = m.p
    n, r = m.cols, m.rows
    # reduce the rows of [m^T | I]; rows with vanishing left block span the kernel
    e = Echelon(p, r + n)
    for j in range(n):
        col = [m.entry(i, j) for i in range(r)] + [int(k == j) for k in range(n)]
        e.add(as_vector(col, p, r + n))
    kern = Echelon(p, n)
    for piv, row in e.rows.items():
        if piv >= r:
            kern.add(row >> r if p == 2 else row[r:])
    return kern.freeze()


def intersect(a, b):
    """Intersection via the kernel of [A; B]^T."""
    _check(a, b)
    p, n = a.p, a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return zero_space(n, p)
    # x in both: x = sum c_i a_i = sum d_j b_j, solve sum c_i a_i - sum d_j b_j = 0
    cols = [vector_entries(r, p, n) for r in a.rows] + \
           [vector_entries(vec_scale(r, p - 1, p), p, n) for r in b.rows]
    m = FpMatrix.from_rows([[c[i] for c in cols] for i in range(n)], p, len(cols))
    ker = kernel(m)
    out = Echelon(p, n)
    for k in ker.rows:
        coeffs = vector_entries(k, p, len(cols))[:a.dim]
        v = zero_vector(p, n)
        for c, r in zip(coeffs, a.rows):
            if c:
                v = vec_add(v, vec_scale(r, c, p), p)
        out.add(v)
    return out.freeze()


def image(m, s):
    """Image of subspace s (column vectors) under matrix m."""
    return span([m.apply(r) for r in s.rows], m.rows, m.p)


class BitMap:
    """F_2-linear map on int bitsets, applied through byte lookup tables."""

    __slots__ = ("in_dim", "out_dim", "images", "_tables")

    def __init__(self, images, out_dim):
        self.images = list(images)
        self.in_dim = len(self.images)
        self.out_dim = out_dim
        tables = []
        for k in range(0, self.in_dim, 8):
            chunk = self.images[k:k + 8]
            t = [0] * (1 << len(chunk))
            for byte in range(1, len(t)):
                low = (byte & -byte).bit_length() - 1
                t[byte] = t[byte & (byte - 1)] ^ chunk[low]
            tables.append(t)
        self._tables = tables

    def __call__(self, v):
        out = 0
        for t in self._tables:
            if v & 255:
                out ^= t[v & 255]
            v >>= 8
            if not v:
                break
        return out

    def matrix(self):
        return FpMatrix.from_rows(
            [[(self.images[j] >> i) & 1 for j in range(self.in_dim)] for i in range(self.out_dim)],
            2, self.in_dim)


def compile_matrix(m):
    """Return a fast callable computing m @ v on internal vectors."""
    if m.p == 2:
        return BitMap([as_vector(list(m.entry(i, j) for i in range(m.rows)), 2, m.rows)
                       for j in range(m.cols)], m.rows)
    p, rows, cols = m.p, m.rows, m.cols
    table = [m.row(i) for i in range(rows)]

    def apply(v):
        return tuple(sum(r[k] * v[k] for k in range(cols)) % p for r in table)
    return apply
