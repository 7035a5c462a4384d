"""Exact rational matrices and the lattice of linear subspaces.

Every subspace is stored by a canonical basis (the reduced column echelon
form of its basis matrix), so two subspaces with the same span compare equal
as plain values. All arithmetic uses :class:`fractions.Fraction`; rank
decisions are therefore exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch

__all__ = [
    "Matrix",
    "Subspace",
    "to_fraction",
    "kernel",
    "image",
    "subspace_sum",
    "intersect",
    "preimage",
    "apply",
    "contains",
    "equals",
    "project",
    "product",
    "permute",
]


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact rational.

    Strings are parsed as integers, ratios (``"-1/2"``) or plain decimals
    (``"0.8"`` is 4/5). Floats go through their shortest decimal repr so that
    ``0.8`` also becomes 4/5 rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class Matrix:
    """Immutable dense matrix over the rationals.

    The column count is stored explicitly so that matrices with zero rows
    (an empty constraint map, say) still know their domain dimension.
    """

    __slots__ = ("_rows", "_ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable] = (), ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        for i, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionMismatch(f"length of row {i}", ncols, len(row))
        self._rows = data
        self._ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> Matrix:
        # entries already Fractions with consistent lengths
        m = object.__new__(cls)
        m._rows = rows
        m._ncols = ncols
        m._hash = None
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        z = Fraction(0)
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        one, z = Fraction(1), Fraction(0)
        return cls._raw(
            tuple(tuple(one if i == j else z for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> Matrix:
        cols = [tuple(to_fraction(x) for x in c) for c in columns]
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise DimensionMismatch(f"length of column {j}", nrows, len(c))
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls._raw(rows, len(cols))

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self._rows), self._ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(r[j] for r in self._rows) for j in range(self._ncols)]

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    @property
    def T(self) -> Matrix:
        return Matrix._raw(tuple(self.columns()), len(self._rows))

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self._ncols != other.nrows:
                raise DimensionMismatch("inner matrix dimension", self._ncols, other.nrows)
            cols = other.columns()
            rows = tuple(
                tuple(_dot(r, c) for c in cols) for r in self._rows
            )
            return Matrix._raw(rows, other.ncols)
        vec = tuple(to_fraction(x) for x in other)
        if len(vec) != self._ncols:
            raise DimensionMismatch("vector length", self._ncols, len(vec))
        return tuple(_dot(r, vec) for r in self._rows)

    def __add__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            self._ncols,
        )

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __neg__(self) -> Matrix:
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self._ncols)

    def __mul__(self, scalar) -> Matrix:
        s = to_fraction(scalar)
        return Matrix._raw(tuple(tuple(s * a for a in r) for r in self._rows), self._ncols)

    __rmul__ = __mul__

    def _same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatch("matrix shape", self.shape, other.shape)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._ncols == other._ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"Matrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def rank(self) -> int:
        return len(_rref(self._rows, self._ncols)[0])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    @staticmethod
    def hstack(*blocks: Matrix) -> Matrix:
        nrows = blocks[0].nrows
        for b in blocks:
            if b.nrows != nrows:
                raise DimensionMismatch("row count in hstack", nrows, b.nrows)
        rows = tuple(sum((b._rows[i] for b in blocks), ()) for i in range(nrows))
        return Matrix._raw(rows, sum(b.ncols for b in blocks))

    @staticmethod
    def vstack(*blocks: Matrix) -> Matrix:
        ncols = blocks[0].ncols
        for b in blocks:
            if b.ncols != ncols:
                raise DimensionMismatch("column count in vstack", ncols, b.ncols)
        return Matrix._raw(sum((b._rows for b in blocks), ()), ncols)

    @staticmethod
    def block_diag(*blocks: Matrix) -> Matrix:
        total = sum(b.ncols for b in blocks)
        z = Fraction(0)
        rows = []
        offset = 0
        for b in blocks:
            left = (z,) * offset
            right = (z,) * (total - offset - b.ncols)
            rows.extend(left + r + right for r in b._rows)
            offset += b.ncols
        return Matrix._raw(tuple(rows), total)


def _dot(u, v) -> Fraction:
    s = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def _rref(rows, ncols: int):
    """Reduced row echelon form.

    Returns the nonzero reduced rows (as tuples) and their pivot columns.
    """
    m = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead if x else x for x in m[r]]
        prow = m[r]
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for j in nz:
                        row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


def _nullspace_vectors(rows, ncols: int) -> list[tuple[Fraction, ...]]:
    reduced, pivots = _rref(rows, ncols)
    pivot_set = set(pivots)
    out = []
    one, z = Fraction(1), Fraction(0)
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [z] * ncols
        v[f] = one
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        out.append(tuple(v))
    return out


class Subspace:
    """A linear subspace of Q^n kept in canonical form.

    ``basis`` is an ``ambient_dim x dim`` matrix whose columns are the rows of
    the reduced row echelon form of any spanning set. Equality and hashing go
    through that canonical basis, so ``==`` decides equality of spans.
    """

    __slots__ = ("ambient_dim", "_vectors", "_pivots", "_hash")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length", ambient_dim, len(v))
        self.ambient_dim = ambient_dim
        self._vectors, self._pivots = _rref(vecs, ambient_dim)
        self._hash = None

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n)

    @classmethod
    def full(cls, n: int) -> Subspace:
        return cls(n, Matrix.identity(n).rows)

    @classmethod
    def coordinate_axes(cls, n: int, indices: Iterable[int]) -> Subspace:
        eye = Matrix.identity(n).rows
        return cls(n, [eye[i] for i in indices])

    @property
    def dim(self) -> int:
        return len(self._vectors)

    @property
    def vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        """Canonical basis vectors."""
        return tuple(self._vectors)

    @property
    def basis(self) -> Matrix:
        return Matrix._raw(
            tuple(tuple(v[i] for v in self._vectors) for i in range(self.ambient_dim)),
            len(self._vectors),
        )

    def is_zero(self) -> bool:
        return not self._vectors

    def is_full(self) -> bool:
        return len(self._vectors) == self.ambient_dim

    def __contains__(self, vector) -> bool:
        v = [to_fraction(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length", self.ambient_dim, len(v))
        for row, p in zip(self._vectors, self._pivots):
            f = v[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return not any(v)

    def annihilator(self) -> Matrix:
        """A matrix whose kernel is exactly this subspace."""
        perp = _nullspace_vectors(self._vectors, self.ambient_dim)
        return Matrix._raw(tuple(perp), self.ambient_dim)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._vectors == other._vectors

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_dim, tuple(self._vectors)))
        return self._hash

    def __le__(self, other: Subspace) -> bool:
        return contains(other, self)

    def __ge__(self, other: Subspace) -> bool:
        return contains(self, other)

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def __repr__(self) -> str:
        vecs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self._vectors)
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim}, [{vecs}])"


def _check_ambient(V: Subspace, W: Subspace) -> None:
    if V.ambient_dim != W.ambient_dim:
        raise DimensionMismatch("ambient dimension", V.ambient_dim, W.ambient_dim)


def kernel(M: Matrix) -> Subspace:
    """Null space ``{x | Mx = 0}``."""
    return Subspace(M.ncols, _nullspace_vectors(M.rows, M.ncols))


def image(M: Matrix) -> Subspace:
    """Column span of ``M``."""
    return Subspace(M.nrows, M.columns())


def subspace_sum(V: Subspace, W: Subspace) -> Subspace:
    _check_ambient(V, W)
    if W.is_zero() or V.is_full():
        return V
    if V.is_zero() or W.is_full():
        return W
    return Subspace(V.ambient_dim, V.vectors + W.vectors)


def intersect(V: Subspace, W: Subspace) -> Subspace:
    """Intersection via the null space of ``[B_V | -B_W]``."""
    _check_ambient(V, W)
    if V.is_zero() or W.is_full():
        return V
    if W.is_zero() or V.is_full():
        return W
    bv, bw = V.basis, W.basis
    coeffs = _nullspace_vectors(Matrix.hstack(bv, -bw).rows, V.dim + W.dim)
    k = V.dim
    return Subspace(V.ambient_dim, (bv @ c[:k] for c in coeffs))


def preimage(M: Matrix, V: Subspace) -> Subspace:
    """``{x | Mx in V}``, computed as the kernel of ``N M`` with ``ker N = V``."""
    if M.nrows != V.ambient_dim:
        raise DimensionMismatch("rows of map vs ambient dimension", V.ambient_dim, M.nrows)
    if V.is_full():
        return Subspace.full(M.ncols)
    return kernel(V.annihilator() @ M)


def apply(M: Matrix, V: Subspace) -> Subspace:
    """Image of ``V`` under ``M``."""
    if M.ncols != V.ambient_dim:
        raise DimensionMismatch("columns of map vs ambient dimension", V.ambient_dim, M.ncols)
    return Subspace(M.nrows, (M @ v for v in V.vectors))


def contains(V: Subspace, W: Subspace) -> bool:
    """True iff ``W`` is a subspace of ``V``."""
    _check_ambient(V, W)
    if W.dim > V.dim:
        return False
    return all(w in V for w in W.vectors)


def equals(V: Subspace, W: Subspace) -> bool:
    _check_ambient(V, W)
    return V == W


def _indices(coords, n: int) -> list[int]:
    if isinstance(coords, slice):
        idx = list(range(n))[coords]
    elif isinstance(coords, tuple) and len(coords) == 2 and all(isinstance(c, int) for c in coords):
        idx = list(range(coords[0], coords[1]))
    else:
        idx = list(coords)
    for i in idx:
        if not 0 <= i < n:
            raise DimensionMismatch("coordinate index within ambient dimension", f"< {n}", i)
    return idx


def project(V: Subspace, coords) -> Subspace:
    """Coordinate projection of ``V``.

    ``coords`` is a ``range``, a ``slice``, a ``(start, stop)`` pair, or any
    sequence of coordinate indices; the result lives in ``len(coords)``
    dimensions with coordinates in the given order.
    """
    idx = _indices(coords, V.ambient_dim)
    return Subspace(len(idx), (tuple(v[i] for i in idx) for v in V.vectors))


def product(*spaces: Subspace) -> Subspace:
    """Direct product ``V1 x V2 x ...`` in the concatenated coordinates."""
    total = sum(s.ambient_dim for s in spaces)
    z = Fraction(0)
    vecs = []
    offset = 0
    for s in spaces:
        left = (z,) * offset
        right = (z,) * (total - offset - s.ambient_dim)
        vecs.extend(left + v + right for v in s.vectors)
        offset += s.ambient_dim
    return Subspace(total, vecs)


def permute(V: Subspace, order: Sequence[int]) -> Subspace:
    """Reorder coordinates: new coordinate ``i`` is old coordinate ``order[i]``."""
    if sorted(order) != list(range(V.ambient_dim)):
        raise DimensionMismatch("permutation of coordinates", V.ambient_dim, list(order))
    return project(V, order)
