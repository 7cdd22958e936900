"""Exact linear algebra over GF(p) and the rationals.

Matrices are immutable wrappers around numpy arrays: int64 residues for
prime fields (hot paths go through the kernels in _kernels.py), Fraction
object arrays for the rationals.  Rank, nullspace, factorization and all
subspace operations reduce to one deterministic RREF.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, NotInvertible, ZeroMatrix
from .fields import Field

__all__ = [
    "Matrix",
    "Subspace",
    "rref",
    "rank",
    "nullspace",
    "rank_factorize",
    "orth_complement",
    "subspace_sum",
    "subspace_contains",
    "apply_to_subspace",
    "invert",
]


def _rref_fraction(a: np.ndarray) -> tuple[np.ndarray, int, np.ndarray]:
    """RREF over the rationals; same pivot rule as the mod-p kernels."""
    a = a.copy()
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * (1 / a[r, c])
        for i in range(m):
            if i != r and a[i, c] != 0:
                a[i] = a[i] - a[i, c] * a[r]
        pivots.append(c)
        r += 1
    return a, r, np.asarray(pivots, dtype=np.int64)


class Matrix:
    """Immutable exact matrix over a fixed field."""

    __slots__ = ("field", "a", "_key")

    def __init__(self, field: Field, array, _canonical: bool = False):
        self.field = field
        if _canonical:
            a = array
        else:
            a = field.array(array)
        if a.ndim != 2:
            raise ValueError("matrix array must be 2-D")
        a.flags.writeable = False
        self.a = a
        self._key = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        if field.char == 0:
            a = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    a[i, j] = Fraction(1 if i == j else 0)
            return cls(field, a, _canonical=True)
        return cls(field, np.eye(n, dtype=np.int64), _canonical=True)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        if field.char == 0:
            a = np.empty((rows, cols), dtype=object)
            a[...] = Fraction(0)
            return cls(field, a, _canonical=True)
        return cls(field, np.zeros((rows, cols), dtype=np.int64), _canonical=True)

    @classmethod
    def diag(cls, field: Field, entries: Sequence) -> "Matrix":
        n = len(entries)
        m = cls.zeros(field, n, n)
        a = m.a.copy()
        for i, x in enumerate(entries):
            a[i, i] = field.canon(x)
        return cls(field, a, _canonical=True)

    @classmethod
    def from_rows(cls, field: Field, rows: Iterable[Iterable]) -> "Matrix":
        return cls(field, rows)

    @classmethod
    def from_array(cls, field: Field, a: np.ndarray) -> "Matrix":
        """Wrap an already-canonical array without revalidation."""
        return cls(field, a, _canonical=True)

    # -- shape and access -------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __getitem__(self, ij):
        return self.a[ij]

    def row(self, i: int) -> np.ndarray:
        return self.a[i]

    def col(self, j: int) -> np.ndarray:
        return self.a[:, j]

    def to_lists(self) -> list[list]:
        if self.field.char:
            return [[int(x) for x in row] for row in self.a.tolist()]
        return [list(row) for row in self.a]

    def key(self):
        """Hashable canonical key (shared with group element lookup)."""
        if self._key is None:
            if self.field.char:
                k = (self.field.char, self.a.shape, self.a.tobytes())
            else:
                k = (
                    0,
                    self.a.shape,
                    tuple((x.numerator, x.denominator) for x in self.a.flat),
                )
            self._key = k
        return self._key

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise DimensionMismatch("matrices over different fields")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatch(f"{self.a.shape} + {other.a.shape}")
        s = self.a + other.a
        if self.field.char:
            s %= self.field.char
        return Matrix(self.field, s, _canonical=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatch(f"{self.a.shape} - {other.a.shape}")
        s = self.a - other.a
        if self.field.char:
            s %= self.field.char
        return Matrix(self.field, s, _canonical=True)

    def __neg__(self) -> "Matrix":
        s = -self.a
        if self.field.char:
            s %= self.field.char
        return Matrix(self.field, s, _canonical=True)

    def scale(self, c) -> "Matrix":
        c = self.field.canon(c)
        s = self.a * c
        if self.field.char:
            s %= self.field.char
        return Matrix(self.field, s, _canonical=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.a.shape} @ {other.a.shape}")
        p = self.field.char
        if p:
            prod = _kernels.matmul_mod(self.a, other.a, p)
        else:
            prod = self.a.dot(other.a)
        return Matrix(self.field, prod, _canonical=True)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Column action: returns self @ v for a 1-D canonical vector."""
        p = self.field.char
        if p:
            return _kernels.matmul_mod(self.a, v.reshape(-1, 1), p).ravel()
        return self.a.dot(v)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, np.ascontiguousarray(self.a.T), _canonical=True)

    def is_zero(self) -> bool:
        return not np.any(self.a != 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.a.shape == other.a.shape and bool(
            np.all(self.a == other.a)
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Matrix({self.field!r}, {self.a.tolist()!r})"


# -------------------------------------------------------------------------------
# core reductions
# -------------------------------------------------------------------------------

def rref(m: Matrix) -> tuple[Matrix, int, tuple[int, ...]]:
    """Reduced row-echelon form, rank, and pivot columns."""
    p = m.field.char
    if p:
        r, rk, piv = _kernels.rref_mod(np.ascontiguousarray(m.a), p)
    else:
        r, rk, piv = _rref_fraction(m.a)
    return Matrix(m.field, r, _canonical=True), int(rk), tuple(int(c) for c in piv)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def nullspace(m: Matrix) -> "Subspace":
    """Right nullspace {v : m v = 0} as a subspace of F^cols."""
    r, rk, piv = rref(m)
    n = m.cols
    piv_set = set(piv)
    free = [c for c in range(n) if c not in piv_set]
    if not free:
        return Subspace.zero(m.field, n)
    basis = Matrix.zeros(m.field, len(free), n).a.copy()
    one = m.field.canon(1)
    for k, f in enumerate(free):
        basis[k, f] = one
        for row_idx, pc in enumerate(piv):
            coeff = r.a[row_idx, f]
            if coeff != 0:
                basis[k, pc] = -coeff if m.field.char == 0 else (-int(coeff)) % m.field.char
    return Subspace.from_rows(m.field, n, Matrix(m.field, basis, _canonical=True))


def rank_factorize(d: Matrix) -> tuple[Matrix, Matrix]:
    """Write a nonzero n x n matrix D as Y @ X.T with n x R factors of rank R.

    Y is the pivot columns of D, X.T the nonzero rows of rref(D); both are
    deterministic, no randomization.
    """
    if d.is_zero():
        raise ZeroMatrix("rank factorization needs a nonzero matrix")
    r, rk, piv = rref(d)
    y = Matrix(d.field, np.ascontiguousarray(d.a[:, list(piv)]), _canonical=True)
    x = Matrix(d.field, np.ascontiguousarray(r.a[:rk].T), _canonical=True)
    return y, x


def invert(m: Matrix) -> Matrix:
    """Inverse of a square matrix, via Gauss-Jordan on [M | I]."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = np.concatenate([m.a, Matrix.identity(m.field, n).a], axis=1)
    r, _, piv = rref(Matrix(m.field, aug, _canonical=True))
    # singular inputs push pivots into the identity block
    if piv != tuple(range(n)):
        raise NotInvertible("matrix is singular")
    return Matrix(m.field, np.ascontiguousarray(r.a[:, n:]), _canonical=True)


# -------------------------------------------------------------------------------
# subspaces
# -------------------------------------------------------------------------------

class Subspace:
    """Subspace of F^n held as an RREF basis with no zero rows.

    The RREF basis is a canonical form, so equality of subspaces is
    equality of basis matrices.
    """

    __slots__ = ("field", "ambient_dim", "basis")

    def __init__(self, field: Field, ambient_dim: int, basis: Matrix, _trusted: bool = False):
        if basis.cols != ambient_dim:
            raise DimensionMismatch("basis width != ambient dimension")
        if not _trusted:
            r, rk, _ = rref(basis)
            basis = Matrix(field, np.ascontiguousarray(r.a[:rk]), _canonical=True)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_rows(cls, field: Field, ambient_dim: int, rows) -> "Subspace":
        m = rows if isinstance(rows, Matrix) else Matrix(field, rows)
        return cls(field, ambient_dim, m)

    @classmethod
    def zero(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, Matrix.zeros(field, 0, n), _trusted=True)

    @classmethod
    def full(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n), _trusted=True)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def contains_vector(self, v) -> bool:
        field = self.field
        v = v if isinstance(v, np.ndarray) else field.vector(v)
        if v.shape != (self.ambient_dim,):
            raise DimensionMismatch("vector has wrong length")
        stacked = np.concatenate([self.basis.a, v.reshape(1, -1)], axis=0)
        _, rk, _ = rref(Matrix(field, stacked, _canonical=True))
        return rk == self.dim

    def contains(self, other: "Subspace") -> bool:
        return subspace_contains(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash(("Subspace", self.ambient_dim, self.basis.key()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_sum(spaces: Sequence[Subspace]) -> Subspace:
    """Sum of subspaces of a common ambient space."""
    if not spaces:
        raise ValueError("empty subspace sum")
    first = spaces[0]
    for s in spaces[1:]:
        if s.field != first.field or s.ambient_dim != first.ambient_dim:
            raise DimensionMismatch("subspace sum over mismatched spaces")
    stacked = np.concatenate([s.basis.a for s in spaces], axis=0)
    return Subspace.from_rows(
        first.field, first.ambient_dim, Matrix(first.field, stacked, _canonical=True)
    )


def subspace_contains(u: Subspace, v: Subspace) -> bool:
    """True iff v is contained in u."""
    if u.field != v.field or u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch("containment over mismatched spaces")
    if v.dim > u.dim:
        return False
    stacked = np.concatenate([u.basis.a, v.basis.a], axis=0)
    _, rk, _ = rref(Matrix(u.field, stacked, _canonical=True))
    return rk == u.dim


def orth_complement(u: Subspace) -> Subspace:
    """All w with <b, w> = 0 for every basis vector b of u.

    Over GF(p) the complement may intersect u; only dim(U) + dim(U^perp)
    = n and the orthogonality itself are guaranteed.
    """
    if u.dim == 0:
        return Subspace.full(u.field, u.ambient_dim)
    return nullspace(u.basis)


def apply_to_subspace(g: Matrix, u: Subspace) -> Subspace:
    """Image {g v : v in u}."""
    if g.field != u.field or g.cols != u.ambient_dim:
        raise DimensionMismatch("matrix/subspace mismatch")
    img = u.basis @ g.T
    return Subspace.from_rows(u.field, g.rows, img)
