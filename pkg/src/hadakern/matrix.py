"""Dense matrices over the scalar tower and the exact linear algebra on them.

Indices are 0-based throughout the Python API.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidIndexSet, ShapeError, SymmetryError
from .scalars import (
    GAUSSIAN,
    RATIONAL,
    Domain,
    FloatDomain,
    GaussianRational,
    float_scale,
    infer_domain,
)


class Matrix:
    """Immutable rectangular matrix over a single scalar domain."""

    __slots__ = ("rows", "domain", "nrows", "ncols")

    def __init__(self, entries: Sequence[Sequence], domain: Domain | None = None):
        entries = [list(r) for r in entries]
        if not entries or not entries[0]:
            raise ShapeError("matrix must have at least one row and one column")
        ncols = len(entries[0])
        if any(len(r) != ncols for r in entries):
            raise ShapeError("ragged rows")
        if domain is None:
            domain = infer_domain(v for r in entries for v in r)
        self.domain = domain
        self.rows = tuple(tuple(domain.coerce(v) for v in r) for r in entries)
        self.nrows = len(entries)
        self.ncols = ncols

    @classmethod
    def _wrap(cls, rows, domain):
        # trusted fast path: rows already coerced
        obj = Matrix.__new__(Matrix)
        obj.rows = tuple(tuple(r) for r in rows)
        obj.domain = domain
        obj.nrows = len(obj.rows)
        obj.ncols = len(obj.rows[0])
        return obj

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def entries(self):
        for r in self.rows:
            yield from r

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.domain.exact and other.domain.exact:
            return self.rows == other.rows
        scale = self.scale()
        dom = self.domain if not self.domain.exact else other.domain
        return all(
            dom.eq(a, b, scale) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.rows, self.domain))

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self.rows)
        return f"{type(self).__name__}<{self.domain.name}>[{body}]"

    def scale(self) -> float:
        if self.domain.exact:
            return 1.0
        return float_scale(self.entries())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        if not rows or not cols:
            raise InvalidIndexSet("empty index set")
        return Matrix._wrap([[self.rows[i][j] for j in cols] for i in rows], self.domain)

    def principal(self, idx: Sequence[int]):
        sub = self.submatrix(idx, idx)
        if isinstance(self, HermitianMatrix):
            return HermitianMatrix._trusted(sub)
        return sub

    def transpose(self) -> Matrix:
        return Matrix._wrap(list(zip(*self.rows)), self.domain)

    def conj_transpose(self) -> Matrix:
        c = self.domain.conj
        return Matrix._wrap([[c(v) for v in col] for col in zip(*self.rows)], self.domain)

    def map(self, fn) -> Matrix:
        return Matrix._wrap([[fn(v) for v in r] for r in self.rows], self.domain)

    def __add__(self, other: Matrix) -> Matrix:
        _same_shape(self, other)
        return _like(self, other, [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        _same_shape(self, other)
        return _like(self, other, [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def scaled(self, c) -> Matrix:
        c = self.domain.coerce(c)
        out = Matrix._wrap([[c * v for v in r] for r in self.rows], self.domain)
        if isinstance(self, HermitianMatrix) and self.domain.is_real(c):
            return HermitianMatrix._trusted(out)
        return out

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.domain != other.domain:
            raise ShapeError("domain mismatch in product")
        cols = list(zip(*other.rows))
        zero = self.domain.zero
        out = [[sum((a * b for a, b in zip(r, c)), zero) for c in cols] for r in self.rows]
        return Matrix._wrap(out, self.domain)

    def apply(self, v: Sequence) -> tuple:
        zero = self.domain.zero
        return tuple(sum((a * b for a, b in zip(r, v)), zero) for r in self.rows)

    def hadamard(self, other: Matrix) -> Matrix:
        _same_shape(self, other)
        return _like(self, other, [[a * b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(v) for v in r] for r in self.rows], dtype=complex)

    def as_hermitian(self) -> HermitianMatrix:
        return HermitianMatrix(self.rows, self.domain)


class HermitianMatrix(Matrix):
    """Square matrix with ``a[i][j] == conj(a[j][i])``.

    Exact input that is not Hermitian is rejected.  Float input within
    tolerance is symmetrized.
    """

    __slots__ = ()

    def __init__(self, entries, domain: Domain | None = None):
        super().__init__(entries, domain)
        if self.nrows != self.ncols:
            raise ShapeError(f"Hermitian matrix must be square, got {self.shape}")
        dom = self.domain
        n = self.nrows
        conj = dom.conj
        if dom.exact:
            for i in range(n):
                for j in range(i, n):
                    if self.rows[i][j] != conj(self.rows[j][i]):
                        raise SymmetryError(f"entry ({i}, {j}) is not the conjugate of ({j}, {i})")
            return
        scale = self.scale()
        rows = [list(r) for r in self.rows]
        for i in range(n):
            for j in range(i, n):
                a, b = rows[i][j], conj(rows[j][i])
                if not dom.eq(a, b, scale):
                    raise SymmetryError(f"entry ({i}, {j}) differs from conj of ({j}, {i}) beyond tolerance")
                m = (a + b) / 2
                if i == j:
                    m = complex(m.real, 0.0)
                rows[i][j] = m
                rows[j][i] = conj(m)
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def _trusted(cls, m: Matrix) -> HermitianMatrix:
        obj = HermitianMatrix.__new__(HermitianMatrix)
        obj.rows = m.rows
        obj.domain = m.domain
        obj.nrows = m.nrows
        obj.ncols = m.ncols
        return obj

    @property
    def n(self) -> int:
        return self.nrows


def _same_shape(a: Matrix, b: Matrix):
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")


def _like(a: Matrix, b: Matrix, rows) -> Matrix:
    out = Matrix._wrap(rows, a.domain)
    if isinstance(a, HermitianMatrix) and isinstance(b, HermitianMatrix):
        return HermitianMatrix._trusted(out)
    return out


def identity(n: int, domain: Domain = RATIONAL) -> HermitianMatrix:
    z, o = domain.zero, domain.one
    return HermitianMatrix._trusted(Matrix._wrap([[o if i == j else z for j in range(n)] for i in range(n)], domain))


def ones(m: int, n: int | None = None, domain: Domain = RATIONAL) -> Matrix:
    n = m if n is None else n
    out = Matrix._wrap([[domain.one] * n for _ in range(m)], domain)
    return HermitianMatrix._trusted(out) if m == n else out


def zeros(m: int, n: int | None = None, domain: Domain = RATIONAL) -> Matrix:
    n = m if n is None else n
    out = Matrix._wrap([[domain.zero] * n for _ in range(m)], domain)
    return HermitianMatrix._trusted(out) if m == n else out


def direct_sum(*blocks: Matrix) -> Matrix:
    """Block-diagonal matrix; Hermitian when every block is."""
    blocks = [b for b in blocks if b is not None]
    dom = blocks[0].domain
    n_cols = sum(b.ncols for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append([dom.zero] * off + list(r) + [dom.zero] * (n_cols - off - b.ncols))
        off += b.ncols
    out = Matrix._wrap(rows, dom)
    if all(isinstance(b, HermitianMatrix) for b in blocks):
        return HermitianMatrix._trusted(out)
    return out


def vstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ShapeError("nothing to stack")
    ncols = mats[0].ncols
    dom = mats[0].domain
    for m in mats:
        if m.ncols != ncols:
            raise ShapeError(f"column count mismatch: {m.ncols} vs {ncols}")
        if m.domain != dom:
            raise ShapeError("domain mismatch in stack")
    return Matrix._wrap([r for m in mats for r in m.rows], dom)


def hadamard_power(A: Matrix, n: int) -> Matrix:
    """Entrywise ``n``-th power; ``n == 0`` gives the all-ones matrix (0**0 == 1)."""
    if n < 0:
        raise ValueError("Hadamard exponent must be non-negative")
    if n == 0:
        out = Matrix._wrap([[A.domain.one] * A.ncols for _ in range(A.nrows)], A.domain)
    elif n == 1:
        out = Matrix._wrap(A.rows, A.domain)
    else:
        out = Matrix._wrap([[v ** n for v in r] for r in A.rows], A.domain)
    if isinstance(A, HermitianMatrix):
        return HermitianMatrix._trusted(out)
    return out


# -- elimination -------------------------------------------------------------


def _pivot_row(rows, col, start, dom, scale):
    if dom.exact:
        for r in range(start, len(rows)):
            if rows[r][col]:
                return r
        return None
    best, best_abs = None, 0.0
    for r in range(start, len(rows)):
        a = abs(rows[r][col])
        if a > best_abs:
            best, best_abs = r, a
    if best is None or dom.is_zero(rows[best][col], scale):
        return None
    return best


def determinant(A: Matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    if not A.is_square:
        raise ShapeError("determinant of a non-square matrix")
    dom = A.domain
    if not dom.exact:
        return complex(np.linalg.det(A.to_numpy()))
    n = A.nrows
    M = [list(r) for r in A.rows]
    sign = 1
    prev = dom.one
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return dom.zero
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pkk = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            mik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pkk - mik * rowk[j]) / prev
        prev = pkk
    det = M[n - 1][n - 1]
    return det if sign > 0 else -det


def principal_minor(A: Matrix, index_set: Iterable[int]):
    """Determinant of the principal submatrix on ``index_set`` (0-based)."""
    idx = sorted(set(index_set))
    if not idx:
        raise InvalidIndexSet("empty index set")
    if idx[0] < 0 or idx[-1] >= A.nrows:
        raise InvalidIndexSet(f"index out of range in {idx}")
    if len(idx) == 1:
        return A.rows[idx[0]][idx[0]]
    return determinant(A.submatrix(idx, idx))


def rref(A: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (exact domains) and the pivot columns."""
    dom = A.domain
    M = [list(r) for r in A.rows]
    nrows, ncols = A.shape
    scale = A.scale()
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = _pivot_row(M, c, r, dom, scale)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = dom.one / M[r][c]
        M[r] = [v * inv for v in M[r]]
        pivot_row = M[r]
        for i in range(nrows):
            if i != r:
                f = M[i][c]
                if f:
                    M[i] = [a - f * b for a, b in zip(M[i], pivot_row)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination on ``[A | I]``."""
    if not A.is_square:
        raise ShapeError("inverse of a non-square matrix")
    n = A.nrows
    dom = A.domain
    aug = Matrix._wrap(
        [list(r) + [dom.one if i == j else dom.zero for j in range(n)] for i, r in enumerate(A.rows)], dom
    )
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._wrap([r[n:] for r in R[:n]], dom)


def permute_symmetric(A: Matrix, perm: Sequence[int]) -> Matrix:
    """``B[s][t] = A[perm[s]][perm[t]]``; Hermitian-ness is preserved."""
    out = Matrix._wrap([[A.rows[i][j] for j in perm] for i in perm], A.domain)
    return HermitianMatrix._trusted(out) if isinstance(A, HermitianMatrix) else out


def _float_svd_rank(A: Matrix) -> tuple[int, np.ndarray]:
    arr = A.to_numpy()
    _, s, vh = np.linalg.svd(arr)
    tol = A.domain.tolerance * max(1.0, float(s[0]) if s.size else 1.0)
    r = int(np.sum(s > tol))
    return r, vh


def rank(A: Matrix) -> int:
    if not A.domain.exact:
        return _float_svd_rank(A)[0]
    return len(rref(A)[1])


@dataclass(frozen=True)
class KernelBasis:
    """Linearly independent vectors spanning a subspace of ``domain**ambient``.

    An empty ``vectors`` tuple is the zero subspace.
    """

    ambient: int
    vectors: tuple
    domain: Domain

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def is_zero(self) -> bool:
        return not self.vectors

    def as_matrix(self) -> Matrix | None:
        if not self.vectors:
            return None
        return Matrix._wrap(self.vectors, self.domain)

    def canonical(self) -> KernelBasis:
        """Reduced row echelon form of the basis; unique per subspace (exact domains)."""
        if not self.vectors or not self.domain.exact:
            return self
        rows, _ = rref(Matrix._wrap(self.vectors, self.domain))
        return KernelBasis(self.ambient, tuple(tuple(r) for r in rows), self.domain)

    def contains(self, v: Sequence) -> bool:
        v = tuple(self.domain.coerce(x) for x in v)
        if len(v) != self.ambient:
            raise ShapeError("vector length differs from ambient dimension")
        if all(self.domain.is_zero(x) for x in v):
            return True
        if not self.vectors:
            return False
        return rank(Matrix._wrap(list(self.vectors) + [v], self.domain)) == self.dim

    def to_json(self) -> dict:
        enc = self.domain.to_json
        return {
            "ambient": self.ambient,
            "dim": self.dim,
            "domain": self.domain.name,
            "vectors": [[enc(x) for x in v] for v in self.vectors],
        }


def kernel_basis(A: Matrix) -> KernelBasis:
    """Canonical basis of the right kernel ``{v : A v = 0}``."""
    dom = A.domain
    n = A.ncols
    if not dom.exact:
        r, vh = _float_svd_rank(A)
        vecs = tuple(tuple(complex(x) for x in np.conj(vh[i])) for i in range(r, n))
        return KernelBasis(n, vecs, dom)
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [dom.zero] * n
        v[f] = dom.one
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        vecs.append(tuple(v))
    return KernelBasis(n, tuple(vecs), dom).canonical()


def stacked_kernel(mats: Sequence[Matrix]) -> KernelBasis:
    """Basis of the intersection of the kernels of ``mats``."""
    return kernel_basis(vstack(list(mats)))


def subspace_equal(b1: KernelBasis, b2: KernelBasis) -> bool:
    if b1.ambient != b2.ambient:
        raise ShapeError(f"ambient dimension mismatch {b1.ambient} vs {b2.ambient}")
    if b1.dim != b2.dim:
        return False
    if b1.dim == 0:
        return True
    if b1.domain.exact and b2.domain.exact:
        return b1.canonical().vectors == b2.canonical().vectors
    joint = Matrix._wrap(list(b1.vectors) + list(b2.vectors), b1.domain if not b1.domain.exact else b2.domain)
    return rank(joint) == b1.dim


def subspace_contains(big: KernelBasis, small: KernelBasis) -> bool:
    """True iff span(small) is a subspace of span(big)."""
    if big.ambient != small.ambient:
        raise ShapeError("ambient dimension mismatch")
    if small.dim == 0:
        return True
    if big.dim < small.dim:
        return False
    joint = Matrix._wrap(list(big.vectors) + list(small.vectors), big.domain)
    return rank(joint) == big.dim


# -- inertia -----------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    n_plus: int
    n_zero: int
    n_minus: int

    def __iter__(self):
        return iter((self.n_plus, self.n_zero, self.n_minus))

    @property
    def n(self) -> int:
        return self.n_plus + self.n_zero + self.n_minus

    def to_json(self):
        return {"n_plus": self.n_plus, "n_zero": self.n_zero, "n_minus": self.n_minus}


def charpoly(A: Matrix) -> list:
    """Coefficients ``[c0, c1, ..., cN]`` of ``det(x I - A)`` (Faddeev-LeVerrier)."""
    if not A.is_square:
        raise ShapeError("characteristic polynomial of a non-square matrix")
    n = A.nrows
    dom = A.domain
    zero, one = dom.zero, dom.one
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    a = [list(r) for r in A.rows]
    m = [[zero] * n for _ in range(n)]  # M_0 = 0
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = [[sum((a[i][t] * m[t][j] for t in range(n)), zero) for j in range(n)] for i in range(n)]
        c_prev = coeffs[n - k + 1]
        for i in range(n):
            prod[i][i] = prod[i][i] + c_prev
        m = prod
        tr = sum((sum((a[i][t] * m[t][i] for t in range(n)), zero) for i in range(n)), zero)
        coeffs[n - k] = -tr / k
    return coeffs


def _sign_changes(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def signature(A: Matrix) -> Signature:
    """Inertia ``(n_plus, n_zero, n_minus)`` of a Hermitian matrix.

    Exact domains count sign variations of the characteristic polynomial,
    which is real-rooted, so Descartes' rule is exact.
    """
    if not isinstance(A, HermitianMatrix):
        try:
            A = HermitianMatrix(A.rows, A.domain)
        except (SymmetryError, ShapeError) as exc:
            raise SymmetryError(f"signature needs a Hermitian matrix: {exc}") from exc
    dom = A.domain
    n = A.nrows
    if not dom.exact:
        w = np.linalg.eigvalsh(A.to_numpy())
        tol = dom.tolerance * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
        plus = int(np.sum(w > tol))
        minus = int(np.sum(w < -tol))
        return Signature(plus, n - plus - minus, minus)
    coeffs = charpoly(A)
    if dom == GAUSSIAN:
        if any(c.im for c in coeffs):
            raise SymmetryError("characteristic polynomial is not real")
        coeffs = [c.re for c in coeffs]
    elif isinstance(coeffs[0], GaussianRational):
        coeffs = [c.re for c in coeffs]
    n_zero = 0
    while n_zero <= n and coeffs[n_zero] == 0:
        n_zero += 1
    trimmed = coeffs[n_zero:]
    signs = [(c > 0) - (c < 0) for c in trimmed]
    n_plus = _sign_changes(signs)
    n_minus = _sign_changes([s if k % 2 == 0 else -s for k, s in enumerate(signs)])
    if n_plus + n_zero + n_minus != n:
        raise SymmetryError("characteristic polynomial is not real-rooted")
    return Signature(n_plus, n_zero, n_minus)


def rank_by_minors(A: Matrix) -> int:
    """Largest size of a non-vanishing minor; brute force, test oracle only."""
    for size in range(min(A.shape), 0, -1):
        for rows in combinations(range(A.nrows), size):
            for cols in combinations(range(A.ncols), size):
                if determinant(A.submatrix(rows, cols)):
                    return size
    return 0


def real_part(x) -> Fraction:
    return x.re if isinstance(x, GaussianRational) else x


def is_float_domain(dom: Domain) -> bool:
    return isinstance(dom, FloatDomain)
