"""Principal-minor positivity (k-PMP) and the k-principal-submatrix-rank property.

Exact verdicts need an ordered exact domain (rational or Gaussian rational).
For floats a minor within tolerance of zero counts as non-negative, since
k-PMP is a closed condition.

Minors are visited by size, then lexicographically by index set, so the
reported witness is deterministic.  Cost grows like C(N, k); the supported
exact envelope is roughly N <= 12 with k <= 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator

from .errors import InvalidOrder, NotApplicable, SymmetryError, UnsupportedDomainError
from .matrix import HermitianMatrix, Matrix, Signature, determinant, rank, signature
from .scalars import GaussianRational, PrimeField


@dataclass(frozen=True)
class Verdict:
    """Outcome of a predicate with the first violating index set (0-based)."""

    holds: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.holds

    def __iter__(self):
        return iter((self.holds, self.witness))


def _require_hermitian(A: Matrix) -> HermitianMatrix:
    if isinstance(A, HermitianMatrix):
        H = A
    else:
        try:
            H = HermitianMatrix(A.rows, A.domain)
        except Exception as exc:  # noqa: BLE001 - re-raised with context
            raise SymmetryError(f"expected a Hermitian matrix: {exc}") from exc
    if isinstance(H.domain, PrimeField):
        raise UnsupportedDomainError("principal minor positivity needs an ordered domain")
    return H


def _re(x):
    if isinstance(x, GaussianRational):
        return x.re
    if isinstance(x, complex):
        return x.real
    return x


def _minor_value(A: HermitianMatrix, idx: tuple[int, ...]):
    """Real value of a principal minor, closed forms for sizes 1 to 3."""
    r = A.rows
    abs2 = A.domain.abs2
    if len(idx) == 1:
        i = idx[0]
        return _re(r[i][i])
    if len(idx) == 2:
        i, j = idx
        return _re(r[i][i]) * _re(r[j][j]) - abs2(r[i][j])
    if len(idx) == 3:
        i, j, k = idx
        aii, ajj, akk = _re(r[i][i]), _re(r[j][j]), _re(r[k][k])
        cyc = _re(r[i][j] * r[j][k] * r[k][i])
        return (aii * ajj * akk + 2 * cyc
                - aii * abs2(r[j][k]) - ajj * abs2(r[i][k]) - akk * abs2(r[i][j]))
    return _re(determinant(A.submatrix(idx, idx)))


def _minor_sign(A: HermitianMatrix, idx: tuple[int, ...], scale: float) -> int:
    v = _minor_value(A, idx)
    if A.domain.exact:
        return (v > 0) - (v < 0)
    return A.domain.real_sign(complex(v), scale ** len(idx))


def principal_minor_signs(A: HermitianMatrix, size: int) -> Iterator[tuple[tuple[int, ...], int]]:
    scale = A.scale()
    for idx in combinations(range(A.nrows), size):
        yield idx, _minor_sign(A, idx, scale)


def is_k_pmp(A: Matrix, k: int) -> Verdict:
    """Whether every principal minor of size at most ``k`` is non-negative."""
    H = _require_hermitian(A)
    if not 1 <= k <= H.nrows:
        raise InvalidOrder(f"k must lie in [1, {H.nrows}], got {k}")
    for size in range(1, k + 1):
        for idx, s in principal_minor_signs(H, size):
            if s < 0:
                return Verdict(False, idx)
    return Verdict(True)


def pmp_order(A: Matrix) -> int:
    """Largest k such that A is k-PMP (0 if some diagonal entry is negative)."""
    H = _require_hermitian(A)
    for size in range(1, H.nrows + 1):
        for _, s in principal_minor_signs(H, size):
            if s < 0:
                return size - 1
    return H.nrows


def first_pmp_violation(A: Matrix) -> tuple[int, tuple[int, ...] | None]:
    """``(pmp_order, witness)`` where the witness is the first negative minor."""
    H = _require_hermitian(A)
    for size in range(1, H.nrows + 1):
        for idx, s in principal_minor_signs(H, size):
            if s < 0:
                return size - 1, idx
    return H.nrows, None


def is_psd(A: Matrix) -> bool:
    return signature(_require_hermitian(A)).n_minus == 0


def is_k_psrp(M: Matrix, k: int) -> Verdict:
    """k-PSRP: for every k-subset S, rank M[S,:] == rank M[:,S] == rank M[S,S]."""
    H = _require_hermitian(M)
    n = H.nrows
    if not 1 <= k <= n:
        raise InvalidOrder(f"k must lie in [1, {n}], got {k}")
    everything = list(range(n))
    for S in combinations(everything, k):
        r = rank(H.submatrix(S, S))
        if rank(H.submatrix(S, everything)) != r or rank(H.submatrix(everything, S)) != r:
            return Verdict(False, S)
    return Verdict(True)


@dataclass(frozen=True)
class PmpSignatureReport:
    k: int
    signature: Signature
    consistent: bool

    def to_json(self):
        return {"k": self.k, "signature": self.signature.to_json(), "consistent": self.consistent}


def check_pmp_signature(A: Matrix) -> PmpSignatureReport:
    """A k-PMP, non-(k+1)-PMP matrix has >= k positive and >= 1 negative eigenvalue."""
    H = _require_hermitian(A)
    k = pmp_order(H)
    if k == H.nrows:
        raise NotApplicable("matrix is positive semidefinite; there is no k < N with k-PMP but not (k+1)-PMP")
    sig = signature(H)
    return PmpSignatureReport(k, sig, sig.n_plus >= k and sig.n_minus >= 1)


def minors_of_size(A: Matrix, size: int) -> dict[tuple[int, ...], Fraction]:
    """All principal minors of one size, keyed by index set (exact domains)."""
    H = _require_hermitian(A)
    return {idx: _minor_value(H, idx) for idx in combinations(range(H.nrows), size)}
