"""Simultaneous kernels of Hadamard powers.

"All n >= 0" is truncated at n < N: the powers beyond N - 1 are combinations
of the first N, so the intersection has stabilised by then.  The longer sweep
in :func:`verify_t3pmp` is a redundancy check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidCoefficients, RefinementHypothesisFailed, ShapeError, VerificationFailed
from .matrix import (
    KernelBasis,
    Matrix,
    direct_sum,
    hadamard_power,
    kernel_basis,
    stacked_kernel,
    subspace_equal,
)
from .groups import GroupSpec
from .partitions import Partition
from .pmp import _require_hermitian, is_k_pmp
from .scalars import RATIONAL, PrimeField
from .strata import pi_min


def ker_block_ones(p: Partition, domain=None) -> KernelBasis:
    """Kernel of the block-diagonal all-ones matrix: blockwise sum-zero vectors.

    Basis ``e_min(I_j) - e_i`` for every non-minimal ``i`` in each block.
    """
    dom = domain or RATIONAL
    vecs = []
    for b in p.blocks:
        for i in b[1:]:
            v = [dom.zero] * p.n
            v[b[0]] = dom.one
            v[i] = -dom.one
            vecs.append(tuple(v))
    return KernelBasis(p.n, tuple(vecs), dom)


def power_kernel(A: Matrix, upto: int) -> KernelBasis:
    """Intersection of ``ker A^{on}`` for ``0 <= n < upto``."""
    return stacked_kernel([hadamard_power(A, n) for n in range(upto)])


def simultaneous_kernel(A: Matrix) -> KernelBasis:
    """Intersection of the kernels of the first N Hadamard powers (0-th = all ones)."""
    return power_kernel(A, A.ncols)


def stratification_partition(A: Matrix) -> Partition:
    """``pi^{{1}}(A)``: the coarsest partition with constant block submatrices."""
    return pi_min(A, GroupSpec.trivial())


def _block_diagonal_power(A: Matrix, p: Partition, n: int) -> Matrix:
    blocks = [hadamard_power(A.submatrix(b, b), n) for b in p.blocks]
    D = direct_sum(*blocks)
    # back to original index order
    order = [i for b in p.blocks for i in b]
    pos = {orig: s for s, orig in enumerate(order)}
    rows = [[D.rows[pos[i]][pos[j]] for j in range(p.n)] for i in range(p.n)]
    return Matrix._wrap(rows, A.domain)


def simultaneous_kernel_blockdiag(A: Matrix, coarse: Partition, upto: int | None = None) -> KernelBasis:
    """Simultaneous kernel of ``diag(A^{on}_{I'_j x I'_j})`` for a coarsening of ``pi^{{1}}(A)``."""
    fine = stratification_partition(A)
    if not fine.is_refinement_of(coarse):
        raise RefinementHypothesisFailed(f"{fine} does not refine {coarse}")
    upto = A.ncols if upto is None else upto
    return stacked_kernel([_block_diagonal_power(A, coarse, n) for n in range(upto)])


def positive_combination_kernel(A: Matrix, coeffs: Sequence) -> KernelBasis:
    """Kernel of ``sum_j c_j A^{oj}`` for strictly positive ``c_0 .. c_{N-1}``."""
    n = A.ncols
    if len(coeffs) != n:
        raise InvalidCoefficients(f"need {n} coefficients, got {len(coeffs)}")
    dom = A.domain
    cs = [dom.coerce(c) for c in coeffs]
    scale = A.scale()
    if any(not dom.is_real(c, scale) or dom.real_sign(c, scale) <= 0 for c in cs):
        raise InvalidCoefficients("coefficients must be strictly positive")
    total = None
    for j, c in enumerate(cs):
        term = hadamard_power(A, j).scaled(c)
        total = term if total is None else total + term
    return kernel_basis(total)


@dataclass(frozen=True)
class RectangularKernel:
    """Simultaneous kernel of the Hadamard powers of a rectangular matrix.

    ``column_partition`` groups identical columns.  ``kernel`` is the
    intersection over rows of the blockwise sum-zero spaces of each row's own
    value classes.  ``partition_formula_exact`` records whether the sum-zero
    space of ``column_partition`` alone already equals ``kernel``; it is always
    contained in it, and is equal for a single row, but not in general.
    """

    column_partition: Partition
    kernel: KernelBasis
    partition_formula_exact: bool

    def __iter__(self):
        return iter((self.column_partition, self.kernel))


def row_value_partition(row: Sequence) -> Partition:
    return Partition.from_labels(list(row))


def rectangular_simultaneous_kernel(M: Matrix) -> RectangularKernel:
    dom = M.domain
    if not dom.exact:
        raise ShapeError("rectangular recipe needs an exact field")
    n = M.ncols
    cols = list(zip(*M.rows))
    column_partition = Partition.from_labels(cols)
    indicator_rows = []
    for row in M.rows:
        for blk in row_value_partition(row).blocks:
            indicator_rows.append([dom.one if i in blk else dom.zero for i in range(n)])
    kernel = kernel_basis(Matrix._wrap(indicator_rows, dom))
    formula = ker_block_ones(column_partition, dom)
    return RectangularKernel(column_partition, kernel, subspace_equal(formula, kernel))


def brute_force_rect_kernel(M: Matrix) -> KernelBasis:
    """Stacked kernel of ``M^{on}`` over enough powers to be safe in GF(p) as well."""
    sweep = M.ncols
    if isinstance(M.domain, PrimeField):
        sweep = max(sweep, M.domain.p)
    return power_kernel(M, sweep)


def distinct_diagonal_check(A: Matrix) -> tuple[bool, KernelBasis]:
    """``(hypothesis, kernel)``; if ``a_ii != a_ij`` for all ``i < j`` the kernel must be {0}."""
    if not A.is_square:
        raise ShapeError("distinct-diagonal check needs a square matrix")
    r = A.rows
    n = A.nrows
    dom = A.domain
    scale = A.scale()
    hyp = all(not dom.eq(r[i][i], r[i][j], scale) for i in range(n) for j in range(i + 1, n))
    K = simultaneous_kernel(A)
    if hyp and not K.is_zero():
        raise VerificationFailed("distinct diagonal entries but nonzero simultaneous kernel")
    return hyp, K


SPACE_NAMES = ("powers_lt_N", "powers_lt_2N", "block_diagonal", "block_ones")


@dataclass(frozen=True)
class T3pmpReport:
    is_three_pmp: bool
    partition: Partition
    coarse_partition: Partition
    spaces: dict
    equal: tuple[tuple[bool, ...], ...]

    @property
    def all_equal(self) -> bool:
        return all(all(r) for r in self.equal)

    def to_json(self) -> dict:
        return {
            "is_three_pmp": self.is_three_pmp,
            "partition": self.partition.to_json(),
            "coarse_partition": self.coarse_partition.to_json(),
            "spaces": {k: v.to_json() for k, v in self.spaces.items()},
            "equal": [list(r) for r in self.equal],
            "all_equal": self.all_equal,
        }


def verify_t3pmp(A: Matrix) -> T3pmpReport:
    """Compute the four kernel descriptions and their pairwise equality table.

    Spaces, in order: powers below N, powers below 2N, block-diagonal powers
    along ``pi`` with its first two blocks merged, and the blockwise sum-zero
    space of ``pi = pi^{{1}}(A)``.
    """
    H = _require_hermitian(A)
    n = H.nrows
    three = bool(is_k_pmp(H, min(3, n)))
    p = stratification_partition(H)
    coarse = p.merge([[0, 1]] + [[j] for j in range(2, p.m)]) if p.m >= 2 else p
    spaces = {
        "powers_lt_N": simultaneous_kernel(H),
        "powers_lt_2N": power_kernel(H, 2 * n),
        "block_diagonal": simultaneous_kernel_blockdiag(H, coarse, 2 * n),
        "block_ones": ker_block_ones(p, H.domain),
    }
    vals = [spaces[k] for k in SPACE_NAMES]
    table = tuple(tuple(subspace_equal(a, b) for b in vals) for a in vals)
    return T3pmpReport(three, p, coarse, spaces, table)

