"""Matrix families with machine-checkable certificates, plus seeded corpora.

Where a construction needs "epsilon small enough", epsilon starts at 1 and is
halved until the certificate passes.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InvalidGenerator, VerificationFailed
from .kernels import simultaneous_kernel, stratification_partition
from .matrix import (
    GAUSSIAN,
    RATIONAL,
    HermitianMatrix,
    Matrix,
    direct_sum,
    identity,
    inverse,
    kernel_basis,
    ones,
    permute_symmetric,
    rank,
    signature,
    zeros,
)
from .pmp import _minor_value, is_k_pmp, is_k_psrp, pmp_order
from .partitions import Partition
from .scalars import GaussianRational
from .strata import block_inflate

MAX_HALVINGS = 80

I_UNIT = GaussianRational(0, 1)


def _herm(rows, dom=RATIONAL) -> HermitianMatrix:
    return HermitianMatrix(rows, dom)


def gen_lambda_shift(n: int, lam) -> HermitianMatrix:
    """``lam * Id_n - ones_n``."""
    if n < 1:
        raise InvalidGenerator("n must be positive")
    lam = Fraction(lam)
    return _herm([[lam - 1 if i == j else Fraction(-1) for j in range(n)] for i in range(n)])


def lambda_shift_expected_order(n: int, lam) -> int:
    """The PMP order implied by lam lying in [k-1, k)."""
    lam = Fraction(lam)
    if lam < 0:
        return 0
    return min(n, lam.numerator // lam.denominator)


def certify_lambda_shift(A: Matrix, n: int, lam) -> dict[str, bool]:
    k = lambda_shift_expected_order(n, lam)
    return {"pmp_order": pmp_order(A) == k}


def gen_vandermonde_psd(l: int, m: int, u: Sequence | None = None) -> HermitianMatrix:
    """``sum_{i<m} u^{oi} (u^{oi})^T``: PSD, rank m, leading minors up to size m positive."""
    if not 1 <= m <= l:
        raise InvalidGenerator(f"need 1 <= m <= l, got m={m}, l={l}")
    u = [Fraction(x) for x in (u if u is not None else range(1, l + 1))]
    if len(u) != l:
        raise InvalidGenerator(f"u must have {l} entries")
    if any(x == 0 for x in u) or len(set(u)) != l:
        raise InvalidGenerator("entries of u must be distinct and nonzero")
    rows = [[sum((u[a] ** i * u[b] ** i for i in range(m)), Fraction(0)) for b in range(l)] for a in range(l)]
    return _herm(rows)


def certify_vandermonde_psd(A: Matrix, m: int) -> dict[str, bool]:
    H = HermitianMatrix._trusted(A)
    small_positive = all(
        _minor_value(H, idx) > 0
        for size in range(1, m + 1)
        for idx in combinations(range(H.nrows), size)
    )
    return {"psd": pmp_order(H) == H.nrows, "rank": rank(H) == m, "minors_positive": small_positive}


def _projection_onto_kernel(B: Matrix) -> Matrix:
    K = kernel_basis(B)
    n = B.nrows
    if K.is_zero():
        return zeros(n, n, B.domain)
    V = Matrix._wrap(list(zip(*K.vectors)), B.domain)  # n x d, columns span ker B
    Vt = V.transpose()
    return V @ inverse(Vt @ V) @ Vt


def _signature_block_ok(B: Matrix, k: int) -> bool:
    H = HermitianMatrix._trusted(B)
    n = H.nrows
    for size in range(1, k + 1):
        for idx in combinations(range(n), size):
            if _minor_value(H, idx) <= 0:
                return False
    if k < n:
        for idx in combinations(range(n), k + 1):
            if _minor_value(H, idx) >= 0:
                return False
    return True


def gen_signature_example(n: int, k: int, n_plus: int, n_minus: int) -> tuple[HermitianMatrix, Fraction]:
    """A k-PMP, non-(k+1)-PMP matrix with signature ``(n_plus, n - n_plus - n_minus, n_minus)``.

    ``B - eps P`` on a block of size ``k + n_minus`` (``B`` PSD of rank k with
    positive small minors, ``P`` the projector onto ``ker B``), then
    ``Id_{n_plus - k}`` and a zero block.
    """
    if not (0 <= k < n and n_plus >= k and n_minus >= 1 and n_plus + n_minus <= n):
        raise InvalidGenerator(f"inadmissible signature request n={n}, k={k}, n+={n_plus}, n-={n_minus}")
    size = k + n_minus
    if k == 0:
        B = zeros(size, size, RATIONAL)
    else:
        B = gen_vandermonde_psd(size, k)
    P = _projection_onto_kernel(B)
    eps = Fraction(1)
    for _ in range(MAX_HALVINGS):
        B_eps = B - P.scaled(eps)
        if _signature_block_ok(B_eps, k):
            break
        eps /= 2
    else:
        raise VerificationFailed("no admissible epsilon found")
    parts = [HermitianMatrix._trusted(B_eps)]
    if n_plus - k:
        parts.append(identity(n_plus - k, RATIONAL))
    if n - n_plus - n_minus:
        parts.append(zeros(n - n_plus - n_minus, n - n_plus - n_minus, RATIONAL))
    return direct_sum(*parts), eps


def certify_signature_example(A: Matrix, n: int, k: int, n_plus: int, n_minus: int) -> dict[str, bool]:
    sig = signature(A)
    return {
        "signature": tuple(sig) == (n_plus, n - n_plus - n_minus, n_minus),
        "pmp_order": pmp_order(A) == k,
        "not_psd": sig.n_minus >= 1,
    }


def gen_psrp_gap(n: int, l: int, k: int) -> tuple[HermitianMatrix, Fraction]:
    """k-PMP ``[[A, B], [B^T, Id]]`` with rank A = k-1 whose first l rows span more than A does.

    Columns of ``B`` are ``eps`` times vectors of ``ker A`` taken from its
    echelon basis, reused cyclically when there are more columns than basis
    vectors.
    """
    if not 2 <= k <= l < n:
        raise InvalidGenerator(f"need 2 <= k <= l < n, got n={n}, l={l}, k={k}")
    A = gen_vandermonde_psd(l, k - 1)
    K = kernel_basis(A).vectors
    cols = [K[i % len(K)] for i in range(n - l)]
    eps = Fraction(1)
    for _ in range(MAX_HALVINGS):
        rows = []
        for a in range(l):
            rows.append(list(A.rows[a]) + [eps * c[a] for c in cols])
        for b in range(n - l):
            rows.append([eps * cols[b][a] for a in range(l)] + [Fraction(int(b == t)) for t in range(n - l)])
        M = _herm(rows)
        if is_k_pmp(M, k):
            return M, eps
        eps /= 2
    raise VerificationFailed("no admissible epsilon found")


def certify_psrp_gap(M: Matrix, n: int, l: int, k: int) -> dict[str, bool]:
    top = M.submatrix(list(range(l)), list(range(n)))
    A = M.submatrix(list(range(l)), list(range(l)))
    return {
        "k_pmp": bool(is_k_pmp(M, k)),
        "rank_A": rank(A) == k - 1,
        "rank_AB": rank(top) == min(l, k - 1 + n - l),
        "fails_l_psrp": not is_k_psrp(M, l),
    }


def gen_toeplitz_tridiag(n: int) -> HermitianMatrix:
    """0/1 matrix with ones where ``|i - j| <= 1``."""
    if n < 3:
        raise InvalidGenerator("Toeplitz family needs n >= 3")
    return _herm([[Fraction(int(abs(i - j) <= 1)) for j in range(n)] for i in range(n)])


def toeplitz_witness(n: int) -> tuple[Fraction, ...]:
    """``(1, -1, 0, 1, -1, 0, ..., 1, -1)`` for ``n = 3k + 2``."""
    if n % 3 != 2:
        raise InvalidGenerator("witness exists for n = 3k + 2 only")
    pattern = (Fraction(1), Fraction(-1), Fraction(0))
    return tuple(pattern[i % 3] for i in range(n))


def certify_toeplitz(A: Matrix) -> dict[str, bool]:
    n = A.nrows
    cert = {
        "pmp_order": pmp_order(A) == 2,
        "singleton_partition": stratification_partition(A).m == n,
    }
    if n % 3 == 2:
        cert["witness_in_kernel"] = simultaneous_kernel(A).contains(toeplitz_witness(n))
    return cert


def _g(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


NAMED_EXAMPLES = ("example5x5", "pmp2-6x6", "hns-fail-3x3", "pow2-psd")


def gen_named_example(name: str, n: int | None = None) -> HermitianMatrix:
    i = I_UNIT
    if name == "example5x5":
        r = [
            [2, 2, 1, -2 * i, 2],
            [2, 2, 1, -2 * i, 2],
            [1, 1, 1, -i, 1],
            [2 * i, 2 * i, i, 2, 2 * i],
            [2, 2, 1, -2 * i, 2],
        ]
        return _herm([[_g(x) for x in row] for row in r], GAUSSIAN)
    if name == "pmp2-6x6":
        return _herm([
            [2, 2, -2, 1, 1, -1],
            [2, 2, 2, 1, 1, 1],
            [-2, 2, 2, -1, 1, 1],
            [1, 1, -1, 2, 2, -2],
            [1, 1, 1, 2, 2, 2],
            [-1, 1, 1, -2, 2, 2],
        ])
    if name == "hns-fail-3x3":
        return _herm([[1, 1, -1], [1, 1, 1], [-1, 1, 1]])
    if name == "pow2-psd":
        n = 3 if n is None else n
        if n < 3:
            raise InvalidGenerator("pow2-psd needs n >= 3")
        head = _herm([[1, 2], [2, 8]])
        return direct_sum(head, identity(n - 2, RATIONAL))
    raise InvalidGenerator(f"unknown named example {name!r}; choose from {NAMED_EXAMPLES}")


def random_rational(rng: random.Random, bound: int = 10) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_gaussian(rng: random.Random, bound: int = 10) -> GaussianRational:
    return GaussianRational(random_rational(rng, bound), random_rational(rng, bound))


def gen_random_psd(n: int, r: int, seed: int, domain=GAUSSIAN, bound: int = 10) -> HermitianMatrix:
    """``V V^*`` with V an n x r matrix of bounded random entries."""
    if not 1 <= r <= n:
        raise InvalidGenerator("need 1 <= r <= n")
    rng = random.Random(seed)
    draw = (lambda: random_gaussian(rng, bound)) if domain == GAUSSIAN else (lambda: random_rational(rng, bound))
    V = Matrix([[draw() for _ in range(r)] for _ in range(n)], domain)
    return HermitianMatrix._trusted(V @ V.conj_transpose())


def gen_random_unimodular_hns(n: int, seed: int) -> HermitianMatrix:
    """``(QD) J (QD)^*`` for J a sum of all-ones / zero blocks and phases in {1, -1, i, -i}."""
    rng = random.Random(seed)
    sizes = []
    left = n
    while left:
        s = rng.randint(1, left)
        sizes.append(s)
        left -= s
    J = direct_sum(*[
        ones(s, s, GAUSSIAN) if rng.random() < 0.8 else zeros(s, s, GAUSSIAN) for s in sizes
    ])
    units = [GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1), GaussianRational(0, -1)]
    perm = list(range(n))
    rng.shuffle(perm)
    phases = [rng.choice(units) for _ in range(n)]
    P_rows = [[GAUSSIAN.zero] * n for _ in range(n)]
    for s, (orig, d) in enumerate(zip(perm, phases)):
        P_rows[orig][s] = d
    P = Matrix._wrap(P_rows, GAUSSIAN)
    return HermitianMatrix._trusted(P @ J @ P.conj_transpose())


def gen_block_inflation(C: HermitianMatrix, p: Partition) -> HermitianMatrix:
    """Matrix equal to ``c_ij`` on each block ``I_i x I_j``; preserves k-PMP and PSD."""
    if C.nrows != p.m:
        raise InvalidGenerator("compressed matrix size must equal the number of blocks")
    return block_inflate(C, p)


def random_partition(rng: random.Random, n: int, m: int) -> Partition:
    """Random partition of range(n) into exactly m blocks."""
    labels = list(range(m)) + [rng.randrange(m) for _ in range(n - m)]
    rng.shuffle(labels)
    return Partition.from_labels(labels)


def random_permutation_conjugate(A: Matrix, rng: random.Random) -> Matrix:
    perm = list(range(A.nrows))
    rng.shuffle(perm)
    return permute_symmetric(A, perm)


# -- corpora -------------------------------------------------------------------


def corpus_three_pmp(count: int, seed: int = 0, nmax: int = 7) -> list[HermitianMatrix]:
    """3-PMP matrices: random PSD (some inflated), and inflated signature examples with order >= 3."""
    rng = random.Random(seed)
    out = []
    sig_params = [
        (n, k, p, q)
        for n in range(4, nmax + 1)
        for k in range(3, n)
        for p in range(k, n)
        for q in range(1, n - p + 1)
    ]
    while len(out) < count:
        kind = len(out) % 4
        s = rng.randrange(10 ** 9)
        if kind == 0:
            n = rng.randint(1, nmax)
            out.append(gen_random_psd(n, rng.randint(1, n), s, GAUSSIAN if rng.random() < 0.5 else RATIONAL))
        elif kind == 1:
            n = rng.randint(2, nmax)
            m = rng.randint(1, n)
            C = gen_random_psd(m, rng.randint(1, m), s, GAUSSIAN if rng.random() < 0.5 else RATIONAL, bound=3)
            out.append(gen_block_inflation(C, random_partition(rng, n, m)))
        else:
            n, k, p, q = rng.choice(sig_params)
            A, _ = gen_signature_example(n, k, p, q)
            if kind == 3:
                extra = rng.randint(0, nmax - n)
                part = random_partition(rng, n + extra, n)
                A = gen_block_inflation(A, part)
            out.append(random_permutation_conjugate(A, rng))
    return out


def corpus_k_pmp(count: int, seed: int = 0, ks=(2, 3, 4), nmax: int = 8) -> list[tuple[HermitianMatrix, int]]:
    """``(A, k)`` pairs with A k-PMP, mixing PSD and non-PSD families."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        k = ks[len(out) % len(ks)]
        kind = rng.randrange(5)
        s = rng.randrange(10 ** 9)
        n = rng.randint(max(k, 2), nmax)
        if kind == 0:
            A = gen_random_psd(n, rng.randint(1, n), s, RATIONAL, bound=5)
        elif kind == 1 and k < n:
            p = rng.randint(k, n - 1)
            A, _ = gen_signature_example(n, k, p, rng.randint(1, n - p))
        elif kind == 2 and k < n and n <= 7:
            l = rng.randint(k, n - 1)
            A, _ = gen_psrp_gap(n, l, k)
        elif kind == 3:
            lam = Fraction(rng.randint(k * 4, k * 4 + 3), 4)
            A = gen_lambda_shift(n, lam)
        else:
            m = rng.randint(1, n)
            C = gen_random_psd(m, rng.randint(1, m), s, GAUSSIAN, bound=3)
            A = gen_block_inflation(C, random_partition(rng, n, m))
        out.append((random_permutation_conjugate(A, rng), k))
    return out


def corpus_hermitian(count: int, seed: int = 0, nmax: int = 6, alphabet=None) -> list[HermitianMatrix]:
    """Random Hermitian matrices over a small alphabet (many orbit coincidences)."""
    rng = random.Random(seed)
    i = I_UNIT
    alphabet = alphabet or [GaussianRational(x) for x in (0, 1, -1, 2, -2)] + [i, -i, 2 * i, 1 + i]
    out = []
    for _ in range(count):
        n = rng.randint(1, nmax)
        rows = [[GAUSSIAN.zero] * n for _ in range(n)]
        for a in range(n):
            rows[a][a] = GaussianRational(rng.choice(alphabet).re)
            for b in range(a + 1, n):
                v = rng.choice(alphabet)
                rows[a][b] = v
                rows[b][a] = v.conjugate()
        out.append(HermitianMatrix._trusted(Matrix._wrap(rows, GAUSSIAN)))
    return out
