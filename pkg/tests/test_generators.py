import random
from fractions import Fraction

import pytest

import oracles
from hadakern.errors import InvalidGenerator
from hadakern.generators import (
    certify_lambda_shift,
    certify_psrp_gap,
    certify_signature_example,
    certify_toeplitz,
    certify_vandermonde_psd,
    corpus_k_pmp,
    corpus_three_pmp,
    gen_lambda_shift,
    gen_named_example,
    gen_psrp_gap,
    gen_random_psd,
    gen_random_unimodular_hns,
    gen_signature_example,
    gen_toeplitz_tridiag,
    gen_vandermonde_psd,
)
from hadakern.matrix import Matrix, determinant, rank, signature
from hadakern.pmp import is_k_pmp, pmp_order
from hadakern.scalars import GaussianRational
from hadakern.strata import hns_decompose

I = GaussianRational(0, 1)


def test_lambda_shift_examples():
    A = gen_lambda_shift(3, Fraction(3, 2))
    assert pmp_order(A) == 1 and tuple(signature(A)) == (2, 0, 1)
    for n in range(1, 6):
        assert pmp_order(gen_lambda_shift(n, n)) == n
    # lam = 0 lies in [0, 1): 0-PMP and not 1-PMP
    assert gen_lambda_shift(1, 0).rows == ((-1,),)
    assert pmp_order(gen_lambda_shift(1, 0)) == 0
    assert gen_lambda_shift(1, 1).rows == ((0,),)
    assert pmp_order(gen_lambda_shift(1, 1)) == 1


def test_vandermonde_examples():
    A = gen_vandermonde_psd(3, 2, [1, 2, 3])
    assert A == Matrix([[2, 3, 4], [3, 5, 7], [4, 7, 10]])
    assert all(certify_vandermonde_psd(A, 2).values())
    assert determinant(A) == 0
    for l in range(1, 5):
        assert rank(gen_vandermonde_psd(l, l)) == l
    assert gen_vandermonde_psd(2, 1, [1, 2]) == Matrix([[1, 1], [1, 1]])
    with pytest.raises(InvalidGenerator):
        gen_vandermonde_psd(3, 2, [1, 1, 2])
    with pytest.raises(InvalidGenerator):
        gen_vandermonde_psd(3, 2, [0, 1, 2])


def test_psrp_gap_examples():
    M, eps = gen_psrp_gap(5, 3, 2)
    cert = certify_psrp_gap(M, 5, 3, 2)
    assert all(cert.values())
    assert rank(M.submatrix([0, 1, 2], [0, 1, 2])) == 1
    assert rank(M.submatrix([0, 1, 2], range(5))) == 3
    M, _ = gen_psrp_gap(4, 2, 2)
    assert rank(M.submatrix([0, 1], range(4))) == 2
    with pytest.raises(InvalidGenerator):
        gen_psrp_gap(4, 1, 2)


def test_signature_examples():
    A, eps = gen_signature_example(4, 2, 2, 1)
    assert tuple(signature(A)) == (2, 1, 1) and pmp_order(A) == 2
    assert eps == Fraction(1, 16)
    A, eps = gen_signature_example(3, 0, 0, 3)
    assert tuple(signature(A)) == (0, 0, 3) and pmp_order(A) == 0
    for n in range(2, 7):
        A, _ = gen_signature_example(n, n - 1, n - 1, 1)
        assert signature(A).n_minus == 1
    with pytest.raises(InvalidGenerator):
        gen_signature_example(4, 2, 1, 1)


def test_toeplitz_examples():
    for n in (3, 4, 5, 8):
        assert all(certify_toeplitz(gen_toeplitz_tridiag(n)).values())
    assert determinant(gen_toeplitz_tridiag(3)) == -1
    with pytest.raises(InvalidGenerator):
        gen_toeplitz_tridiag(2)


def test_named_examples_entries():
    A = gen_named_example("example5x5")
    assert A.rows[0] == (2, 2, 1, -2 * I, 2)
    assert A.rows[3] == (2 * I, 2 * I, I, 2, 2 * I)
    B = gen_named_example("pmp2-6x6")
    assert B.rows[2] == (-2, 2, 2, -1, 1, 1)
    assert gen_named_example("hns-fail-3x3") == Matrix([[1, 1, -1], [1, 1, 1], [-1, 1, 1]])
    assert gen_named_example("pow2-psd", 4) == Matrix([[1, 2, 0, 0], [2, 8, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(InvalidGenerator):
        gen_named_example("nope")


def test_random_generators_are_deterministic():
    assert gen_random_psd(4, 2, 9) == gen_random_psd(4, 2, 9)
    assert gen_random_unimodular_hns(6, 9) == gen_random_unimodular_hns(6, 9)
    assert corpus_three_pmp(10, 3) == corpus_three_pmp(10, 3)
    assert gen_random_psd(4, 2, 9) != gen_random_psd(4, 2, 10)


def test_random_psd_rank_and_signature():
    for seed in range(30):
        A = gen_random_psd(4, 2, seed)
        r = rank(A)
        assert r <= 2 and tuple(signature(A)) == (r, 4 - r, 0)
        assert tuple(signature(A)) == oracles.inertia_numeric(A)
    assert rank(gen_random_psd(4, 4, 1)) == 4


@pytest.mark.parametrize("seed", range(100))
def test_every_family_certifies(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    lam = Fraction(rng.randint(0, 4 * n), 4)
    assert all(certify_lambda_shift(gen_lambda_shift(n, lam), n, lam).values())
    l = rng.randint(1, 4)
    m = rng.randint(1, l)
    assert all(certify_vandermonde_psd(gen_vandermonde_psd(l, m), m).values())
    k = rng.randint(2, 4)
    l = rng.randint(k, 4)
    n = rng.randint(l + 1, min(8, l + 3))
    M, _ = gen_psrp_gap(n, l, k)
    assert all(certify_psrp_gap(M, n, l, k).values())
    n = rng.randint(2, 7)
    k = rng.randint(0, min(4, n - 1))
    n_plus = rng.randint(k, n - 1)
    n_minus = rng.randint(1, n - n_plus)
    A, _ = gen_signature_example(n, k, n_plus, n_minus)
    assert all(certify_signature_example(A, n, k, n_plus, n_minus).values())
    assert signature(A).n_minus >= 1
    H = gen_random_unimodular_hns(rng.randint(1, 8), seed)
    d = hns_decompose(H)
    assert d.conjugate(H) == d.canonical_form()


def test_corpora_have_the_advertised_property():
    for A in corpus_three_pmp(40, seed=8):
        assert is_k_pmp(A, min(3, A.nrows)) and A.nrows <= 7
    for A, k in corpus_k_pmp(40, seed=8):
        assert is_k_pmp(A, k) and A.nrows <= 8
