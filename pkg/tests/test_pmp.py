from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import hermitian, psd
from hadakern.errors import InvalidOrder, NotApplicable, UnsupportedDomainError
from hadakern.generators import gen_lambda_shift, gen_named_example, gen_psrp_gap, gen_toeplitz_tridiag
from hadakern.matrix import HermitianMatrix, Matrix, identity, signature
from hadakern.pmp import (
    check_pmp_signature,
    first_pmp_violation,
    is_k_pmp,
    is_k_psrp,
    is_psd,
    minors_of_size,
    pmp_order,
)
from hadakern.scalars import FloatDomain, GaussianRational, PrimeField

small = st.sampled_from([GaussianRational(x, y) for x in (-1, 0, 1, 2) for y in (-1, 0, 1)])


def test_two_pmp_not_three_pmp():
    A = gen_named_example("hns-fail-3x3")
    assert is_k_pmp(A, 2)
    v = is_k_pmp(A, 3)
    assert not v and v.witness == (0, 1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("offset", [Fraction(0), Fraction(1, 3), Fraction(9, 10)])
def test_lambda_shift_order(n, offset):
    for k in range(1, n + 1):
        lam = k - 1 + offset
        A = gen_lambda_shift(n, lam)
        assert is_k_pmp(A, k - 1) if k > 1 else True
        assert not is_k_pmp(A, k)
        assert pmp_order(A) == k - 1


def test_orders_of_named_matrices():
    assert is_k_pmp(identity(4), 4)
    assert pmp_order(gen_toeplitz_tridiag(5)) == 2
    assert pmp_order(gen_named_example("example5x5")) == 5
    assert pmp_order(identity(3).scaled(-1)) == 0
    assert first_pmp_violation(identity(3).scaled(-1)) == (0, (0,))


def test_order_out_of_range():
    with pytest.raises(InvalidOrder):
        is_k_pmp(identity(3), 4)
    with pytest.raises(InvalidOrder):
        is_k_psrp(identity(3), 0)


def test_prime_field_rejected():
    with pytest.raises(UnsupportedDomainError):
        is_k_pmp(Matrix([[1, 0], [0, 1]], PrimeField(5)), 1)


def test_psrp_examples():
    assert is_k_psrp(identity(4), 2)
    assert is_k_psrp(gen_named_example("example5x5"), 3)
    M, _ = gen_psrp_gap(5, 3, 2)
    assert not is_k_psrp(M, 3)


def test_pmp_signature_examples():
    rep = check_pmp_signature(gen_lambda_shift(3, Fraction(3, 2)))
    assert rep.k == 1 and tuple(rep.signature) == (2, 0, 1) and rep.consistent
    rep = check_pmp_signature(gen_toeplitz_tridiag(5))
    assert rep.k == 2 and rep.signature.n_plus >= 2 and rep.signature.n_minus >= 1
    with pytest.raises(NotApplicable):
        check_pmp_signature(identity(3))


def test_float_minors_use_one_sided_tolerance():
    # a rank-one PSD matrix whose 2x2 minor rounds to a tiny negative number
    A = HermitianMatrix([[0.1, 0.3], [0.3, 0.9]], FloatDomain())
    assert is_k_pmp(A, 2)
    assert not is_k_pmp(HermitianMatrix([[1.0, 2.0], [2.0, 1.0]], FloatDomain()), 2)


@given(hermitian(max_n=5, entries=small))
def test_minor_values_match_sympy(A):
    for size in range(1, A.nrows + 1):
        for idx, val in minors_of_size(A, size).items():
            assert oracles.to_sympy_scalar(val) == oracles.minor(A, idx)


@given(hermitian(max_n=6, entries=small))
def test_monotone_and_psd_equivalence(A):
    k = pmp_order(A)
    for j in range(1, A.nrows + 1):
        assert bool(is_k_pmp(A, j)) == (j <= k)
    assert (k == A.nrows) == (signature(A).n_minus == 0) == is_psd(A)


@given(hermitian(max_n=5, entries=small))
def test_first_violation_is_lexicographically_first(A):
    order, witness = first_pmp_violation(A)
    if witness is None:
        assert order == A.nrows
        return
    assert len(witness) == order + 1
    for idx in combinations(range(A.nrows), order + 1):
        if idx == witness:
            break
        assert oracles.minor(A, idx) >= 0
    assert oracles.minor(A, witness) < 0


@given(hermitian(max_n=6, entries=small))
def test_signature_bound_for_non_psd(A):
    if pmp_order(A) < A.nrows:
        assert check_pmp_signature(A).consistent


@given(psd(max_n=5))
def test_psd_satisfies_every_psrp(A):
    for k in range(1, A.nrows + 1):
        assert is_k_psrp(A, k)
