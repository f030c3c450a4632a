import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from xyness import pfaffian as pf
from xyness.pfaffian import LogScaled

entries = st.complex_numbers(max_magnitude=10.0, allow_nan=False, allow_infinity=False)


def skew(order, vals):
    return pf.skew_from_upper(np.asarray(vals, dtype=complex), order)


def test_order_two():
    a = 2.5 - 1j
    assert pf.pfaffian(np.array([[0, a], [-a, 0]])).value == pytest.approx(a)


@given(st.lists(entries, min_size=6, max_size=6))
def test_order_four_formula(v):
    a12, a13, a14, a23, a24, a34 = v
    A = skew(4, v)
    expected = a12 * a34 - a13 * a24 + a14 * a23
    assert pf.pfaffian_pairing(A) == pytest.approx(expected, abs=1e-9 * (1 + abs(expected)))
    assert pf.pfaffian(A, "elimination").close_to(LogScaled.from_value(expected), 1e-10) or expected == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_pairing_matches_elimination(half, seed):
    A = pf.random_skew(2 * half, np.random.default_rng(seed))
    p1 = LogScaled.from_value(pf.pfaffian_pairing(A))
    assert p1.close_to(pf.pfaffian_elimination(A), 1e-10)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.booleans())
def test_pf_squared_is_det(half, seed, cplx):
    A = pf.random_skew(2 * half, np.random.default_rng(seed), cplx)
    p = pf.pfaffian(A)
    assert (p * p).close_to(pf.logdet(A), 1e-10)


def test_large_order_pf_squared():
    A = pf.random_skew(60, np.random.default_rng(3))
    p = pf.pfaffian(A)
    assert (p ** 2).close_to(pf.logdet(A), 1e-9)


def test_zero_pfaffian_sentinel():
    A = np.zeros((4, 4))
    A[0, 1], A[1, 0] = 1.0, -1.0
    p = pf.pfaffian(A)
    assert p.is_zero and p.log_magnitude == -math.inf
    assert pf.pfaffian_pairing(A) == 0


def test_odd_order_rejected():
    with pytest.raises(ValueError):
        pf.pfaffian(np.zeros((3, 3)))


def test_non_skew_rejected():
    with pytest.raises(ValueError):
        pf.check_skew(np.ones((2, 2)))


def test_skew_from_upper_structure():
    A = pf.skew_from_upper(np.arange(1, 7), 4)
    np.testing.assert_array_equal(A, -A.T)
    assert np.all(np.diag(A) == 0)
    assert A[0, 1] == 1 and A[2, 3] == 6


def test_logdet_examples():
    d = pf.logdet(np.eye(7))
    assert d.log_magnitude == 0.0 and d.phase == 1
    for n in (1, 5, 40):
        d = pf.logdet(0.5 * np.eye(n))
        assert d.log_magnitude == pytest.approx(-n * math.log(2), rel=1e-15)
    assert pf.logdet(np.ones((3, 3))).is_zero


def test_logdet_small_underflow_safe():
    d = pf.logdet(1e-3 * np.eye(400))
    assert d.log_magnitude == pytest.approx(400 * math.log(1e-3))
    assert d.value == 0


@pytest.mark.parametrize("seed", range(5))
def test_logdet_against_cofactor_oracles(seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    ref = LogScaled.from_value(pf.det_block(M))
    assert pf.logdet(M).close_to(ref, 1e-10)
    S = M[:4, :4]
    assert pf.logdet(S).close_to(LogScaled.from_value(pf.det_cofactor(S)), 1e-12)


def test_block_identity_identity_matrix():
    lhs, rhs = pf.pfaffian_block_identity(np.eye(2))["block"]
    assert lhs.value == pytest.approx(-1.0) and rhs.value == pytest.approx(-1.0)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_lemma_identities(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    lhs, rhs = pf.pfaffian_block_identity(X)["block"]
    assert lhs.close_to(rhs, 1e-10)
    X2 = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
    Y = pf.random_skew(2 * n, rng)
    lhs, rhs = pf.pfaffian_block_identity(X2, Y)["congruence"]
    assert lhs.close_to(rhs, 1e-10)


@given(arrays(float, 3, elements=st.floats(0.1, 10.0)))
def test_diagonal_congruence_scales_pairings(d):
    X = np.diag(np.concatenate([d, [1.0]]))
    Y = pf.random_skew(4, np.random.default_rng(0))
    lhs, rhs = pf.pfaffian_block_identity(X, Y)["congruence"]
    assert rhs.close_to(LogScaled.from_value(np.prod(d)) * pf.pfaffian(Y), 1e-12)
    assert lhs.close_to(rhs, 1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_permutation_similarity(half, seed):
    rng = np.random.default_rng(seed)
    order = 2 * half
    A = pf.random_skew(order, rng)
    P = np.eye(order)[rng.permutation(order)]
    assert pf.pfaffian(P @ A @ P.T).close_to(pf.logdet(P) * pf.pfaffian(A), 1e-10)


def test_logscaled_arithmetic():
    a = LogScaled.from_value(-2.0)
    b = LogScaled.from_value(0.5j)
    assert (a * b).value == pytest.approx(-1j)
    assert (a / b).value == pytest.approx(4j)
    assert (a ** 3).value == pytest.approx(-8.0)
    assert (a * LogScaled.zero()).is_zero
    with pytest.raises(ZeroDivisionError):
        a / LogScaled.zero()
    with pytest.raises(ValueError):
        LogScaled(0.0, 2.0)
    assert a.log10_magnitude == pytest.approx(math.log10(2))
