import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import pgroups.gflinalg as la

PRIMES = [3, 5, 7]


@st.composite
def matrices(draw, p):
    rows = draw(st.integers(1, 6))
    cols = draw(st.integers(1, 6))
    data = draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return np.array(data, dtype=np.int64)


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_rref_idempotent_and_rank(p, data):
    m = data.draw(matrices(p))
    red, piv = la.rref(m, p)
    assert red.shape[0] == len(piv) == la.rank(m, p)
    if red.size:
        red2, piv2 = la.rref(red, p)
        assert np.array_equal(red2, red) and piv2 == piv


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_nullspace_annihilates(p, data):
    m = data.draw(matrices(p))
    ns = la.nullspace(m, p)
    assert ns.shape[0] == m.shape[1] - la.rank(m, p)
    for v in ns:
        assert not ((m @ v) % p).any()


@pytest.mark.parametrize("p", PRIMES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_left_nullspace(p, data):
    m = data.draw(matrices(p))
    ns = la.left_nullspace(m, p)
    for v in ns:
        assert not ((v @ m) % p).any()


def test_solve_right_consistent_and_inconsistent():
    a = np.array([[1, 2, 0], [0, 1, 1]])
    x = np.array([2, 1])
    b = (x @ a) % 3
    got = la.solve_right(a, b, 3)
    assert got is not None and np.array_equal((got @ a) % 3, b)
    assert la.solve_right(np.array([[1, 0, 0]]), np.array([0, 1, 0]), 3) is None


def test_complement_and_intersection():
    p = 3
    a = np.array([[1, 0, 0], [0, 1, 0]])
    sub = np.array([[1, 1, 0]])
    comp = la.complement_in(sub, a, p)
    assert comp.shape[0] == 1
    stacked = np.vstack([sub, comp])
    assert la.rank(stacked, p) == 2
    b = np.array([[0, 1, 0], [0, 0, 1]])
    inter = la.intersect_rowspaces(a, b, p)
    assert inter.shape[0] == 1
    assert la.in_rowspace(inter[0], a, p) and la.in_rowspace(inter[0], b, p)


def test_preimage_of_rowspace():
    p = 3
    mat = np.array([[1, 0], [0, 1], [1, 1]])  # map F3^3 -> F3^2
    sub = np.array([[1, 0]])
    pre = la.preimage_of_rowspace(mat, sub, p)
    assert pre.shape[0] == 2
    for v in pre:
        assert la.in_rowspace((v @ mat) % p, sub, p)


def test_mat_inverse_and_pow():
    p = 5
    m = np.array([[1, 2], [0, 1]])
    inv = la.mat_inverse(m, p)
    assert np.array_equal((m @ inv) % p, la.eye(2))
    assert np.array_equal(la.mat_pow(m, 5, p), la.eye(2))
    assert la.mat_inverse(np.array([[1, 2], [2, 4]]), p) is None
