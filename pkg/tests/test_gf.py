"""Field arithmetic checked against a brute-force span oracle.

The oracle enumerates the whole column span of a matrix; p^rank must
equal the span size.  Everything else leans on that plus rank-nullity.
"""

import itertools
import math

import numpy as np
from hypothesis import given, strategies as st

from rankforge.gf import (
    gf_colspace,
    gf_eye,
    gf_matmul,
    gf_nullspace,
    gf_quotient_pivots,
    gf_rank,
    gf_reduce_mod,
    gf_rref,
    gf_solve,
)


def span_size(a, p):
    # every linear combination of the columns, counted as a set
    m, n = a.shape
    seen = set()
    for coeffs in itertools.product(range(p), repeat=n):
        v = (a @ np.array(coeffs, dtype=np.int64)) % p
        seen.add(tuple(int(x) for x in v))
    return len(seen)


def oracle_rank(a, p):
    return round(math.log(span_size(a, p), p))


@st.composite
def matrix_and_prime(draw, max_m=4, max_n=4):
    p = draw(st.sampled_from([2, 3, 5]))
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=m * n, max_size=m * n))
    return np.array(entries, dtype=np.int64).reshape(m, n), p


def test_rank_frozen_cases():
    # third row is the sum of the first two over GF(2)
    a = np.array([[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]])
    assert gf_rank(a, 2) == 2
    # determinant 1 - 4 = -3, zero mod 3
    b = np.array([[1, 2], [2, 1]])
    assert gf_rank(b, 3) == 1
    assert gf_rank(b, 2) == 2
    assert gf_rank(np.zeros((3, 2), dtype=np.int64), 2) == 0
    assert gf_rank(np.zeros((0, 4), dtype=np.int64), 2) == 0


@given(matrix_and_prime())
def test_rank_matches_span_oracle(ap):
    a, p = ap
    assert p ** gf_rank(a, p) == span_size(a, p)


@given(matrix_and_prime())
def test_rank_of_transpose(ap):
    a, p = ap
    assert gf_rank(a, p) == gf_rank(a.T, p)


@given(matrix_and_prime())
def test_nullspace_annihilated_and_full(ap):
    a, p = ap
    ns = gf_nullspace(a, p)
    assert ns.shape[0] == a.shape[1]
    assert not ((a @ ns) % p).any()
    # rank-nullity, with the oracle on both sides
    assert ns.shape[1] == a.shape[1] - oracle_rank(a, p)
    if ns.shape[1]:
        assert oracle_rank(ns, p) == ns.shape[1]


@given(matrix_and_prime())
def test_colspace_spans_columns(ap):
    a, p = ap
    cs = gf_colspace(a, p)
    assert cs.shape[1] == gf_rank(a, p)
    assert span_size(cs, p) == span_size(a, p)
    # each colspace column literally occurs in a
    cols = {tuple(int(x) for x in a[:, j]) for j in range(a.shape[1])}
    for j in range(cs.shape[1]):
        assert tuple(int(x) for x in cs[:, j]) in cols


@given(matrix_and_prime(), st.data())
def test_solve_recovers_consistent_systems(ap, data):
    a, p = ap
    x0 = np.array(
        data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])),
        dtype=np.int64,
    )
    b = (a @ x0) % p
    x = gf_solve(a, b, p)
    assert x is not None
    assert np.array_equal((a @ x) % p, b)


def test_solve_detects_inconsistency():
    a = np.array([[1], [0]])
    assert gf_solve(a, np.array([0, 1]), 2) is None
    assert gf_solve(a, np.array([1, 0]), 2) is not None


def test_solve_matrix_right_hand_side():
    a = np.array([[1, 1], [0, 1]])
    b = np.array([[1, 0], [1, 1]])
    x = gf_solve(a, b, 5)
    assert np.array_equal((a @ x) % 5, b)


@given(matrix_and_prime())
def test_rref_is_idempotent(ap):
    a, p = ap
    r1, piv1 = gf_rref(a, p)
    r2, piv2 = gf_rref(r1, p)
    assert piv1 == piv2
    assert np.array_equal(r1, r2)


def test_matmul_identity_and_shapes():
    a = np.array([[1, 2], [3, 4], [5, 6]])
    assert np.array_equal(gf_matmul(gf_eye(3), a, 7), a % 7)
    assert np.array_equal(gf_matmul(a, gf_eye(2), 7), a % 7)
    try:
        gf_matmul(a, a, 7)
    except ValueError:
        pass
    else:
        raise AssertionError("expected a shape error")


def test_quotient_pivots_and_residues():
    # quotient of k^3 by span{(1,1,0)}
    b = np.array([[1], [1], [0]])
    reduced, piv = gf_quotient_pivots(b, 2)
    assert piv == [0]
    assert gf_reduce_mod(reduced, piv, np.array([1, 1, 0]), 2).tolist() == [0, 0, 0]
    res = gf_reduce_mod(reduced, piv, np.array([1, 0, 0]), 2)
    assert res[0] == 0 and res.any()


@given(matrix_and_prime())
def test_quotient_dimension_count(ap):
    b, p = ap
    reduced, piv = gf_quotient_pivots(b, p)
    assert len(piv) == gf_rank(b, p)
    # residues of the span itself vanish
    for j in range(b.shape[1]):
        assert not gf_reduce_mod(reduced, piv, b[:, j], p).any()
