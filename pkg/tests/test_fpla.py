import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmlab.fpla import batch_rank, enumerate_span, in_span, nullspace, rank, rref


def brute_rank(A, p):
    """log_p of the number of distinct vectors in the row space."""
    A = np.asarray(A) % p
    seen = set()
    for c in itertools.product(range(p), repeat=A.shape[0]):
        seen.add(tuple((np.array(c) @ A) % p))
    r = 0
    while p ** r < len(seen):
        r += 1
    return r


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rank_matches_row_space_size(p):
    rng = np.random.default_rng(p)
    for _ in range(20):
        rows, cols = rng.integers(1, 5, 2)
        A = rng.integers(0, p, (rows, cols))
        if rng.random() < 0.5 and rows > 1:
            A[-1] = (A[0] * 2 + A[1 % rows]) % p    # force a dependency
        assert rank(A, p) == brute_rank(A, p)


def test_rref_shape():
    R, piv = rref([[2, 4, 1], [1, 2, 0]], 5)
    assert piv == [0, 2]
    assert R[0, 0] == 1 and R[1, 2] == 1 and R[1, 0] == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 5, 7, 11]))
def test_nullspace(seed, p):
    rng = np.random.default_rng(seed)
    rows, cols = rng.integers(1, 7, 2)
    A = rng.integers(0, p, (rows, cols))
    N = nullspace(A, p)
    assert N.shape[0] == cols - rank(A, p)
    assert not np.any((A @ N.T) % p)
    if N.shape[0]:
        assert rank(N, p) == N.shape[0]


def test_in_span():
    basis = np.array([[1, 0, 2], [0, 1, 1]])
    assert in_span(basis, [2, 1, 2], 3)
    assert not in_span(basis, [0, 0, 1], 3)
    assert in_span(np.zeros((0, 3), dtype=np.int64), [0, 0, 0], 3)


@pytest.mark.parametrize("p", [3, 5, 191])
def test_batch_rank_matches_single(p):
    rng = np.random.default_rng(7)
    mats = rng.integers(0, p, (200, 6, 6))
    mats[::3, 5] = mats[::3, 0]              # rank-deficient every third matrix
    mats[::7, :3] = 0
    got = batch_rank(mats, p)
    want = [rank(M, p) for M in mats]
    assert list(got) == want
    capped = batch_rank(mats, p, stop_rows=3)
    assert list(capped) == [min(r, 3) for r in want]


def test_enumerate_span():
    basis = np.array([[1, 1, 0], [0, 1, 1]])
    span = enumerate_span(basis, 3)
    assert span.shape == (9, 3)
    assert len({tuple(v) for v in span}) == 9
    assert all(in_span(basis, v, 3) for v in span)
