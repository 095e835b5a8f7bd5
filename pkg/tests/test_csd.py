import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from levicartan.csd import (BipartitionPair, anti_diagonal_rotations, cs_decompose,
                            cs_decompose_rank1_left, cs_decompose_rank1_right)
from levicartan.errors import PartitionMismatch
from levicartan.linalg import haar_unitary, make_rng, off_block_mass, svd


def check_contract(g, r, tol=1e-9):
    n = r.parts.n
    assert len(r.angles) == r.parts.rank
    assert np.linalg.norm(r.left @ r.middle() @ r.right - g) <= tol * n
    assert r.residual <= tol * n
    assert off_block_mass(r.left, r.parts.row_parts) <= 1e-10
    assert off_block_mass(r.right, r.parts.col_parts) <= 1e-10
    assert np.all(r.angles >= 0) and np.all(r.angles <= np.pi / 2 + 1e-15)


def corner_singular_values(g, parts):
    n1, p = parts.row_parts[0], parts.col_parts[0]
    return svd(g[:n1, :p])[1]


def expected_cosines(r):
    n1, p = r.parts.row_parts[0], r.parts.col_parts[0]
    extra = min(n1, p) - r.parts.rank
    return np.sort(np.concatenate([np.cos(r.angles), np.ones(extra)]))


def test_bipartition_validation():
    with pytest.raises(PartitionMismatch):
        BipartitionPair.of(0, 3, 1, 2)
    with pytest.raises(PartitionMismatch):
        BipartitionPair(4, (2, 2), (1, 2))
    with pytest.raises(PartitionMismatch):
        cs_decompose(np.eye(3), BipartitionPair.of(2, 2, 2, 2))


def test_identity():
    r = cs_decompose(np.eye(4), BipartitionPair.of(2, 2, 2, 2))
    assert_allclose(r.angles, [0, 0], atol=1e-15)
    assert r.residual <= 1e-12


def test_quarter_turn():
    g = np.array([[0, 1], [-1, 0]])
    r = cs_decompose(g, BipartitionPair.of(1, 1, 1, 1))
    assert_allclose(r.angles, [np.pi / 2], atol=1e-15)
    assert r.residual <= 1e-12


def test_quarter_turn_phase_enumeration():
    # for g = [[0,1],[-1,0]] any l b(t) h with diagonal phases l, h needs |cos t| = 0
    g = np.array([[0, 1], [-1, 0]])
    best = min(
        np.linalg.norm(np.diag([a, b]) @ anti_diagonal_rotations(2, [t]) @ np.diag([c, d]) - g)
        for t in np.linspace(0, np.pi / 2, 5)
        for a, b, c, d in itertools.product([1, -1, 1j, -1j], repeat=4))
    assert best <= 1e-15


def test_haar_angles_match_corner():
    g = haar_unitary(4, 42)
    parts = BipartitionPair.of(2, 2, 2, 2)
    r = cs_decompose(g, parts)
    assert_allclose(np.cos(r.angles), svd(g[:2, :2])[1], atol=1e-10)
    assert np.all(np.diff(r.angles) >= 0)


@pytest.mark.parametrize("n", range(2, 8))
def test_all_partitions_small(n):
    for n1, p in itertools.product(range(1, n), repeat=2):
        parts = BipartitionPair.of(n1, n - n1, p, n - p)
        for seed in range(3):
            g = haar_unitary(n, 100 * n + seed)
            r = cs_decompose(g, parts)
            check_contract(g, r)
            assert_allclose(expected_cosines(r), np.sort(corner_singular_values(g, parts)), atol=1e-9)


def test_five_hundred_samples_up_to_twelve():
    rng = make_rng(77)
    worst = 0.0
    for seed in range(500):
        n = int(rng.integers(2, 13))
        n1, p = (int(x) for x in rng.integers(1, n, size=2))
        g = haar_unitary(n, seed)
        r = cs_decompose(g, BipartitionPair.of(n1, n - n1, p, n - p))
        check_contract(g, r)
        worst = max(worst, r.residual / n)
    assert worst <= 1e-12


@pytest.mark.parametrize("g", [
    np.eye(6),
    np.eye(6)[::-1],
    np.eye(6)[[2, 0, 5, 1, 4, 3]],
    np.kron(np.eye(2), haar_unitary(3, 1)),
    np.kron(haar_unitary(2, 3), np.eye(3)),
], ids=["identity", "reversal", "permutation", "block-diag", "kron"])
def test_degenerate_inputs(g):
    for n1, p in itertools.product(range(1, 6), repeat=2):
        r = cs_decompose(g, BipartitionPair.of(n1, 6 - n1, p, 6 - p))
        check_contract(g, r, tol=1e-12)


def test_rank1_left_examples():
    r = cs_decompose_rank1_left(np.eye(4), BipartitionPair.of(1, 3, 2, 2))
    assert_allclose(r.angles, [0.0])
    g = np.eye(4)[[3, 1, 2, 0]]  # first row is e_4
    r = cs_decompose_rank1_left(g, BipartitionPair.of(1, 3, 2, 2))
    assert_allclose(r.angles, [np.pi / 2])
    check_contract(g, r, tol=1e-12)


def test_rank1_left_agrees_with_general():
    g = haar_unitary(5, 7)
    parts = BipartitionPair.of(1, 4, 2, 3)
    a, b = cs_decompose_rank1_left(g, parts), cs_decompose(g, parts)
    assert_allclose(a.angles, b.angles, atol=1e-10)
    assert a.residual <= 1e-10
    assert_allclose(a.left[0, 0], 1.0)


def test_rank1_right_examples():
    r = cs_decompose_rank1_right(np.eye(4), BipartitionPair.of(2, 2, 3, 1))
    assert_allclose(r.angles, [0.0])
    g = np.eye(4)[[3, 1, 2, 0]]  # last column supported in the first row block
    r = cs_decompose_rank1_right(g, BipartitionPair.of(2, 2, 3, 1))
    assert_allclose(r.angles, [np.pi / 2])
    check_contract(g, r, tol=1e-12)


def test_rank1_right_agrees_with_general():
    g = haar_unitary(6, 11)
    parts = BipartitionPair.of(3, 3, 5, 1)
    a, b = cs_decompose_rank1_right(g, parts), cs_decompose(g, parts)
    assert_allclose(a.angles, b.angles, atol=1e-10)
    assert a.residual <= 1e-10
    assert_allclose(a.right[-1, -1], 1.0)


def test_rank1_wrong_split():
    with pytest.raises(PartitionMismatch):
        cs_decompose_rank1_left(np.eye(4), BipartitionPair.of(2, 2, 2, 2))
    with pytest.raises(PartitionMismatch):
        cs_decompose_rank1_right(np.eye(4), BipartitionPair.of(2, 2, 2, 2))
