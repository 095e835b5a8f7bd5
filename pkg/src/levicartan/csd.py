"""Two-sided CS decomposition for ``(U(n1) x U(n2)) \\ U(n) / (U(p) x U(q))``.

Every unitary ``g`` factors as ``g = l . b(theta) . h`` with ``l`` block
diagonal for the row split, ``h`` block diagonal for the column split and

    b(theta) = prod_i plane_rotation(n, i, n+1-i, theta_i),  i = 1..min(n1, n2, p, q),

a product of commuting rotations in the anti-diagonal coordinate planes.
Angles are returned in ``[0, pi/2]`` sorted by increasing angle (descending
cosine).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import PartitionMismatch
from .linalg import (as_matrix, block_diag, complete_unitary, project_blocks, svd)

_SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class BipartitionPair:
    n: int
    row_parts: tuple[int, int]
    col_parts: tuple[int, int]

    def __post_init__(self):
        n1, n2 = self.row_parts
        p, q = self.col_parts
        if min(n1, n2, p, q) < 1 or n1 + n2 != self.n or p + q != self.n:
            raise PartitionMismatch(
                f"parts {self.row_parts}/{self.col_parts} do not split n={self.n} into positive blocks")

    @classmethod
    def of(cls, n1: int, n2: int, p: int, q: int) -> "BipartitionPair":
        return cls(n1 + n2, (n1, n2), (p, q))

    @property
    def rank(self) -> int:
        return min(*self.row_parts, *self.col_parts)


@dataclass(frozen=True)
class CsdResult:
    left: np.ndarray
    angles: np.ndarray
    right: np.ndarray
    residual: float
    parts: BipartitionPair

    def middle(self) -> np.ndarray:
        return anti_diagonal_rotations(self.parts.n, self.angles)

    def planes(self) -> list[tuple[int, int]]:
        n = self.parts.n
        return [(i, n + 1 - i) for i in range(1, len(self.angles) + 1)]


def anti_diagonal_rotations(n: int, angles) -> np.ndarray:
    """Product of rotations in planes ``(i, n+1-i)``; the planes are disjoint so order is irrelevant."""
    b = np.eye(n)
    for i, t in enumerate(angles):
        a, z = i, n - 1 - i
        c, s = np.cos(t), np.sin(t)
        b[a, a] = b[z, z] = c
        b[a, z] = s
        b[z, a] = -s
    return b


def _check(g, parts: BipartitionPair) -> np.ndarray:
    g = as_matrix(g, square=True)
    if g.shape[0] != parts.n:
        raise PartitionMismatch(f"matrix is {g.shape[0]}x{g.shape[0]} but parts sum to {parts.n}")
    return g


def _finish(g, left, angles, parts, tol) -> CsdResult:
    b = anti_diagonal_rotations(parts.n, angles)
    right = project_blocks(b.T @ left.conj().T @ g, parts.col_parts)
    residual = float(np.linalg.norm(left @ b @ right - g))
    return CsdResult(left, np.asarray(angles, dtype=float), right, residual, parts)


def _canonical_left(g: np.ndarray, n1: int, p: int, tol: Tolerances):
    """Left factor and angles when ``n1`` is the smallest of the four parts.

    Angles near zero are badly conditioned through the cosines of the
    corner block, so that part of the spectrum is re-resolved through an
    SVD of the lower block restricted to the matching right singular
    subspace; the remaining angles come straight from the corner SVD.
    """
    n = g.shape[0]
    n2 = n - n1
    g11, g21 = g[:n1, :p], g[n1:, :p]
    u, sig, v = svd(g11, tol)
    a = int(np.count_nonzero(sig >= _SQRT_HALF))

    # small angles: cos >= 1/sqrt(2)
    if a:
        va = v[:, :a]
        x, s_a, y = svd(g21 @ va, tol)
        order = np.arange(a)[::-1]  # ascending sine
        va = va @ y[:, order]
        s_a = s_a[order]
        cols = g11 @ va
        c_a = np.linalg.norm(cols, axis=0)
        l1_a = cols / c_a
        l2_a = -x[:, order]
        th_a = np.arctan2(s_a, c_a)
    else:
        l1_a = np.zeros((n1, 0), complex)
        l2_a = np.zeros((n2, 0), complex)
        th_a = np.zeros(0)
        s_a = np.zeros(0)

    # large angles: singular vectors of the corner block are well separated from 1
    vb = v[:, a:n1]
    wb = g21 @ vb
    s_b = np.linalg.norm(wb, axis=0)
    th_b = np.arctan2(s_b, sig[a:n1])
    l1_b = u[:, a:n1]
    l2_b = -wb / s_b

    angles = np.concatenate([th_a, th_b])
    l1 = complete_unitary(np.hstack([l1_a, l1_b]))

    # lower block: forced unit columns first, then angle columns from most to least reliable
    forced = g21 @ v[:, n1:]
    angle_cols = np.hstack([l2_a, l2_b])
    angle_pos = [n2 - 1 - i for i in range(n1)]
    by_reliability = list(range(n1 - 1, a - 1, -1)) + list(range(a - 1, -1, -1))
    # a zero sine leaves its column free; the completion then keeps l2 as plain as possible
    sines = np.concatenate([s_a, s_b])
    by_reliability = [i for i in by_reliability if sines[i] > n * np.finfo(float).eps]
    candidates = np.hstack([forced, angle_cols[:, by_reliability]])
    positions = list(range(p - n1)) + [angle_pos[i] for i in by_reliability]
    l2 = complete_unitary(candidates, positions=positions, size=n2)
    return block_diag(l1, l2), angles


def cs_decompose(g, parts: BipartitionPair, tol: Tolerances = DEFAULT) -> CsdResult:
    """CS decomposition with row split ``parts.row_parts`` and column split ``parts.col_parts``.

    The corner block used for the SVD is always indexed by the smallest of
    ``(n1, n2, p, q)``: the problem is first mapped there by reversing all
    coordinates (swaps ``n1<->n2`` and ``p<->q``) and/or inverting ``g``
    (swaps rows and columns), and the factors are mapped back.  Both maps
    send the anti-diagonal planes to themselves, up to angle signs that are
    pushed into the diagonal of the outer factors.
    """
    g = _check(g, parts)
    n = parts.n
    n1, n2 = parts.row_parts
    p, q = parts.col_parts
    smallest = min(n1, n2, p, q)
    w0 = np.eye(n)[::-1]
    # sign matrix turning b(-theta) into D b(theta) D
    d = np.ones(n)
    d[n - smallest:] = -1.0
    d = np.diag(d)

    if n1 == smallest:
        left, angles = _canonical_left(g, n1, p, tol)
    elif n2 == smallest:
        sub = cs_decompose(w0 @ g @ w0, BipartitionPair.of(n2, n1, q, p), tol)
        left = w0 @ sub.left @ w0 @ d
        angles = sub.angles
    elif p == smallest:
        sub = cs_decompose(g.conj().T, BipartitionPair.of(p, q, n1, n2), tol)
        left = sub.right.conj().T @ d
        angles = sub.angles
    else:
        sub = cs_decompose(w0 @ g.conj().T @ w0, BipartitionPair.of(q, p, n2, n1), tol)
        # reversal then inversion: two sign flips cancel
        left = w0 @ sub.right.conj().T @ w0
        angles = sub.angles
    return _finish(g, left, angles, parts, tol)


def _unit_with_row(row: np.ndarray, where: int) -> np.ndarray:
    """Unitary whose row ``where`` (0 or -1) is the unit vector ``row``."""
    k = row.shape[0]
    norm = np.linalg.norm(row)
    if norm == 0.0:
        return np.eye(k, dtype=complex)
    col = (row / norm).conj().reshape(k, 1)
    pos = 0 if where == 0 else k - 1
    return complete_unitary(col, positions=[pos], size=k).conj().T


def _unit_with_col(col: np.ndarray, where: int) -> np.ndarray:
    k = col.shape[0]
    norm = np.linalg.norm(col)
    if norm == 0.0:
        return np.eye(k, dtype=complex)
    pos = 0 if where == 0 else k - 1
    return complete_unitary((col / norm).reshape(k, 1), positions=[pos], size=k)


def cs_decompose_rank1_left(g, parts: BipartitionPair, tol: Tolerances = DEFAULT) -> CsdResult:
    """CS decomposition for row split ``(1, n-1)``, read off the first row of ``g``.

    With ``r`` the first row, ``cos(theta) = ||r[:p]||`` and the right factor
    is any unitary pair whose first/last rows are the normalized halves of
    ``r``.  The left factor then fixes ``e_1`` exactly (its corner is 1).
    """
    g = _check(g, parts)
    if parts.row_parts[0] != 1:
        raise PartitionMismatch("rank-1 left stitch needs row split (1, n-1)")
    n = parts.n
    p = parts.col_parts[0]
    row = g[0]
    top, bot = row[:p], row[p:]
    theta = float(np.arctan2(np.linalg.norm(bot), np.linalg.norm(top)))
    right = block_diag(_unit_with_row(top, 0), _unit_with_row(bot, -1))
    b = anti_diagonal_rotations(n, [theta])
    rest = project_blocks((g @ right.conj().T @ b.T)[1:, 1:], (n - 1,))
    left = block_diag(np.ones((1, 1), complex), rest)
    residual = float(np.linalg.norm(left @ b @ right - g))
    return CsdResult(left, np.array([theta]), right, residual, parts)


def cs_decompose_rank1_right(g, parts: BipartitionPair, tol: Tolerances = DEFAULT) -> CsdResult:
    """Mirror of :func:`cs_decompose_rank1_left` for column split ``(n-1, 1)``.

    Driven by the last column of ``g``: ``sin(theta)`` is the norm of its
    upper part; the right factor ends in an exact 1.
    """
    g = _check(g, parts)
    if parts.col_parts[1] != 1:
        raise PartitionMismatch("rank-1 right stitch needs column split (n-1, 1)")
    n = parts.n
    n1 = parts.row_parts[0]
    col = g[:, -1]
    top, bot = col[:n1], col[n1:]
    theta = float(np.arctan2(np.linalg.norm(top), np.linalg.norm(bot)))
    left = block_diag(_unit_with_col(top, 0), _unit_with_col(bot, -1))
    b = anti_diagonal_rotations(n, [theta])
    rest = project_blocks((b.T @ left.conj().T @ g)[:-1, :-1], (n - 1,))
    right = block_diag(rest, np.ones((1, 1), complex))
    residual = float(np.linalg.norm(left @ b @ right - g))
    return CsdResult(left, np.array([theta]), right, residual, parts)
