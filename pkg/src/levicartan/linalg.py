"""Dense complex linear algebra used by the decompositions and certificates.

Matrices are ``complex128`` numpy arrays; "unitary" is a contract checked
with :func:`unitarity_defect`, not a separate type.  Indices in the public
plane-rotation API are 1-based to match the usual ``E_{ij}`` notation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exact
from .config import DEFAULT, Tolerances
from .errors import (ConvergenceFailure, ExactModeOnInexactInput, IndexOutOfRange,
                     NotSkewHermitian, ShapeMismatch)

__all__ = [
    "PolynomialCoefficients", "block_diag", "block_slices", "char_poly",
    "complete_unitary", "expm_skew_hermitian", "haar_unitary", "make_rng",
    "off_block_mass", "plane_rotation", "polar_unitary", "svd",
    "unitarity_defect",
]


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; the only source of randomness in the package."""
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def as_matrix(m, square: bool = False) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ShapeMismatch(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of ``u* u - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])))


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix, with each column of Q rescaled by the
    phase of the matching diagonal entry of R so that R has a positive
    real diagonal.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = make_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


# -- SVD -------------------------------------------------------------------

def _jacobi_columns(a: np.ndarray, tol: Tolerances):
    """One-sided (Hestenes) Jacobi on a tall matrix; returns (A V, V)."""
    u = a.copy()
    m, n = u.shape
    v = np.eye(n, dtype=complex)
    thresh = np.finfo(float).eps * m
    # columns this small carry no information; rotating them only breeds subnormals
    floor = (np.finfo(float).eps * max(np.linalg.norm(a), np.finfo(float).tiny)) ** 2
    for _ in range(tol.svd_sweeps):
        rotated = False
        for j in range(n - 1):
            for k in range(j + 1, n):
                uj, uk = u[:, j], u[:, k]
                alpha = np.vdot(uj, uj).real
                beta = np.vdot(uk, uk).real
                gamma = np.vdot(uj, uk)
                g = abs(gamma)
                if min(alpha, beta) <= floor or g <= thresh * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                phase = gamma / g
                zeta = (beta - alpha) / (2.0 * g)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                # rotate (u_j, u_k e^{-i phi}) by [[c, s], [-s, c]]
                ukp = uk * np.conj(phase)
                u[:, j], u[:, k] = c * uj - s * ukp, s * uj + c * ukp
                vj, vkp = v[:, j].copy(), v[:, k] * np.conj(phase)
                v[:, j], v[:, k] = c * vj - s * vkp, s * vj + c * vkp
        if not rotated:
            return u, v
    raise ConvergenceFailure(f"Jacobi SVD did not converge in {tol.svd_sweeps} sweeps")


def svd(m, tol: Tolerances = DEFAULT):
    """Full singular value decomposition ``m = U diag(s) V*``.

    Returns ``(U, s, V)`` with ``U`` (rows x rows) and ``V`` (cols x cols)
    unitary and ``s`` the ``min(rows, cols)`` singular values in
    descending order.  Computed with one-sided Jacobi rotations, which are
    accurate to working precision on the small matrices used here.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows < cols:
        v, s, u = svd(a.conj().T, tol)
        return u, s, v
    w, v = _jacobi_columns(a, tol)
    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s, w, v = s[order], w[:, order], v[:, order]
    tiny = np.finfo(float).tiny
    good = s > max(tiny, s[0] * np.finfo(float).eps * rows) if s.size else s > 0
    cols_u = np.zeros((rows, cols), dtype=complex)
    cols_u[:, good] = w[:, good] / s[good]
    u = complete_unitary(cols_u[:, good], positions=np.flatnonzero(good), size=rows)
    return u, s, v


# -- small constructions ---------------------------------------------------

def complete_unitary(columns: np.ndarray, positions: Sequence[int] | None = None,
                     size: int | None = None) -> np.ndarray:
    """Unitary matrix containing the given (nearly orthonormal) columns.

    The candidate columns are orthonormalized in the given order with a
    Householder QR; column ``c`` lands at ``positions[c]`` (default: the
    leading positions) and the free positions receive the orthogonal
    complement.  Each output column keeps the phase of its candidate.
    """
    columns = np.asarray(columns, dtype=complex)
    n = size if size is not None else columns.shape[0]
    k = columns.shape[1] if columns.ndim == 2 else 0
    if positions is None:
        positions = list(range(k))
    positions = list(positions)
    if k == 0:
        q = np.eye(n, dtype=complex)
    else:
        q, r = np.linalg.qr(columns, mode="complete")
        d = np.diagonal(r)[:k]
        ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
        q[:, :k] = q[:, :k] * ph
    out = np.empty((n, n), dtype=complex)
    free = [p for p in range(n) if p not in set(positions)]
    out[:, positions] = q[:, :k]
    out[:, free] = q[:, k:]
    return out


def polar_unitary(m: np.ndarray) -> np.ndarray:
    """Nearest unitary matrix in Frobenius norm (unitary polar factor)."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return m.copy()
    u, _, v = svd(m)
    k = min(m.shape)
    return u[:, :k] @ v[:, :k].conj().T


def block_slices(parts: Sequence[int]) -> list[slice]:
    out, start = [], 0
    for p in parts:
        out.append(slice(start, start + p))
        start += p
    return out


def block_diag(*blocks) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=complex)
    start = 0
    for b in blocks:
        k = b.shape[0]
        out[start:start + k, start:start + k] = b
        start += k
    return out


def off_block_mass(m: np.ndarray, parts: Sequence[int]) -> float:
    """Frobenius norm of everything outside the diagonal blocks of ``parts``."""
    mask = np.ones(m.shape, dtype=bool)
    for s in block_slices(parts):
        mask[s, s] = False
    return float(np.linalg.norm(np.asarray(m)[mask]))


def project_blocks(m: np.ndarray, parts: Sequence[int]) -> np.ndarray:
    """Block-diagonal unitary nearest to ``m`` block by block."""
    return block_diag(*(polar_unitary(m[s, s]) for s in block_slices(parts)))


def plane_rotation(n: int, i: int, j: int, theta: float) -> np.ndarray:
    """``exp(theta (E_ij - E_ji))`` for 1-based ``i < j``."""
    if not (1 <= i < j <= n):
        raise IndexOutOfRange(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    r = np.eye(n)
    c, s = np.cos(theta), np.sin(theta)
    r[i - 1, i - 1] = r[j - 1, j - 1] = c
    r[i - 1, j - 1] = s
    r[j - 1, i - 1] = -s
    return r


def expm_skew_hermitian(x, tol: Tolerances = DEFAULT) -> np.ndarray:
    """``exp(x)`` for skew-Hermitian ``x`` via ``eigh`` of the Hermitian ``-i x``."""
    x = as_matrix(x, square=True)
    scale = np.linalg.norm(x)
    if np.linalg.norm(x + x.conj().T) > tol.skew * scale:
        raise NotSkewHermitian("x + x* is not negligible")
    herm = -1j * x
    herm = (herm + herm.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    return (v * np.exp(1j * w)) @ v.conj().T


# -- characteristic polynomials -----------------------------------------------

@dataclass(frozen=True)
class PolynomialCoefficients:
    """Monic polynomial, leading coefficient first.

    ``coefficients`` holds complex floats (numeric mode) or
    :class:`~levicartan.exact.GaussianRational` values (exact mode).
    """

    coefficients: tuple
    exact: bool = False

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def imag_parts(self) -> np.ndarray:
        if self.exact:
            return np.array([float(c.im) for c in self.coefficients])
        return np.imag(np.asarray(self.coefficients, dtype=complex))

    def is_real(self, tol: Tolerances = DEFAULT) -> bool:
        if self.exact:
            return all(c.im == 0 for c in self.coefficients)
        return bool(np.max(np.abs(self.imag_parts()), initial=0.0) <= tol.real)

    def as_complex(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coefficients], dtype=complex)

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, r):
        return self.coefficients[r]


def char_poly(m, exact_mode: bool = False) -> PolynomialCoefficients:
    """Characteristic polynomial ``det(lambda I - m)``.

    Exact mode requires an exact matrix (see :mod:`levicartan.exact`) and
    uses Faddeev-LeVerrier; numeric mode expands the eigenvalues.
    """
    if exact_mode:
        if not exact.is_exact(m):
            raise ExactModeOnInexactInput("exact mode needs a Gaussian-rational matrix")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch("characteristic polynomial needs a square matrix")
        return PolynomialCoefficients(tuple(exact.faddeev_leverrier(m)), exact=True)
    if isinstance(m, np.ndarray) and m.dtype == object:
        m = exact.to_complex(m)
    a = as_matrix(m, square=True)
    coeffs = np.poly(np.linalg.eigvals(a)).astype(complex)
    return PolynomialCoefficients(tuple(complex(c) for c in coeffs), exact=False)
