"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """One place for every threshold used in checks and decisions.

    Attributes:
        unitary: allowed unitarity defect per unit of matrix size.
        fact: factorization residual, relative to ``||m||_F + 1``.
        skew: allowed skew-Hermitian defect, relative to ``||x||_F``.
        real: largest imaginary part still called "real" for numeric
            characteristic-polynomial coefficients.
        cert: minimum rescaled imaginary part a certificate must exhibit.
        residual: decomposition residual per unit of matrix size.
        membership: allowed off-block Frobenius mass of a factor.
        cluster: singular values closer than this are treated as equal.
        svd_sweeps: iteration cap for the Jacobi SVD.
    """

    unitary: float = 1e-12
    fact: float = 1e-12
    skew: float = 1e-10
    real: float = 1e-9
    cert: float = 1e-6
    residual: float = 1e-8
    membership: float = 1e-9
    cluster: float = 1e-8
    svd_sweeps: int = 60

    def override(self, **changes) -> "Tolerances":
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)


DEFAULT = Tolerances()
