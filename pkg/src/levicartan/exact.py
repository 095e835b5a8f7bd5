"""Exact arithmetic over the Gaussian rationals Q(i).

Exact matrices are plain numpy object arrays whose entries are
:class:`GaussianRational`.  numpy's object-dtype ``@``, ``+``, ``.T`` and
``np.conj`` dispatch to the element methods, so block slicing and loop
products work unchanged on exact and floating inputs.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class GaussianRational:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        return cls(x, 0)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        # witness matrices are mostly zero; skipping Fraction work there pays off
        if not o:
            return self
        if not self:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not self or not o:
            return ZERO
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # comparisons and conversions ---------------------------------------
    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        if self.im == 0:
            return f"GaussianRational({self.re})"
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def exact_matrix(rows) -> np.ndarray:
    """Build an exact matrix from nested sequences of numbers.

    Floats are converted to their exact binary value, complex numbers
    component-wise.
    """
    arr = np.asarray(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError("exact_matrix expects a 2-D nested sequence")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = GaussianRational.coerce(v)
    return out


def exact_zeros(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(ZERO)
    return out


def exact_identity(n: int) -> np.ndarray:
    out = exact_zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_exact(m) -> bool:
    """True when ``m`` is an object array holding only Gaussian rationals."""
    return (isinstance(m, np.ndarray) and m.dtype == object
            and all(isinstance(v, GaussianRational) for v in m.flat))


def rationalize(m: np.ndarray) -> np.ndarray:
    """Exact copy of a floating matrix (each double becomes its exact value)."""
    return exact_matrix(np.asarray(m, dtype=complex))


def to_complex(m: np.ndarray) -> np.ndarray:
    return np.array([[complex(v) for v in row] for row in m], dtype=complex).reshape(m.shape)


def exact_conj_transpose(m: np.ndarray) -> np.ndarray:
    out = np.empty((m.shape[1], m.shape[0]), dtype=object)
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            out[j, i] = m[i, j].conjugate()
    return out


def faddeev_leverrier(a: np.ndarray) -> list[GaussianRational]:
    """Characteristic polynomial of an exact square matrix, leading coefficient first.

    Runs the Faddeev-LeVerrier recursion ``M_k = A M_{k-1} + c_{n-k+1} I``,
    ``c_{n-k} = -tr(A M_k) / k``; every division is by an integer so the
    recursion stays inside Q(i).
    """
    n = a.shape[0]
    coeffs = [ONE]
    m = exact_zeros(n, n)
    ident = exact_identity(n)
    for k in range(1, n + 1):
        m = a @ m + ident * coeffs[-1] if k > 1 else ident.copy()
        am = a @ m
        tr = sum((am[i, i] for i in range(n)), ZERO)
        coeffs.append(-tr / k)
    return coeffs
