"""Certificates that ``L . O(n) . H`` misses part of ``U(n)``.

For a real diagonal ``J`` whose stabilizer is conjugate to ``H``, every
matrix in ``Ad(L O(n) H) J`` is ``Ad(l)`` of a real matrix.  For a cyclic
block word ``i_0 -> i_1 -> ... -> i_l = i_0`` the characteristic polynomial
of

    A(P) = P~[i_0, i_1] P~[i_1, i_2] ... P~[i_{l-1}, i_l],
    P~[i, j] = P[i, j] if i < j else P[j, i]*,

is unchanged by ``Ad(l)`` and is real for real ``P``.  A skew-Hermitian
``X`` with a non-real loop polynomial at ``Q = [X, J]`` therefore gives,
for small ``eps``, a point ``Ad(exp(eps X)) J`` outside that set.  The
exact part of a certificate is the loop polynomial of ``Q`` over ``Q(i)``;
the numeric part exhibits a concrete ``eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exact
from .config import DEFAULT, Tolerances
from .errors import (DiagonalBlockRequested, DispatchGap, InvalidLoop, PreconditionViolated,
                     SearchExhausted, ShapeMismatch, SpecActuallySurjective)
from .exact import GaussianRational
from .herringbone import TripleSpec, classify
from .linalg import PolynomialCoefficients, block_slices, char_poly, expm_skew_hermitian

__all__ = [
    "ConvergenceReport", "EpsilonSearchResult", "LoopWord", "NonSurjectivityCertificate",
    "certify_nonsurjective", "commutator_blocks", "convergence_check", "epsilon_search",
    "loop_charpoly_is_real", "loop_product",
    "rescaled_coefficients", "split_for_k3", "tilde_block", "witness_k3_pq_large",
    "witness_k4_pq2", "witness_k4_pq_large", "witness_three_by_three",
]


# -- loop invariants -----------------------------------------------------------

@dataclass(frozen=True)
class LoopWord:
    """Closed walk ``i_0 -> ... -> i_l`` on 1-based block indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 3:
            raise InvalidLoop(f"a loop needs at least two steps, got {idx}")
        if idx[0] != idx[-1]:
            raise InvalidLoop(f"loop {idx} does not close")
        if any(a == b for a, b in zip(idx, idx[1:])):
            raise InvalidLoop(f"loop {idx} repeats an index in consecutive positions")
        if min(idx) < 1:
            raise InvalidLoop("loop indices are 1-based")

    @property
    def length(self) -> int:
        return len(self.indices) - 1

    def steps(self):
        return zip(self.indices, self.indices[1:])

    def check(self, k: int):
        if max(self.indices) > k:
            raise InvalidLoop(f"loop {self.indices} leaves the {k} blocks of the partition")


def _check_partition(m, partition: Sequence[int]):
    n = sum(partition)
    if m.ndim != 2 or m.shape != (n, n):
        raise ShapeMismatch(f"matrix shape {m.shape} does not match partition {tuple(partition)}")


def _ctranspose(m: np.ndarray) -> np.ndarray:
    if m.dtype == object:
        return exact.exact_conj_transpose(m)
    return m.conj().T


def tilde_block(P, partition: Sequence[int], i: int, j: int) -> np.ndarray:
    """``P[i, j]`` for ``i < j`` and ``P[j, i]*`` for ``i > j`` (1-based block indices)."""
    P = P if isinstance(P, np.ndarray) else np.asarray(P, dtype=complex)
    _check_partition(P, partition)
    if i == j:
        raise DiagonalBlockRequested("the tilde block is only defined off the diagonal")
    k = len(partition)
    if not (1 <= i <= k and 1 <= j <= k):
        raise InvalidLoop(f"block index out of range 1..{k}: ({i}, {j})")
    s = block_slices(partition)
    if i < j:
        return P[s[i - 1], s[j - 1]]
    return _ctranspose(P[s[j - 1], s[i - 1]])


def loop_product(P, partition: Sequence[int], loop: LoopWord) -> np.ndarray:
    """Left-to-right product of the tilde blocks along ``loop``."""
    if not isinstance(loop, LoopWord):
        loop = LoopWord(tuple(loop))
    loop.check(len(partition))
    out = None
    for a, b in loop.steps():
        t = tilde_block(P, partition, a, b)
        out = t if out is None else out @ t
    return out


def loop_charpoly_is_real(P, partition: Sequence[int], loop: LoopWord, exact_mode: bool = False,
                          tol: Tolerances = DEFAULT) -> tuple[PolynomialCoefficients, bool]:
    poly = char_poly(loop_product(P, partition, loop), exact_mode=exact_mode)
    return poly, poly.is_real(tol)


def commutator_blocks(X, J, partition: Sequence[int]) -> np.ndarray:
    """``Q = [X, J] = XJ - JX`` for block-diagonal ``J``.

    Each off-diagonal block is rechecked against ``X_ij J_j - J_i X_ij``.
    Works on exact and floating matrices alike.
    """
    _check_partition(X, partition)
    _check_partition(J, partition)
    s = block_slices(partition)
    for a, sa in enumerate(s):
        for b, sb in enumerate(s):
            if a != b and any(bool(v) for v in np.asarray(J[sa, sb]).flat):
                raise PreconditionViolated("J must be block diagonal for the partition")
    Q = X @ J - J @ X
    for a, sa in enumerate(s):
        for b, sb in enumerate(s):
            if a == b:
                continue
            closed = X[sa, sb] @ J[sb, sb] - J[sa, sa] @ X[sa, sb]
            diff = Q[sa, sb] - closed
            if Q.dtype == object:
                assert not any(bool(v) for v in diff.flat)
            else:
                assert np.allclose(diff, 0.0, atol=1e-12 * (1.0 + np.abs(Q).max()))
    return Q


# -- perturbation ------------------------------------------------------------

def rescaled_coefficients(J, X, partition: Sequence[int], loop: LoopWord, eps: float):
    """Loop polynomial of ``Ad(exp(eps X)) J`` with coefficient ``r`` divided by ``eps**(r l)``.

    Returns ``(raw, rescaled)`` as complex arrays, leading coefficient first.
    """
    Jc = exact.to_complex(J) if J.dtype == object else np.asarray(J, dtype=complex)
    Xc = exact.to_complex(X) if X.dtype == object else np.asarray(X, dtype=complex)
    u = expm_skew_hermitian(eps * Xc)
    P = u @ Jc @ u.conj().T
    raw = char_poly(loop_product(P, partition, loop)).as_complex()
    r = np.arange(raw.size)
    return raw, raw / float(eps) ** (r * loop.length)


@dataclass(frozen=True)
class EpsilonSearchResult:
    epsilon: float
    raw: np.ndarray
    rescaled: np.ndarray
    flagged_index: int


def epsilon_search(J, X, partition: Sequence[int], loop: LoopWord,
                   tol: Tolerances = DEFAULT, max_halvings: int = 40) -> EpsilonSearchResult:
    """First ``eps = 2**-j`` whose rescaled loop polynomial shows a non-real coefficient.

    Only coefficients that are non-real in the exact polynomial at
    ``Q = [X, J]`` are eligible; the flagged one is the eligible
    coefficient with the largest rescaled imaginary part.
    """
    Q = commutator_blocks(X, J, partition)
    target = char_poly(loop_product(Q, partition, loop), exact_mode=exact.is_exact(Q))
    if exact.is_exact(Q):
        eligible = [r for r, c in enumerate(target) if c.im != 0]
    else:
        eligible = [r for r, c in enumerate(target.as_complex()) if abs(c.imag) > tol.real]
    if not eligible:
        raise PreconditionViolated("the loop polynomial of [X, J] is real; nothing to perturb")
    for j in range(1, max_halvings + 1):
        eps = 2.0 ** -j
        raw, rescaled = rescaled_coefficients(J, X, partition, loop, eps)
        im = np.abs(rescaled.imag)
        best = max(eligible, key=lambda r: im[r])
        if im[best] >= tol.cert:
            return EpsilonSearchResult(eps, raw, rescaled, best)
    raise SearchExhausted(f"no eps down to 2**-{max_halvings} reached |Im| >= {tol.cert}")


@dataclass(frozen=True)
class ConvergenceReport:
    """Flagged rescaled coefficient along ``eps, eps/2, eps/4, ...`` against its exact limit."""

    epsilons: np.ndarray
    values: np.ndarray
    exact_value: complex
    errors: np.ndarray

    @property
    def ratios(self) -> np.ndarray:
        return self.errors[1:] / self.errors[:-1]

    def passed(self, rel: float = 0.2) -> bool:
        """Errors shrink at every halving, the last two ratios agree within
        ``rel``, and the last value is within ``rel`` of the limit."""
        r = self.ratios
        if r.size < 2 or not np.all(r < 1.0):
            return False
        settled = abs(r[-1] / r[-2] - 1.0) <= rel
        close = self.errors[-1] <= rel * max(abs(self.exact_value), 1e-300)
        return bool(settled and close)


def convergence_check(J, X, partition: Sequence[int], loop: LoopWord, index: int,
                      eps: float, halvings: int = 10) -> ConvergenceReport:
    """Track rescaled coefficient ``index`` as ``eps`` halves ``halvings`` times.

    The rescaled coefficients are analytic in ``eps`` with value at 0 given by
    the exact polynomial of ``[X, J]``; ten halvings from ``eps <= 1/2``
    stay well above the rounding floor of the loop product.
    """
    Q = commutator_blocks(X, J, partition)
    target = complex(char_poly(loop_product(Q, partition, loop), exact_mode=exact.is_exact(Q))[index])
    epsilons = eps * 0.5 ** np.arange(halvings + 1)
    values = np.array([rescaled_coefficients(J, X, partition, loop, e)[1][index] for e in epsilons])
    return ConvergenceReport(epsilons, values, target, np.abs(values - target))


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class NonSurjectivityCertificate:
    """Evidence that ``spec`` is not surjective.

    ``work`` is the spec the witness was built on: the original blocks
    sorted, possibly with the sides exchanged (``swapped``) and then
    coarsened by merging trailing blocks.  Coarsening only enlarges the
    groups, so a witness for ``work`` is a witness for ``spec``.  ``J``,
    ``X`` and ``loop`` refer to ``work.l_parts``.
    """

    spec: TripleSpec
    work: TripleSpec
    swapped: bool
    witness: str
    J: np.ndarray
    X: np.ndarray
    loop: LoopWord
    z: GaussianRational
    charpoly_exact: PolynomialCoefficients
    epsilon: float
    charpoly_numeric: np.ndarray
    rescaled: np.ndarray
    flagged_index: int

    def exact_nonreal(self) -> list[int]:
        return [r for r, c in enumerate(self.charpoly_exact) if c.im != 0]

    def check(self, tol: Tolerances = DEFAULT) -> bool:
        """Re-derive every claim from ``J``, ``X`` and ``loop``."""
        part = self.work.l_parts
        if any(v.im != 0 for v in self.J.flat):
            return False
        if any(bool(v) for v in (self.X + exact.exact_conj_transpose(self.X)).flat):
            return False
        if sorted(realized_multiplicities(self.J)) != sorted(self.work.h_parts):
            return False
        Q = commutator_blocks(self.X, self.J, part)
        poly = char_poly(loop_product(Q, part, self.loop), exact_mode=True)
        if tuple(poly.coefficients) != tuple(self.charpoly_exact.coefficients) or not self.exact_nonreal():
            return False
        _, rescaled = rescaled_coefficients(self.J, self.X, part, self.loop, self.epsilon)
        return (self.flagged_index in self.exact_nonreal()
                and abs(rescaled[self.flagged_index].imag) >= tol.cert)

    def convergence(self, halvings: int = 10) -> ConvergenceReport:
        return convergence_check(self.J, self.X, self.work.l_parts, self.loop,
                                 self.flagged_index, self.epsilon, halvings)


def realized_multiplicities(J: np.ndarray) -> list[int]:
    """Sizes of the eigenspaces of a diagonal ``J``; its stabilizer is the product of their unitary groups."""
    diag = [J[a, a] for a in range(J.shape[0])]
    counts: dict = {}
    for v in diag:
        counts[v] = counts.get(v, 0) + 1
    return list(counts.values())


def _as_z(z) -> GaussianRational:
    z = GaussianRational.coerce(z)
    if z.im == 0:
        raise PreconditionViolated("z must be non-real")
    return z


def _coarsen(parts: Sequence[int], blocks: int) -> tuple[int, ...]:
    """Merge trailing blocks until ``blocks`` remain."""
    parts = tuple(parts)
    return parts[:blocks - 1] + (sum(parts[blocks - 1:]),)


def _put(m: np.ndarray, partition, i: int, j: int, r: int, c: int, value):
    """Set entry ``(r, c)`` of block ``(i, j)`` and the matching skew-Hermitian entry (all 1-based)."""
    starts = np.concatenate([[0], np.cumsum(partition)])
    a, b = starts[i - 1] + r - 1, starts[j - 1] + c - 1
    v = GaussianRational.coerce(value)
    m[a, b] = v
    m[b, a] = -v.conjugate()


def _diag(values) -> np.ndarray:
    J = exact.exact_zeros(len(values), len(values))
    for a, v in enumerate(values):
        J[a, a] = GaussianRational.coerce(v)
    return J


def _finish(spec, work, swapped, witness, J, X, loop, z, tol) -> NonSurjectivityCertificate:
    part = work.l_parts
    Q = commutator_blocks(X, J, part)
    poly = char_poly(loop_product(Q, part, loop), exact_mode=True)
    if all(c.im == 0 for c in poly):
        raise PreconditionViolated("the witness polynomial came out real")
    found = epsilon_search(J, X, part, loop, tol)
    return NonSurjectivityCertificate(spec, work, swapped, witness, J, X, loop, z, poly,
                                      found.epsilon, found.raw, found.rescaled,
                                      found.flagged_index)


def witness_three_by_three(spec: TripleSpec, z=exact.I, tol: Tolerances = DEFAULT,
                           *, original: TripleSpec | None = None,
                           swapped: bool = False) -> NonSurjectivityCertificate:
    """Both sides coarsened to three blocks; loop ``1 -> 2 -> 3 -> 1``.

    ``J`` takes the value ``1`` at the first coordinate, ``2`` at the first
    coordinate of block 2 and ``3`` at the first coordinate of block 3,
    then fills the remaining positions with ``1, 2, 3`` up to the H-block
    sizes.  ``X`` has ``1, 1, z`` in the corners of blocks (1,2), (2,3),
    (1,3), giving ``lambda^n1 - 2 conj(z) lambda^(n1-1)``.
    """
    z = _as_z(z)
    if spec.k < 3 or spec.l < 3:
        if classify(spec).surjective:
            raise SpecActuallySurjective(f"{spec.l_parts}/{spec.h_parts} is surjective")
        raise PreconditionViolated("both sides need at least three blocks")
    work = TripleSpec(spec.n, _coarsen(spec.l_parts, 3), _coarsen(spec.h_parts, 3))
    n1, n2, _ = work.l_parts
    values = [None] * work.n
    values[0], values[n1], values[n1 + n2] = 1, 2, 3
    left = [m - 1 for m in work.h_parts]
    fill = iter(v for v, count in zip((1, 2, 3), left) for _ in range(count))
    values = [v if v is not None else next(fill) for v in values]
    J = _diag(values)
    X = exact.exact_zeros(work.n, work.n)
    part = work.l_parts
    _put(X, part, 1, 2, 1, 1, 1)
    _put(X, part, 2, 3, 1, 1, 1)
    _put(X, part, 1, 3, 1, 1, z)
    return _finish(original or spec, work, swapped, "three_by_three", J, X,
                   LoopWord((1, 2, 3, 1)), z, tol)


def split_for_k3(l_parts: Sequence[int], p: int) -> tuple[int, int, int]:
    """Positive ``p_i <= n_i - 1`` summing to ``p``: one each, then fill blocks in order."""
    caps = [m - 1 for m in l_parts]
    if min(caps) < 1 or not 3 <= p <= sum(caps):
        raise PreconditionViolated(f"no positive split of p={p} against {tuple(l_parts)}")
    split = [1, 1, 1]
    rest = p - 3
    for a in range(3):
        extra = min(rest, caps[a] - 1)
        split[a] += extra
        rest -= extra
    return tuple(split)


def witness_k3_pq_large(spec: TripleSpec, z=exact.I, tol: Tolerances = DEFAULT,
                        *, original: TripleSpec | None = None, swapped: bool = False,
                        name: str = "k3_pq_large") -> NonSurjectivityCertificate:
    """``k = 3``, all L-blocks at least 2, ``H = (p, q)`` with ``min(p, q) >= 3``.

    ``J_i = diag(1^{p_i}, 0^{q_i})`` and ``X`` couples the first and last
    coordinates of consecutive blocks; the loop polynomial is
    ``lambda^n1 + conj(z) lambda^(n1-2)``.
    """
    z = _as_z(z)
    if spec.k != 3 or spec.l != 2 or spec.N < 2 or spec.M < 3:
        raise PreconditionViolated("needs k = 3, min n_i >= 2, l = 2 and min(p, q) >= 3")
    p = spec.h_parts[0]
    split = split_for_k3(spec.l_parts, p)
    values = []
    for size, pi in zip(spec.l_parts, split):
        values += [1] * pi + [0] * (size - pi)
    J = _diag(values)
    X = exact.exact_zeros(spec.n, spec.n)
    part = spec.l_parts
    n1, n2, n3 = part
    for (i, j, ni, nj), corner in zip(((1, 2, n1, n2), (2, 3, n2, n3), (1, 3, n1, n3)), (1, 1, z)):
        _put(X, part, i, j, 1, nj, 1)
        _put(X, part, i, j, ni, 1, corner)
    return _finish(original or spec, spec, swapped, name, J, X, LoopWord((1, 2, 3, 1)), z, tol)


def witness_k4_pq2(spec: TripleSpec, z=exact.I, tol: Tolerances = DEFAULT,
                   *, original: TripleSpec | None = None,
                   swapped: bool = False) -> NonSurjectivityCertificate:
    """``H = (2, n-2)`` against at least four L-blocks; loop ``1 -> 3 -> 2 -> 4 -> 1``.

    The L-side is coarsened to four blocks.  With ``a, b, c, d`` the first
    rows of ``X_13, X_23, X_14, X_24`` the polynomial is
    ``lambda^(n1-1) (lambda - (a, b)(d, c))`` where
    ``(v, w) = sum v_i conj(w_i)``; here ``a = b = c = e_1`` and ``d = z e_1``.
    """
    z = _as_z(z)
    if spec.l != 2 or spec.M != 2 or spec.k < 4:
        raise PreconditionViolated("needs l = 2, min(p, q) = 2 and k >= 4")
    work = TripleSpec(spec.n, _coarsen(spec.l_parts, 4), spec.h_parts)
    part = work.l_parts
    n1, n2, _, _ = part
    values = [1] + [0] * (n1 - 1) + [1] + [0] * (work.n - n1 - 1)
    J = _diag(values)
    X = exact.exact_zeros(work.n, work.n)
    _put(X, part, 1, 3, 1, 1, 1)
    _put(X, part, 2, 3, 1, 1, 1)
    _put(X, part, 1, 4, 1, 1, 1)
    _put(X, part, 2, 4, 1, 1, z)
    return _finish(original or spec, work, swapped, "k4_pq2", J, X,
                   LoopWord((1, 3, 2, 4, 1)), z, tol)


def witness_k4_pq_large(spec: TripleSpec, z=exact.I, tol: Tolerances = DEFAULT,
                        *, original: TripleSpec | None = None,
                        swapped: bool = False) -> NonSurjectivityCertificate:
    """``H = (p, q)`` with ``min(p, q) >= 3`` against at least four L-blocks.

    With the L-blocks ascending: for ``k >= 5`` coarsen to
    ``(n1+n2, n3+n4, rest)`` and for ``k = 4, n3 > 1`` to ``(n1+n2, n3, n4)``,
    then use :func:`witness_k3_pq_large`.  Otherwise ``L = (1, 1, 1, n-3)``:
    ``J = diag(I_p, 0_q)``, ``X = [[0, -Y*], [Y, 0]]`` and the loop
    ``1 -> 4 -> 2 -> 4 -> 3 -> 4 -> 1`` gives ``lambda - 1 - z``.
    """
    z = _as_z(z)
    if spec.l != 2 or spec.M < 3 or spec.k < 4:
        raise PreconditionViolated("needs l = 2, min(p, q) >= 3 and k >= 4")
    original = original or spec
    srt = TripleSpec(spec.n, sorted(spec.l_parts), spec.h_parts)
    a = srt.l_parts
    if srt.k >= 5:
        coarse = TripleSpec(srt.n, (a[0] + a[1], a[2] + a[3], sum(a[4:])), srt.h_parts)
    elif a[2] > 1:
        coarse = TripleSpec(srt.n, (a[0] + a[1], a[2], a[3]), srt.h_parts)
    else:
        coarse = None
    if coarse is not None:
        return witness_k3_pq_large(coarse, z, tol, original=original, swapped=swapped,
                                   name="k4_pq_large/k3_pq_large")
    p, q = srt.h_parts
    J = _diag([1] * p + [0] * q)
    # Y is q x p with first rows (1, 1, 1) and (1, z, 0); X = [[0, -Y*], [Y, 0]]
    X = exact.exact_zeros(srt.n, srt.n)
    for r, row in enumerate(((1, 1, 1), (1, z, 0))):
        for c, v in enumerate(row):
            if GaussianRational.coerce(v):
                v = GaussianRational.coerce(v)
                X[p + r, c] = v
                X[c, p + r] = -v.conjugate()
    return _finish(original, srt, swapped, "k4_pq_large", J, X,
                   LoopWord((1, 4, 2, 4, 3, 4, 1)), z, tol)


def certify_nonsurjective(spec: TripleSpec, z=exact.I,
                          tol: Tolerances = DEFAULT) -> NonSurjectivityCertificate:
    """Pick the witness that covers ``spec`` and build its certificate.

    Both sides are sorted ascending; when the L-side has two blocks the
    sides are exchanged (``g -> g^-1`` turns ``L G' H`` into ``H G' L``).
    """
    if classify(spec).surjective:
        raise SpecActuallySurjective(f"{spec.l_parts}/{spec.h_parts} is surjective")
    work = TripleSpec(spec.n, sorted(spec.l_parts), sorted(spec.h_parts))
    swapped = work.k == 2
    if swapped:
        work = work.swapped()
    kw = dict(original=spec, swapped=swapped)
    if work.k >= 3 and work.l >= 3:
        return witness_three_by_three(work, z, tol, **kw)
    if work.l == 2 and work.k == 3 and work.N >= 2 and work.M >= 3:
        return witness_k3_pq_large(work, z, tol, **kw)
    if work.l == 2 and work.k >= 4 and work.M == 2:
        return witness_k4_pq2(work, z, tol, **kw)
    if work.l == 2 and work.k >= 4 and work.M >= 3:
        return witness_k4_pq_large(work, z, tol, **kw)
    raise DispatchGap(f"no witness covers {spec.l_parts}/{spec.h_parts}")
