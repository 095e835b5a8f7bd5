"""Classification of Levi triples and the decomposition ``g = l . b . h``.

A triple is ``(U(n), U(n_1) x ... x U(n_k), U(m_1) x ... x U(m_l))``.  When
it is one of the seven surjective shapes, every ``g`` factors as ``l b h``
with ``l`` block diagonal for the L-partition, ``h`` block diagonal for
the H-partition and ``b`` a short word of real plane rotations.

The non-symmetric Case I is reduced to a chain of rank-one CS
decompositions that alternately peel a row off the left and a column off
the right (the "herringbone stitch"); Case II and the primed cases are
reduced to Case 0 and Case I.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .csd import (BipartitionPair, cs_decompose, cs_decompose_rank1_left,
                  cs_decompose_rank1_right)
from .errors import (IndexOutOfRange, InvalidSpec, NotApplicable, NotSurjectiveSpec,
                     ShapeMismatch)
from .linalg import (as_matrix, block_diag, block_slices, complete_unitary, off_block_mass,
                     plane_rotation, polar_unitary, project_blocks, unitarity_defect)

__all__ = [
    "CaseKind", "CaseLabel", "DecompositionResult", "PlaneRotationWord", "TripleSpec",
    "VerificationReport", "WordShape", "b_shape", "classify", "decompose",
    "decompose_case1", "decompose_case2", "decompose_case3", "partition_pairs", "verify",
]


# -- specs -------------------------------------------------------------------

@dataclass(frozen=True)
class TripleSpec:
    """``n`` with the L-side and H-side block sizes."""

    n: int
    l_parts: tuple[int, ...]
    h_parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "l_parts", tuple(int(x) for x in self.l_parts))
        object.__setattr__(self, "h_parts", tuple(int(x) for x in self.h_parts))
        if self.n < 1:
            raise InvalidSpec("n must be positive")
        for name, parts in (("L", self.l_parts), ("H", self.h_parts)):
            if len(parts) < 2:
                raise InvalidSpec(f"{name}-side needs at least two blocks, got {parts}")
            if min(parts) < 1:
                raise InvalidSpec(f"{name}-side blocks must be positive, got {parts}")
            if sum(parts) != self.n:
                raise InvalidSpec(f"{name}-side blocks {parts} do not sum to n={self.n}")

    @property
    def k(self) -> int:
        return len(self.l_parts)

    @property
    def l(self) -> int:  # noqa: E743 - standard name for the H block count
        return len(self.h_parts)

    @property
    def N(self) -> int:
        return min(self.l_parts)

    @property
    def M(self) -> int:
        return min(self.h_parts)

    def swapped(self) -> "TripleSpec":
        return TripleSpec(self.n, self.h_parts, self.l_parts)

    def to_dict(self) -> dict:
        return {"n": self.n, "lparts": list(self.l_parts), "hparts": list(self.h_parts)}


def _partitions(n: int, max_part: int | None = None) -> Iterable[tuple[int, ...]]:
    """Partitions of ``n`` as non-increasing tuples."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def partition_pairs(n: int) -> list[TripleSpec]:
    """Every spec of size ``n`` with both sides sorted ascending and at least two blocks.

    Block order never changes the double coset problem up to a coordinate
    permutation, so sorted pairs represent every triple.
    """
    parts = [tuple(sorted(p)) for p in _partitions(n) if len(p) >= 2]
    return [TripleSpec(n, a, b) for a in parts for b in parts]


# -- rotation words ----------------------------------------------------------

@dataclass(frozen=True)
class PlaneRotationWord:
    """Ordered product of plane rotations ``R(i, j, theta)`` with 1-based ``i < j``."""

    n: int
    letters: tuple[tuple[int, int, float], ...] = ()

    def __post_init__(self):
        letters = tuple((int(i), int(j), float(t)) for i, j, t in self.letters)
        for i, j, _ in letters:
            if not 1 <= i < j <= self.n:
                raise IndexOutOfRange(f"letter plane ({i}, {j}) invalid for n={self.n}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def planes(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.letters]

    @property
    def angles(self) -> np.ndarray:
        return np.array([t for _, _, t in self.letters])

    def evaluate(self) -> np.ndarray:
        out = np.eye(self.n)
        for i, j, t in self.letters:
            out = out @ plane_rotation(self.n, i, j, t)
        return out

    def inverse(self) -> "PlaneRotationWord":
        return PlaneRotationWord(self.n, tuple((i, j, -t) for i, j, t in reversed(self.letters)))

    def permuted(self, perm: Sequence[int]) -> "PlaneRotationWord":
        """Conjugate into the coordinates where local index ``a`` is global ``perm[a]`` (0-based)."""
        out = []
        for i, j, t in self.letters:
            a, b = perm[i - 1] + 1, perm[j - 1] + 1
            out.append((a, b, t) if a < b else (b, a, -t))
        return PlaneRotationWord(self.n, tuple(out))

    def embedded(self, n: int, offset: int) -> "PlaneRotationWord":
        return PlaneRotationWord(n, tuple((i + offset, j + offset, t) for i, j, t in self.letters))

    def __add__(self, other: "PlaneRotationWord") -> "PlaneRotationWord":
        if other.n != self.n:
            raise ShapeMismatch("cannot concatenate words of different sizes")
        return PlaneRotationWord(self.n, self.letters + other.letters)

    def to_list(self) -> list[dict]:
        return [{"i": i, "j": j, "theta": t} for i, j, t in self.letters]


# -- classification --------------------------------------------------------

class CaseKind(str, enum.Enum):
    CASE_0 = "0"
    CASE_I = "I"
    CASE_II = "II"
    CASE_III = "III"
    CASE_I_PRIME = "I'"
    CASE_II_PRIME = "II'"
    CASE_III_PRIME = "III'"
    NOT_SURJECTIVE = "NotSurjective"

    @property
    def base(self) -> "CaseKind":
        return {CaseKind.CASE_I_PRIME: CaseKind.CASE_I,
                CaseKind.CASE_II_PRIME: CaseKind.CASE_II,
                CaseKind.CASE_III_PRIME: CaseKind.CASE_III}.get(self, self)


@dataclass(frozen=True)
class CaseLabel:
    """Which row of the surjectivity table matched, and how the spec was normalized.

    ``swapped`` means the L and H sides were exchanged (primed rows).
    ``perm`` is one coordinate permutation, applied to rows and columns
    alike, after which the (possibly swapped) spec is in the shape the
    construction expects: normalized coordinate ``a`` is original
    coordinate ``perm[a]``.  ``perm_l`` / ``perm_h`` list the original
    block indices in their normalized order.
    """

    kind: CaseKind
    perm: tuple[int, ...] = ()
    perm_l: tuple[int, ...] = ()
    perm_h: tuple[int, ...] = ()
    swapped: bool = False
    normalized: TripleSpec | None = field(default=None, compare=False)

    @property
    def surjective(self) -> bool:
        return self.kind is not CaseKind.NOT_SURJECTIVE

    def to_dict(self) -> dict:
        out = {"case": self.kind.value}
        if self.surjective:
            out["normalization"] = {"perm": list(self.perm), "permL": list(self.perm_l),
                                    "permH": list(self.perm_h), "swapped": self.swapped}
        return out


def _table_row(spec: TripleSpec) -> CaseKind:
    k, l, N, M = spec.k, spec.l, spec.N, spec.M
    if k == 2 and l == 2:
        return CaseKind.CASE_0
    if k == 3 and N == 1 and l == 2:
        return CaseKind.CASE_I
    if k == 2 and l == 3 and M == 1:
        return CaseKind.CASE_I_PRIME
    if k == 3 and N >= 2 and l == 2 and M == 2:
        return CaseKind.CASE_II
    if k == 2 and N == 2 and l == 3 and M >= 2:
        return CaseKind.CASE_II_PRIME
    if l == 2 and M == 1:
        return CaseKind.CASE_III
    if k == 2 and N == 1:
        return CaseKind.CASE_III_PRIME
    return CaseKind.NOT_SURJECTIVE


def _block_of(parts: Sequence[int]) -> np.ndarray:
    return np.repeat(np.arange(len(parts)), parts)


def _block_order(perm: Sequence[int], parts: Sequence[int]) -> tuple[int, ...] | None:
    """Block order seen along ``perm`` if every block stays contiguous, else None."""
    owner = _block_of(parts)[list(perm)]
    order = [int(owner[0])]
    for b in owner[1:]:
        if b != order[-1]:
            if b in order:
                return None
            order.append(int(b))
    return tuple(order)


def _apply_order(parts, order):
    return tuple(parts[b] for b in order)


def _normalizing_perm(kind: CaseKind, spec: TripleSpec) -> tuple[int, ...]:
    n = spec.n
    ident = tuple(range(n))
    rev = tuple(range(n - 1, -1, -1))
    if kind is CaseKind.CASE_0:
        return ident
    if kind is CaseKind.CASE_II:
        return ident if spec.h_parts[0] == 2 else rev
    if kind is CaseKind.CASE_III:
        return ident if spec.h_parts[0] == 1 else rev
    # Case I: the unit L-block must come first and both sides must stay contiguous
    lb, hb = _block_of(spec.l_parts), _block_of(spec.h_parts)
    candidates = [ident, rev]
    for lo in itertools.permutations(range(3)):
        for ho in itertools.permutations(range(2)):
            lr, hr = np.argsort(lo), np.argsort(ho)
            candidates.append(tuple(sorted(ident, key=lambda c: (lr[lb[c]], hr[hb[c]]))))
            candidates.append(tuple(sorted(ident, key=lambda c: (hr[hb[c]], lr[lb[c]]))))
    for perm in candidates:
        lo = _block_order(perm, spec.l_parts)
        if lo is None or _block_order(perm, spec.h_parts) is None:
            continue
        if spec.l_parts[lo[0]] == 1:
            return perm
    raise AssertionError(f"no normalizing permutation for {spec}")  # unreachable for Case I


def classify(spec: TripleSpec) -> CaseLabel:
    """Match ``spec`` against the surjectivity table.

    Rows overlap (e.g. ``k = l = 2`` with a unit block matches 0, III and
    III'); the first match in the order 0, I, I', II, II', III, III' wins.
    """
    if not isinstance(spec, TripleSpec):
        raise InvalidSpec("classify expects a TripleSpec")
    kind = _table_row(spec)
    if kind is CaseKind.NOT_SURJECTIVE:
        return CaseLabel(kind)
    swapped = kind is not kind.base
    work = spec.swapped() if swapped else spec
    perm = _normalizing_perm(kind.base, work)
    perm_l = _block_order(perm, work.l_parts)
    perm_h = _block_order(perm, work.h_parts)
    normalized = TripleSpec(work.n, _apply_order(work.l_parts, perm_l),
                            _apply_order(work.h_parts, perm_h))
    if swapped:
        perm_l, perm_h = perm_h, perm_l
    return CaseLabel(kind, perm, perm_l, perm_h, swapped, normalized)


# -- expected word shapes ------------------------------------------------------

@dataclass(frozen=True)
class WordShape:
    length: int
    planes: tuple[tuple[int, int], ...]


def _case1_length(p: int, q: int, n2: int, n3: int) -> int:
    return min(2 * p, 2 * q, 2 * n2 + 1, 2 * n3 + 1)


def _normalized_planes(kind: CaseKind, spec: TripleSpec) -> list[tuple[int, int]]:
    n = spec.n
    if kind is CaseKind.CASE_0:
        r = min(*spec.l_parts, *spec.h_parts)
        return [(i, n + 1 - i) for i in range(1, r + 1)]
    if kind is CaseKind.CASE_I:
        _, n2, n3 = spec.l_parts
        p, q = spec.h_parts
        length = _case1_length(p, q, n2, n3)
        n_c = length // 2
        cs = [(i + 1, n + 1 - i) for i in range(1, n_c + 1)]
        bs = [(i, n + 1 - i) for i in range(length - n_c, 0, -1)]
        return cs + bs
    if kind is CaseKind.CASE_II:
        n1 = spec.l_parts[0]
        return [(n1 + 1, n), (n1 + 2, n - 1), (n1 + 1, n - 1), (1, n), (2, n - 1)]
    if kind is CaseKind.CASE_III:
        ends = np.cumsum(spec.l_parts)[:-1]
        return [(1, int(e) + 1) for e in ends]
    raise NotApplicable(f"no word shape for case {kind.value}")


def b_shape(label: CaseLabel, spec: TripleSpec) -> WordShape:
    """Expected word length and plane list, in the coordinates of ``spec``."""
    if not label.surjective:
        raise NotApplicable("a non-surjective triple has no decomposition")
    planes = _normalized_planes(label.kind.base, label.normalized)
    mapped = [tuple(sorted((label.perm[i - 1] + 1, label.perm[j - 1] + 1))) for i, j in planes]
    if label.swapped:
        mapped.reverse()
    return WordShape(len(mapped), tuple(mapped))


# -- results -----------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionResult:
    left: np.ndarray
    word: PlaneRotationWord
    right: np.ndarray
    case: CaseLabel
    residual: float
    spec: TripleSpec

    def middle(self) -> np.ndarray:
        return self.word.evaluate()

    def product(self) -> np.ndarray:
        return self.left @ self.word.evaluate() @ self.right


def _result(g, left, word, right, label, spec) -> DecompositionResult:
    residual = float(np.linalg.norm(left @ word.evaluate() @ right - g))
    return DecompositionResult(left, word, right, label, residual, spec)


def _embed(n: int, start: int, block: np.ndarray) -> np.ndarray:
    out = np.eye(n, dtype=complex)
    k = block.shape[0]
    out[start:start + k, start:start + k] = block
    return out


# -- Case I ------------------------------------------------------------------

def _herringbone(g: np.ndarray, n2: int, n3: int, p: int, q: int, tol: Tolerances):
    """Core of Case I for ``L = (1, n2, n3)``, ``H = (p, q)``; returns (l, word, h).

    Invariant: ``g = lacc . C_1..C_i . m . B_i..B_1 . hacc`` with ``m`` equal
    to the identity outside the active window.
    """
    n = g.shape[0]
    lacc = np.eye(n, dtype=complex)
    hacc = np.eye(n, dtype=complex)
    m = g.copy()
    c_letters, b_letters = [], []
    i = 0
    while True:
        # even stage: split off coordinate i+1 against the H-blocks
        if i == min(p, q):
            hacc = m @ hacc
            break
        lo, hi = i, n - i
        r = cs_decompose_rank1_left(m[lo:hi, lo:hi], BipartitionPair.of(1, hi - lo - 1, p - i, q - i), tol)
        b_letters.append((i + 1, n - i, float(r.angles[0])))
        hacc = _embed(n, lo, r.right) @ hacc
        m = _embed(n, lo, r.left)
        # odd stage: split off coordinate n-i against the L-blocks
        if i == min(n2, n3):
            lacc = lacc @ m
            break
        lo, hi = i + 1, n - i
        r = cs_decompose_rank1_right(m[lo:hi, lo:hi], BipartitionPair.of(n2 - i, n3 - i, hi - lo - 1, 1), tol)
        c_letters.append((i + 2, n - i, float(r.angles[0])))
        lacc = lacc @ _embed(n, lo, r.left)
        m = _embed(n, lo, r.right)
        i += 1
    word = PlaneRotationWord(n, tuple(c_letters) + tuple(reversed(b_letters)))
    lacc = project_blocks(lacc, (1, n2, n3))
    hacc = project_blocks(hacc, (p, q))
    return lacc, word, hacc


def _require(spec: TripleSpec, ok: bool, what: str):
    if not ok:
        raise NotApplicable(f"{what} does not apply to {spec.l_parts}/{spec.h_parts}")


def decompose_case1(g, spec: TripleSpec, tol: Tolerances = DEFAULT) -> DecompositionResult:
    """Case I with the unit L-block first: ``L = (1, n2, n3)``, ``H = (p, q)``."""
    g = _checked(g, spec)
    _require(spec, spec.k == 3 and spec.l == 2 and spec.l_parts[0] == 1, "Case I")
    _, n2, n3 = spec.l_parts
    p, q = spec.h_parts
    left, word, right = _herringbone(g, n2, n3, p, q, tol)
    label = CaseLabel(CaseKind.CASE_I, tuple(range(spec.n)), (0, 1, 2), (0, 1), False, spec)
    return _result(g, left, word, right, label, spec)


# -- Case II -----------------------------------------------------------------

def decompose_case2(g, spec: TripleSpec, tol: Tolerances = DEFAULT) -> DecompositionResult:
    """Case II with ``H = (2, n-2)`` and all three L-blocks of size at least 2.

    A CS decomposition against ``(n1, n2+n3)`` leaves a factor ``y`` on the
    last ``n2+n3`` coordinates, which is a reversed and inverted Case I
    problem; the two phases that ``y``'s right factor leaves on the last
    two coordinates are moved across the first two rotations.
    """
    g = _checked(g, spec)
    n = spec.n
    _require(spec, spec.k == 3 and spec.N >= 2 and spec.h_parts[0] == 2, "Case II")
    n1, n2, n3 = spec.l_parts
    q = spec.h_parts[1]
    nn = n2 + n3

    step1 = cs_decompose(g, BipartitionPair.of(n1, nn, 2, q), tol)
    x, y = step1.left[:n1, :n1], step1.left[n1:, n1:]

    w0 = np.eye(nn)[::-1]
    lc, wc, hc = _herringbone(w0 @ y.conj().T @ w0, 1, nn - 2, n3, n2, tol)
    l_y = w0 @ hc.conj().T @ w0
    h_y = w0 @ lc.conj().T @ w0
    rev = list(range(nn - 1, -1, -1))
    w_y = wc.inverse().permuted(rev).embedded(n, n1)

    alpha, beta = h_y[-1, -1], h_y[-2, -2]
    e = np.eye(n, dtype=complex)
    e[0, 0], e[1, 1] = alpha, beta
    left = block_diag(x, l_y) @ e.conj()
    right = e @ _embed(n, n1, h_y) @ step1.right
    a1 = PlaneRotationWord(n, tuple((i, n + 1 - i, float(t)) for i, t in
                                    zip((1, 2), step1.angles)))
    word = w_y + a1
    left = project_blocks(left, spec.l_parts)
    right = project_blocks(right, spec.h_parts)
    label = CaseLabel(CaseKind.CASE_II, tuple(range(n)), (0, 1, 2), (0, 1), False, spec)
    return _result(g, left, word, right, label, spec)


# -- Case III ----------------------------------------------------------------

def decompose_case3(g, spec: TripleSpec, tol: Tolerances = DEFAULT) -> DecompositionResult:
    """Case III with ``H = (1, n-1)``: rotate ``e_1`` onto ``g e_1`` through spherical angles.

    With ``a_i`` the norm of block ``i`` of ``g e_1``, the word
    ``B_1 ... B_{k-1}`` maps ``e_1`` to the vector carrying ``a_i`` at the
    first coordinate of block ``i``; the L-factor then rotates each of
    those onto the actual block of ``g e_1``, and what is left fixes
    ``e_1``.
    """
    g = _checked(g, spec)
    n = spec.n
    _require(spec, spec.l == 2 and spec.h_parts[0] == 1, "Case III")
    slices = block_slices(spec.l_parts)
    v = g[:, 0]
    a = np.array([np.linalg.norm(v[s]) for s in slices])
    letters = []
    for j in range(1, spec.k):
        theta = float(np.arctan2(a[j], np.linalg.norm(a[:j])))
        letters.append((1, slices[j].start + 1, -theta))
    word = PlaneRotationWord(n, tuple(letters))
    blocks = []
    for s, ai in zip(slices, a):
        if ai == 0.0:
            blocks.append(np.eye(s.stop - s.start, dtype=complex))
        else:
            blocks.append(complete_unitary((v[s] / ai).reshape(-1, 1)))
    left = block_diag(*blocks)
    rest = (left @ word.evaluate()).conj().T @ g
    right = block_diag(np.ones((1, 1), complex), polar_unitary(rest[1:, 1:]))
    label = CaseLabel(CaseKind.CASE_III, tuple(range(n)), tuple(range(spec.k)), (0, 1), False, spec)
    return _result(g, left, word, right, label, spec)


# -- dispatch ----------------------------------------------------------------

def _checked(g, spec: TripleSpec) -> np.ndarray:
    g = as_matrix(g, square=True)
    if g.shape[0] != spec.n:
        raise ShapeMismatch(f"matrix is {g.shape[0]}x{g.shape[0]} but spec has n={spec.n}")
    return g


def _decompose_case0(g, spec: TripleSpec, tol: Tolerances):
    r = cs_decompose(g, BipartitionPair(spec.n, spec.l_parts, spec.h_parts), tol)
    word = PlaneRotationWord(spec.n, tuple((i, j, float(t)) for (i, j), t in zip(r.planes(), r.angles)))
    return r.left, word, r.right


_ENGINES = {
    CaseKind.CASE_I: decompose_case1,
    CaseKind.CASE_II: decompose_case2,
    CaseKind.CASE_III: decompose_case3,
}


def decompose(g, spec: TripleSpec, tol: Tolerances = DEFAULT) -> DecompositionResult:
    """Factor ``g = left . word . right`` for a surjective triple.

    The spec is normalized as recorded in :func:`classify`: primed cases
    decompose ``g*`` with the sides exchanged and invert the result, and a
    single coordinate permutation puts the blocks where the construction
    expects them.  Factors are mapped back to the caller's coordinates.
    """
    g = _checked(g, spec)
    label = classify(spec)
    if not label.surjective:
        raise NotSurjectiveSpec(f"{spec.l_parts}/{spec.h_parts} admits no decomposition")
    work = g.conj().T if label.swapped else g
    perm = list(label.perm)
    local = work[np.ix_(perm, perm)]
    base = label.kind.base
    if base is CaseKind.CASE_0:
        l_, w_, r_ = _decompose_case0(local, label.normalized, tol)
    else:
        sub = _ENGINES[base](local, label.normalized, tol)
        l_, w_, r_ = sub.left, sub.word, sub.right

    def back(m):
        out = np.empty_like(m)
        out[np.ix_(perm, perm)] = m
        return out

    left, right, word = back(l_), back(r_), w_.permuted(perm)
    if label.swapped:
        left, right, word = right.conj().T, left.conj().T, word.inverse()
    return _result(g, left, word, right, label, spec)


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    residual: float
    left_off_block: float
    right_off_block: float
    left_unitarity: float
    right_unitarity: float
    word_length: int
    expected_length: int
    planes_match: bool
    orthogonality_defect: float
    residual_ok: bool
    membership_ok: bool
    unitarity_ok: bool
    shape_ok: bool
    orthogonality_ok: bool

    @property
    def passed(self) -> bool:
        return (self.residual_ok and self.membership_ok and self.unitarity_ok
                and self.shape_ok and self.orthogonality_ok)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["passed"] = self.passed
        return out


def verify(g, spec: TripleSpec, result: DecompositionResult,
           tol: Tolerances = DEFAULT) -> VerificationReport:
    """Recheck a decomposition from scratch against ``g`` and ``spec``."""
    g = _checked(g, spec)
    n = spec.n
    left, right = np.asarray(result.left), np.asarray(result.right)
    if left.shape != (n, n) or right.shape != (n, n) or result.word.n != n:
        raise ShapeMismatch("factor sizes do not match the spec")
    b = result.word.evaluate()
    residual = float(np.linalg.norm(left @ b @ right - g))
    lmass = off_block_mass(left, spec.l_parts)
    rmass = off_block_mass(right, spec.h_parts)
    lu, ru = unitarity_defect(left), unitarity_defect(right)
    orth = float(np.linalg.norm(b.T @ b - np.eye(n)))
    label = classify(spec)
    shape = b_shape(label, spec) if label.surjective else WordShape(-1, ())
    planes_ok = tuple(result.word.planes) == shape.planes
    return VerificationReport(
        residual=residual, left_off_block=lmass, right_off_block=rmass,
        left_unitarity=lu, right_unitarity=ru,
        word_length=len(result.word), expected_length=shape.length,
        planes_match=planes_ok, orthogonality_defect=orth,
        residual_ok=residual <= tol.residual * n,
        membership_ok=max(lmass, rmass) <= tol.membership,
        unitarity_ok=max(lu, ru) <= tol.unitary * n,
        shape_ok=len(result.word) == shape.length and planes_ok,
        orthogonality_ok=orth <= 1e-10,
    )
