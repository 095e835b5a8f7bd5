"""JSON encoding for matrices, decompositions, reports and certificates.

Floats are written with 17 significant digits so that a document
round-trips bit for bit and repeated runs give identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from . import exact
from .certificates import NonSurjectivityCertificate
from .errors import ShapeMismatch
from .exact import GaussianRational
from .herringbone import (DecompositionResult, PlaneRotationWord, TripleSpec,
                          VerificationReport, classify)
from .linalg import PolynomialCoefficients

__all__ = [
    "certificate_to_json", "dumps", "gaussian_to_json", "matrix_from_json", "matrix_to_json",
    "poly_to_json", "report_to_json", "result_from_json", "result_to_json", "spec_from_json",
]


def _encode(obj, out: list):
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("cannot encode a non-finite float")
        out.append(format(x, ".17g"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for a, (k, v) in enumerate(obj.items()):
            if a:
                out.append(", ")
            out.append(json.dumps(str(k)) + ": ")
            _encode(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for a, v in enumerate(obj):
            if a:
                out.append(", ")
            _encode(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text; floats use ``'.17g'``."""
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)


# -- matrices ----------------------------------------------------------------

def _frac_json(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def matrix_to_json(m) -> dict:
    m = np.asarray(m) if not isinstance(m, np.ndarray) else m
    if m.ndim != 2:
        raise ShapeMismatch("only 2-D matrices can be encoded")
    rows, cols = m.shape
    if m.dtype == object:
        re = [[_frac_json(GaussianRational.coerce(v).re) for v in row] for row in m]
        im = [[_frac_json(GaussianRational.coerce(v).im) for v in row] for row in m]
    else:
        c = np.asarray(m, dtype=complex)
        re = [[float(v) for v in row] for row in c.real]
        im = [[float(v) for v in row] for row in c.imag]
    return {"rows": rows, "cols": cols, "re": re, "im": im}


def _entry(v):
    if isinstance(v, dict):
        return Fraction(int(v["num"]), int(v["den"]))
    if isinstance(v, str):
        return Fraction(v)
    return v


def matrix_from_json(d: dict) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; exact entries give an exact matrix."""
    try:
        rows, cols, re, im = int(d["rows"]), int(d["cols"]), d["re"], d["im"]
    except (KeyError, TypeError) as err:
        raise ValueError(f"not a matrix document: {err}") from None
    if len(re) != rows or len(im) != rows or any(len(r) != cols for r in re + im):
        raise ShapeMismatch("matrix entries do not match rows/cols")
    is_exact = any(isinstance(v, (dict, str)) for row in re + im for v in row)
    if is_exact:
        return exact.exact_matrix([[GaussianRational(_entry(a), _entry(b)) for a, b in zip(ra, rb)]
                                   for ra, rb in zip(re, im)])
    shape = (rows, cols)
    return np.array(re, dtype=float).reshape(shape) + 1j * np.array(im, dtype=float).reshape(shape)


def gaussian_to_json(z) -> dict:
    z = GaussianRational.coerce(z)
    return {"re": str(z.re), "im": str(z.im)}


def poly_to_json(poly) -> list:
    if isinstance(poly, PolynomialCoefficients) and poly.exact:
        return [gaussian_to_json(c) for c in poly]
    coeffs = poly.as_complex() if isinstance(poly, PolynomialCoefficients) else np.asarray(poly, complex)
    return [{"re": float(c.real), "im": float(c.imag)} for c in coeffs]


# -- specs and decompositions ------------------------------------------------

def spec_from_json(d: dict) -> TripleSpec:
    return TripleSpec(int(d["n"]), tuple(d["lparts"]), tuple(d["hparts"]))


def result_to_json(result: DecompositionResult, g=None) -> dict:
    out = {
        "spec": result.spec.to_dict(),
        "case": result.case.kind.value,
        "word": result.word.to_list(),
        "left": matrix_to_json(result.left),
        "right": matrix_to_json(result.right),
        "residual": result.residual,
        "normalization": result.case.to_dict()["normalization"],
    }
    if g is not None:
        out["g"] = matrix_to_json(g)
    return out


def result_from_json(d: dict) -> tuple[np.ndarray | None, TripleSpec, DecompositionResult]:
    """Rebuild ``(g, spec, result)`` from :func:`result_to_json` output.

    The case label is recomputed from the spec; the stored one is only
    informative.
    """
    spec = spec_from_json(d["spec"])
    word = PlaneRotationWord(spec.n, tuple((w["i"], w["j"], w["theta"]) for w in d["word"]))
    left = np.asarray(matrix_from_json(d["left"]), dtype=complex)
    right = np.asarray(matrix_from_json(d["right"]), dtype=complex)
    result = DecompositionResult(left, word, right, classify(spec), float(d.get("residual", float("nan"))), spec)
    g = np.asarray(matrix_from_json(d["g"]), dtype=complex) if "g" in d else None
    return g, spec, result


def report_to_json(report: VerificationReport) -> dict:
    return report.to_dict()


def certificate_to_json(cert: NonSurjectivityCertificate) -> dict:
    return {
        "spec": cert.spec.to_dict(),
        "case": "NotSurjective",
        "witness": cert.witness,
        "work": cert.work.to_dict(),
        "swapped": cert.swapped,
        "J": matrix_to_json(cert.J),
        "X": matrix_to_json(cert.X),
        "loop": list(cert.loop.indices),
        "z": gaussian_to_json(cert.z),
        "charpoly_exact": poly_to_json(cert.charpoly_exact),
        "epsilon": cert.epsilon,
        "charpoly_numeric": poly_to_json(cert.charpoly_numeric),
        "charpoly_rescaled": poly_to_json(cert.rescaled),
        "flagged_index": cert.flagged_index,
    }
