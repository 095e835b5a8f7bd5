"""Command-line interface.

Exit codes: 0 success, 2 verification failure, 3 decomposition requested
for a non-surjective spec, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import serialize
from .certificates import certify_nonsurjective, loop_product, commutator_blocks
from .config import DEFAULT
from .errors import LevicartanError, NotSurjectiveSpec
from .herringbone import TripleSpec, classify, decompose, partition_pairs, verify
from .linalg import haar_unitary

EXIT_OK = 0
EXIT_VERIFY = 2
EXIT_NOT_SURJECTIVE = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levicartan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--n", type=int)
            p.add_argument("--lparts", type=_parts)
            p.add_argument("--hparts", type=_parts)
        p.add_argument("--out", help="write JSON here instead of standard output")
        p.add_argument("--tol-residual", type=float)
        p.add_argument("--tol-cert", type=float)

    p = sub.add_parser("classify", help="match a spec against the surjectivity table")
    common(p)
    p = sub.add_parser("decompose", help="factor g = l b h")
    common(p)
    p.add_argument("--haar", action="store_true", help="sample g from Haar measure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="inp", help="matrix JSON (or a document with a 'g' entry)")
    p = sub.add_parser("verify", help="recheck a decompose document")
    common(p, spec=False)
    p.add_argument("--in", dest="inp", required=True)
    p = sub.add_parser("certify", help="non-surjectivity certificate")
    common(p)
    p.add_argument("--exact", action="store_true",
                   help="also emit the exact loop product and re-derive the certificate")
    p = sub.add_parser("sweep", help="every sorted partition pair of n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    common(p, spec=False)
    p = sub.add_parser("sample", help="write Haar-random unitaries")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    return parser


def _spec(args) -> TripleSpec:
    if args.lparts is None or args.hparts is None:
        raise UsageError("--lparts and --hparts are required")
    n = args.n if args.n is not None else sum(args.lparts)
    return TripleSpec(n, args.lparts, args.hparts)


def _read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _emit(doc, out: str | None):
    text = serialize.dumps(doc) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tol(args):
    return DEFAULT.override(residual=getattr(args, "tol_residual", None),
                            cert=getattr(args, "tol_cert", None))


def cmd_classify(args) -> tuple[dict, int]:
    spec = _spec(args)
    doc = {"spec": spec.to_dict()}
    doc.update(classify(spec).to_dict())
    return doc, EXIT_OK


def cmd_decompose(args) -> tuple[dict, int]:
    tol = _tol(args)
    if args.inp:
        data = _read_json(args.inp)
        g = serialize.matrix_from_json(data["g"] if "g" in data else data)
        g = np.asarray(g, dtype=complex)
        if args.lparts is None and "spec" in data:
            spec = serialize.spec_from_json(data["spec"])
        else:
            spec = _spec(args)
    elif args.haar:
        spec = _spec(args)
        g = haar_unitary(spec.n, args.seed)
    else:
        raise UsageError("decompose needs --haar or --in")
    result = decompose(g, spec, tol)
    doc = serialize.result_to_json(result, g)
    report = verify(g, spec, result, tol)
    return doc, EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args) -> tuple[dict, int]:
    g, spec, result = serialize.result_from_json(_read_json(args.inp))
    if g is None:
        raise UsageError("the document has no 'g' entry to verify against")
    report = verify(g, spec, result, _tol(args))
    doc = {"spec": spec.to_dict()}
    doc.update(serialize.report_to_json(report))
    return doc, EXIT_OK if report.passed else EXIT_VERIFY


def cmd_certify(args) -> tuple[dict, int]:
    tol = _tol(args)
    cert = certify_nonsurjective(_spec(args), tol=tol)
    doc = serialize.certificate_to_json(cert)
    if args.exact:
        Q = commutator_blocks(cert.X, cert.J, cert.work.l_parts)
        doc["loop_product_exact"] = serialize.matrix_to_json(loop_product(Q, cert.work.l_parts, cert.loop))
        doc["rechecked"] = cert.check(tol)
    return doc, EXIT_OK


def cmd_sweep(args) -> tuple[dict, int]:
    tol = _tol(args)
    rows, failures = [], 0
    for spec in partition_pairs(args.n):
        label = classify(spec)
        row = {"lparts": list(spec.l_parts), "hparts": list(spec.h_parts), "case": label.kind.value}
        if label.surjective:
            worst, ok = 0.0, True
            for s in range(args.seed, args.seed + args.samples):
                g = haar_unitary(spec.n, s)
                report = verify(g, spec, decompose(g, spec, tol), tol)
                worst = max(worst, report.residual)
                ok = ok and report.passed
            row.update({"samples": args.samples, "max_residual": worst, "passed": ok})
        else:
            cert = certify_nonsurjective(spec, tol=tol)
            ok = cert.check(tol)
            row.update({"witness": cert.witness, "epsilon": cert.epsilon,
                        "flagged_index": cert.flagged_index, "passed": ok})
        failures += not ok
        rows.append(row)
    surj = sum(r["case"] != "NotSurjective" for r in rows)
    doc = {"n": args.n, "seed": args.seed, "rows": rows,
           "summary": {"specs": len(rows), "surjective": surj,
                       "not_surjective": len(rows) - surj, "failures": failures}}
    return doc, EXIT_OK if failures == 0 else EXIT_VERIFY


def cmd_sample(args) -> tuple[dict, int]:
    mats = [serialize.matrix_to_json(haar_unitary(args.n, s))
            for s in range(args.seed, args.seed + args.samples)]
    if args.samples == 1:
        return mats[0], EXIT_OK
    return {"n": args.n, "seed": args.seed, "matrices": mats}, EXIT_OK


COMMANDS = {
    "classify": cmd_classify, "decompose": cmd_decompose, "verify": cmd_verify,
    "certify": cmd_certify, "sweep": cmd_sweep, "sample": cmd_sample,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as err:
        print(f"levicartan: {err}", file=sys.stderr)
        return EXIT_IO
    try:
        doc, code = COMMANDS[args.command](args)
        _emit(doc, args.out)
    except NotSurjectiveSpec as err:
        print(f"levicartan: {err}", file=sys.stderr)
        return EXIT_NOT_SURJECTIVE
    except (UsageError, OSError, ValueError, KeyError, TypeError, LevicartanError) as err:
        print(f"levicartan: {err}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
