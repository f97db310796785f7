"""Command-line front end.

Every subcommand reads a vector set (``--input``), runs one analysis and
writes a JSON report. Exit status: 0 ok, 2 input error, 3 numerical
breakdown, 64 usage error.
"""
import argparse
import sys

import numpy as np

from . import crossterm, gsom, io, transform
from .errors import DegenerateTailSum, GenerationFailed, InputError
from .vectorspace import DEFAULT_TOL, as_vector_set

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64

MAX_N = 64
MAX_M = 65536


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _permutation(text):
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid permutation {text!r}") from None


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser():
    parser = _Parser(prog="linoep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, perm=True):
        p.add_argument("--input", required=True, help="CSV or JSON vector file")
        p.add_argument("--format", choices=io.FORMATS, help="override extension-based detection")
        p.add_argument("--tol", type=_positive, default=DEFAULT_TOL)
        p.add_argument("--output", help="write the report here instead of stdout")
        if perm:
            p.add_argument("--perm", type=_permutation, help="reorder input, e.g. 2,0,1")

    common(sub.add_parser("gsom", help="Gram-Schmidt orthogonalization"))
    common(sub.add_parser("linoep", help="LINOEP transform"))
    common(sub.add_parser("noep", help="LINOEP transform with the n+1 vector extension"))
    common(sub.add_parser("analyze", help="cross term and cancellation families"))
    sweep = sub.add_parser("sweep", help="LINOEP + NOEP over all input orderings")
    common(sweep, perm=False)
    sweep.add_argument("--limit-n", type=int, default=crossterm.MAX_EXHAUSTIVE_N)

    gen = sub.add_parser("generate", help="emit a seeded 3-vector example set")
    gen.add_argument("kind", choices=["nested", "cancellation"])
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--output")
    return parser


def _load(args):
    V = io.read_vectors(args.input, args.format)
    n, m = V.shape
    if n > MAX_N or m > MAX_M:
        raise InputError(f"input is {n}x{m}; the CLI accepts at most {MAX_N} vectors of dimension {MAX_M}")
    V = as_vector_set(V)
    perm = getattr(args, "perm", None)
    if perm is None:
        return V, list(range(n))
    if sorted(perm) != list(range(n)):
        raise InputError(f"--perm must be a permutation of 0..{n - 1}")
    return as_vector_set(V[perm]), perm


def _gsom(V, args):
    res = gsom.gsom_transform(V, args.tol)
    ident = gsom.gsom_energy_identity(res)
    return {
        "s_vectors": res.orthogonal_set,
        "coeff_matrix": res.coeff_matrix,
        "column_sums": res.column_sums,
        "energy": {"lhs": ident.lhs, "rhs": ident.rhs},
        "residuals": {
            "energy": ident.residual,
            "reconstruction": float(np.max(np.abs(res.reconstruct() - V))),
            "orthogonality": res.orthogonality_residual(),
        },
    }


def _linoep_payload(res, V):
    energy = transform.energy_report(res.c_set)
    return {
        "alphas": res.alphas,
        "c_vectors": res.c_set,
        "energy": {"sum_energy": energy.sum_energy, "component_energy": energy.component_energy},
        "residuals": {
            "energy": energy.residual,
            "nested_orthogonality": res.nested_orthogonality_residual(),
            "reconstruction": float(np.max(np.abs(res.reconstruct() - V))),
        },
    }


def _linoep(V, args):
    return _linoep_payload(transform.linoep_transform(V, args.tol), V)


def _noep_payload(res, V):
    base = _linoep_payload(res, V)
    d_energy = transform.energy_report(res.d_set)
    total = V.sum(axis=0)
    input_energy = float(np.dot(total, total))
    return {
        "alphas": res.alphas,
        "betas": res.betas,
        "gamma": res.gamma,
        "c_vectors": res.c_set,
        "d_vectors": res.d_set,
        "z2": res.z2,
        "energy": {
            **base["energy"],
            "input_sum_energy": input_energy,
            "d_component_energy": d_energy.component_energy,
        },
        "residuals": {
            **base["residuals"],
            "noep_energy": abs(input_energy - d_energy.component_energy),
            "sum_reconstruction": res.sum_residual(),
        },
    }


def _noep(V, args):
    partial = transform.linoep_transform(V, args.tol)
    return _noep_payload(transform.noep_extend(partial, V.sum(axis=0), args.tol), V)


def _analyze(V, args):
    report = crossterm.classify(V, args.tol)
    families = [f.value for f in crossterm.Family if f in report.families]
    return {
        "gram": report.gram,
        "cross_term": report.total_cross_term,
        "is_energy_preserving": report.is_energy_preserving,
        "families": families,
        "nested_permutations": [list(p) for p in report.nested_permutations],
        "energy": {"component_energy": report.component_energy},
        "residuals": {"cross_term_identity": report.identity_residual},
    }


def _sweep(V, args):
    result = crossterm.permutation_sweep(V, args.tol, max_n=args.limit_n)
    entries = []
    for entry in result:
        payload = _noep_payload(entry.result, V[list(entry.permutation)])
        entries.append({"permutation": list(entry.permutation), **payload})
    return {
        "count": len(entries),
        "entries": entries,
        "residuals": {"max_relative_energy": result.max_relative_residual()},
    }


COMMANDS = {
    "gsom": _gsom,
    "linoep": _linoep,
    "noep": _noep,
    "analyze": _analyze,
    "sweep": _sweep,
}


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _generate(args):
    make = {
        "nested": crossterm.make_nested_example,
        "cancellation": crossterm.make_cancellation_example,
    }[args.kind]
    doc = {"kind": args.kind, "seed": args.seed, "vectors": make(args.seed)}
    _emit(io.dumps(doc), args.output)
    return EXIT_OK


def run(argv=None):
    """Parse ``argv``, run one subcommand and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if args.command == "generate":
        try:
            return _generate(args)
        except GenerationFailed as exc:
            print(f"linoep generate: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL

    report = {"command": args.command, "status": "ok"}
    try:
        V, perm = _load(args)
        report.update(n=V.shape[0], m=V.shape[1], tolerances={"tol": args.tol})
        if args.command != "sweep":
            report["permutation"] = perm
        report.update(COMMANDS[args.command](V, args))
        code = EXIT_OK
    except (InputError, DegenerateTailSum) as exc:
        code = EXIT_NUMERICAL if isinstance(exc, DegenerateTailSum) else EXIT_INPUT
        print(f"linoep {args.command}: {args.input}: {exc}", file=sys.stderr)
        report = {
            "command": args.command,
            "status": "error",
            "code": code,
            "error": type(exc).__name__,
            "message": str(exc),
        }
    _emit(io.dumps(report), args.output)
    return code


def main():
    sys.exit(run())
