"""Command-line front end.

Results go to standard output; convergence reports and diagnostics go to
standard error.  Exit status: 0 success, 1 failed ``--check``, 2 input
error, 3 non-convergence (the partial result is still written).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .generators import bowtie_graph
from .graph import DirectedGraph, GraphFormatError, from_edge_list, to_edge_list
from .linalg import (
    ORACLE_MAX_DIM,
    ConvergenceReport,
    ZeroOperatorError,
    dense_projection_oracle,
    frobenius_norm,
    kronecker_operator,
    matrix_to_csv,
    matrix_to_json,
    one_norm,
)
from .similarity import (
    FastPathMismatch,
    IterationConfig,
    central_scores,
    hub_authority_scores,
    self_similarity,
    similarity_matrix,
    support_pattern,
)
from .synonyms import UnknownWordError, build_dictionary_graph, rank_synonyms

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NOT_CONVERGED = 3


class InputError(Exception):
    """Bad user input; reported as a one-line diagnostic with exit status 2."""


def _open_text(path: str, stdin: TextIO):
    if path == "-":
        return stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc.strerror}") from None


def _load_graph(path: str, stdin: TextIO) -> DirectedGraph:
    fh = _open_text(path, stdin)
    try:
        g = from_edge_list(fh)
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    finally:
        if fh is not stdin:
            fh.close()
    return g


def _need_edges(g: DirectedGraph, path: str) -> None:
    if g.edge_count == 0:
        raise InputError(f"{path}: graph has no edges")


def _config(args) -> IterationConfig:
    try:
        return IterationConfig(
            tolerance=args.tol,
            max_operator_applications=args.max_iters,
            use_fast_paths=not getattr(args, "no_fast_path", False),
            verify_fast_paths=getattr(args, "check", False),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _report(name: str, report: ConvergenceReport, err: TextIO, **extra) -> int:
    fields = " ".join(f"{k}={v}" for k, v in extra.items())
    print(f"{name}: {report}" + (f" {fields}" if fields else ""), file=err)
    if not report.converged:
        print(f"{name}: warning: did not converge; result is the last iterate", file=err)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _write_matrix(m: np.ndarray, fmt: str, out: TextIO) -> None:
    out.write(matrix_to_json(m) + "\n" if fmt == "json" else matrix_to_csv(m))


def _write_scores(g: DirectedGraph, columns: dict[str, np.ndarray], fmt: str, out: TextIO) -> None:
    if fmt == "json":
        obj = {"vertices": [g.label(k) for k in range(g.n)]}
        obj.update({name: col.tolist() for name, col in columns.items()})
        out.write(json.dumps(obj) + "\n")
        return
    cols = list(columns.values())
    for k in range(g.n):
        out.write("\t".join([g.label(k)] + [f"{c[k]:.17g}" for c in cols]) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_similarity(args, out, err, stdin) -> int:
    ga = _load_graph(args.graph_a, stdin)
    gb = _load_graph(args.graph_b, stdin)
    _need_edges(ga, args.graph_a)
    _need_edges(gb, args.graph_b)
    res = similarity_matrix(ga, gb, _config(args))
    _write_matrix(res.scores, args.format, out)
    status = _report(
        "similarity", res.report, err, method=res.method, one_norm=f"{one_norm(res.scores):.17g}"
    )
    if args.check:
        if ga.n * gb.n > ORACLE_MAX_DIM:
            print(f"check: skipped, product size {ga.n * gb.n} > {ORACLE_MAX_DIM}", file=err)
        else:
            oracle = dense_projection_oracle(kronecker_operator(ga, gb), np.ones((gb.n, ga.n)))
            gap = frobenius_norm(oracle - res.scores)
            print(f"check: oracle distance={gap:.3e}", file=err)
            if gap > 1e-7:
                return EXIT_CHECK_FAILED
    return status


def _cmd_self_similarity(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    _need_edges(g, args.graph)
    res = self_similarity(g, _config(args))
    _write_matrix(res.scores, args.format, out)
    return _report("self-similarity", res.report, err, method=res.method)


def _cmd_hub_authority(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    _need_edges(g, args.graph)
    hub, auth = hub_authority_scores(g, _config(args))
    _write_scores(g, {"hub": hub.values, "authority": auth.values}, args.format, out)
    return max(_report("hub", hub.report, err), _report("authority", auth.report, err))


def _cmd_central(args, out, err, stdin) -> int:
    g = _load_graph(args.graph, stdin)
    _need_edges(g, args.graph)
    sc = central_scores(g, _config(args))
    _write_scores(g, {"central": sc.values}, args.format, out)
    return _report("central", sc.report, err)


def _cmd_support(args, out, err, stdin) -> int:
    ga = _load_graph(args.graph_a, stdin)
    gb = _load_graph(args.graph_b, stdin)
    pattern = support_pattern(ga, gb).astype(int)
    if args.format == "json":
        out.write(json.dumps({"rows": gb.n, "cols": ga.n, "data": pattern.ravel().tolist()}) + "\n")
    else:
        for row in pattern:
            out.write(",".join(str(v) for v in row) + "\n")
    return EXIT_OK


def _cmd_synonyms(args, out, err, stdin) -> int:
    fh = _open_text(args.dict, stdin)
    try:
        d = build_dictionary_graph(fh)
    except GraphFormatError as exc:
        raise InputError(f"{args.dict}: {exc}") from None
    finally:
        if fh is not stdin:
            fh.close()
    if args.top is not None and args.top < 0:
        raise InputError("--top must be non-negative")
    try:
        ranking = rank_synonyms(d, args.word, _config(args))
    except UnknownWordError as exc:
        raise InputError(f"{args.dict}: {exc}") from None
    except ZeroOperatorError:
        raise InputError(f"{args.word!r}: neighborhood graph has no edges") from None
    if args.format == "json":
        out.write(json.dumps({
            "query": ranking.query,
            "query_score": ranking.query_score,
            "ranking": [{"word": w, "score": s} for w, s in ranking.top(args.top)],
        }) + "\n")
    else:
        out.write(ranking.to_tsv(args.top))
    return _report("synonyms", ranking.report, err)


def _cmd_bowtie(args, out, err, stdin) -> int:
    try:
        g = bowtie_graph(args.left, args.right)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(to_edge_list(g))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_iteration_flags(p: argparse.ArgumentParser, fast_path: bool = False) -> None:
    p.add_argument("--tol", type=float, default=1e-10, help="stopping tolerance (default 1e-10)")
    p.add_argument(
        "--max-iters", type=int, default=200_000, help="operator application budget"
    )
    if fast_path:
        p.add_argument(
            "--no-fast-path", action="store_true", help="always run the generic iteration"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphsim", description="Vertex similarity scores for directed graphs."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("similarity", help="similarity matrix of two graphs")
    p.add_argument("--graph-a", required=True, metavar="F", help="structure graph (columns)")
    p.add_argument("--graph-b", required=True, metavar="F", help="scored graph (rows)")
    _add_iteration_flags(p, fast_path=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument(
        "--check", action="store_true", help="cross-check against the dense Kronecker oracle"
    )
    p.set_defaults(func=_cmd_similarity)

    p = sub.add_parser("self-similarity", help="similarity of a graph with itself")
    p.add_argument("--graph", required=True, metavar="F")
    _add_iteration_flags(p, fast_path=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_self_similarity)

    p = sub.add_parser("hub-authority", help="hub and authority scores")
    p.add_argument("--graph", required=True, metavar="F")
    _add_iteration_flags(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=_cmd_hub_authority)

    p = sub.add_parser("central", help="central scores (middle of 1->2->3)")
    p.add_argument("--graph", required=True, metavar="F")
    _add_iteration_flags(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=_cmd_central)

    p = sub.add_parser("support", help="predicted non-zero pattern of the similarity matrix")
    p.add_argument("--graph-a", required=True, metavar="F")
    p.add_argument("--graph-b", required=True, metavar="F")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_support)

    p = sub.add_parser("synonyms", help="rank synonym candidates from a dictionary")
    p.add_argument("--dict", required=True, metavar="F", help="headword<TAB>tokens file")
    p.add_argument("--word", required=True, metavar="W")
    p.add_argument("--top", type=int, default=None, metavar="K")
    _add_iteration_flags(p)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=_cmd_synonyms)

    p = sub.add_parser("bowtie", help="emit a directed bow-tie edge list")
    p.add_argument("--left", required=True, type=int, metavar="M", help="vertices pointing in")
    p.add_argument("--right", required=True, type=int, metavar="N", help="vertices pointed to")
    p.set_defaults(func=_cmd_bowtie)

    return parser


def main(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
    stdin: TextIO | None = None,
) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    inp = stdin or sys.stdin
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err, inp)
    except InputError as exc:
        print(f"graphsim {args.command}: error: {exc}", file=err)
        return EXIT_INPUT
    except FastPathMismatch as exc:
        print(f"graphsim {args.command}: check failed: {exc}", file=err)
        return EXIT_CHECK_FAILED
    except (ZeroOperatorError, ValueError, OverflowError) as exc:
        print(f"graphsim {args.command}: error: {exc}", file=err)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
