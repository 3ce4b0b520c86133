"""Command line front end.

Exit codes: 0 success; 1 domain error or failed verification; 2 input/parse
error; 3 policy bound exceeded.  Errors go to stderr as one-line JSON objects
so scripted callers can branch on them.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .bilabelled import blg_to_json
from .diagram_gen import diagram_counts, generate_diagrams
from .graph_core import (Graph, builtin_graph, builtin_names, graph_from_json,
                         graph_to_json, longest_trail)
from .hom_matrix import all_index_tuples
from .oracle_verify import check_functor, check_spanning, random_functor_triple
from .perm_group import automorphism_group, group_to_json, orbit_count
from .policy import MAX_DIAGRAMS, PolicyBoundError
from .spanning_set import (build_spanning_set, feature_spanning_set,
                           spanning_from_json, spanning_to_csv,
                           spanning_to_json, weight_matrix)

__all__ = ["main"]

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2
EXIT_POLICY = 3


class _InputError(Exception):
    """Bad command input (unknown builtin, malformed JSON, bad weights)."""


# ---------------------------------------------------------------------------
# input helpers
# ---------------------------------------------------------------------------

def _load_json_arg(text: str):
    """Parse an argument that is either inline JSON or a path to a JSON file."""
    stripped = text.strip()
    if not stripped.startswith(("{", "[")):
        try:
            stripped = Path(text).read_text()
        except OSError as exc:
            raise _InputError(f"cannot read {text!r}: {exc}") from exc
    try:
        return json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise _InputError(f"malformed JSON: {exc}") from exc


def _resolve_graph(args) -> Graph:
    if getattr(args, "builtin", None):
        try:
            return builtin_graph(args.builtin)
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
    if getattr(args, "graph", None):
        try:
            return graph_from_json(_load_json_arg(args.graph))
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
    raise _InputError("a graph is required: pass --builtin NAME or --graph SPEC")


def _case_name(args) -> str:
    if getattr(args, "builtin", None):
        return args.builtin
    return "graph"


def _parse_weights(text: str) -> list[float]:
    stripped = text.strip()
    try:
        if stripped.startswith("["):
            vals = json.loads(stripped)
        else:
            vals = [float(x) for x in stripped.split(",") if x.strip() != ""]
        return [float(x) for x in vals]
    except (ValueError, json.JSONDecodeError) as exc:
        raise _InputError(f"cannot parse weights {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(args, payload: dict, *, csv: str | None = None,
          pretty: str | None = None) -> None:
    fmt = args.format
    if fmt == "json":
        _write(args, json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        if csv is None:
            raise _InputError(f"csv output is not available for this command")
        _write(args, csv if csv.endswith("\n") or not csv else csv + "\n")
    else:
        _write(args, (pretty if pretty is not None
                      else json.dumps(payload, indent=2)) + "\n")


def _row_label(tup: tuple[int, ...]) -> str:
    return "(" + ",".join(str(t) for t in tup) + ")"


def _pretty_matrix(rows, n: int, l: int) -> str:
    labels = [_row_label(t) for t in all_index_tuples(n, l)]
    width = max(len(s) for s in labels)
    lines = []
    for label, row in zip(labels, rows):
        lines.append(f"{label.rjust(width)}  " +
                     " ".join(str(v) for v in row))
    return "\n".join(lines)


def _float_cell(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_aut(args) -> int:
    g = _resolve_graph(args)
    gt = automorphism_group(g)
    payload = group_to_json(gt)
    csv = "\n".join(",".join(str(v) for v in el) for el in gt.elements) + "\n"
    pretty = (f"n={gt.n} order={gt.order}\n"
              + "\n".join(" ".join(str(v) for v in el) for el in gt.elements))
    _emit(args, payload, csv=csv, pretty=pretty)
    return EXIT_OK


def _cmd_trail(args) -> int:
    g = _resolve_graph(args)
    m = longest_trail(g)
    _emit(args, {"trail_length": m}, csv=f"{m}\n", pretty=str(m))
    return EXIT_OK


def _cmd_diagrams(args) -> int:
    g = _resolve_graph(args)
    gens = generate_diagrams(g, args.k, args.l, max_diagrams=args.max_diagrams)
    payload = {
        "counts": {str(s): c for s, c in sorted(diagram_counts(g, args.k, args.l).items())},
        "diagrams": [{"stream_index": i,
                      "provenance": gd.provenance,
                      "diagram": blg_to_json(gd.diagram)}
                     for i, gd in enumerate(gens)],
    }
    csv_lines = [f"{i},{gd.provenance['step']},"
                 f"{json.dumps(gd.provenance, separators=(',', ':'))}"
                 for i, gd in enumerate(gens)]
    counts = diagram_counts(g, args.k, args.l)
    pretty_lines = [f"{sum(counts.values())} diagrams "
                    + " ".join(f"step{s}={c}" for s, c in sorted(counts.items()) if c)]
    for i, gd in enumerate(gens):
        pretty_lines.append(
            f"{i:>5}  " + json.dumps(gd.provenance, separators=(',', ':')))
    _emit(args, payload, csv="\n".join(csv_lines) + "\n",
          pretty="\n".join(pretty_lines))
    return EXIT_OK


def _spanset_output(args, ss) -> None:
    payload = spanning_to_json(ss)
    pretty_lines = [f"{len(ss.items)} matrices over n={ss.graph.n} "
                    f"for order ({ss.k},{ss.l}); "
                    f"{len(ss.zero_dropped)} zero, "
                    f"{len(ss.duplicates)} duplicates dropped"]
    for idx, item in enumerate(ss.items):
        pretty_lines.append(
            f"\nitem {idx} (stream {item.stream_index}) "
            + json.dumps(item.provenance, separators=(',', ':')))
        pretty_lines.append(_pretty_matrix(item.matrix.rows(), ss.graph.n, ss.l))
    _emit(args, payload, csv=spanning_to_csv(ss), pretty="\n".join(pretty_lines))


def _cmd_spanset(args) -> int:
    g = _resolve_graph(args)
    ss = build_spanning_set(g, args.k, args.l,
                            max_diagrams=args.max_diagrams,
                            reduce=args.reduce_to_basis)
    _spanset_output(args, ss)
    return EXIT_OK


def _cmd_bias(args) -> int:
    g = _resolve_graph(args)
    ss = build_spanning_set(g, 0, args.l, max_diagrams=args.max_diagrams,
                            reduce=args.reduce_to_basis)
    _spanset_output(args, ss)
    return EXIT_OK


def _cmd_weight(args) -> int:
    weights = _parse_weights(args.weights)
    if args.spanset:
        try:
            ss = spanning_from_json(_load_json_arg(args.spanset))
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
    else:
        g = _resolve_graph(args)
        if args.k is None or args.l is None:
            raise _InputError("--k and --l are required when building fresh")
        ss = build_spanning_set(g, args.k, args.l,
                                max_diagrams=args.max_diagrams)
    w = weight_matrix(ss, weights)
    entries = [[float(x) for x in row] for row in w]
    payload = {"n": ss.graph.n, "k": ss.k, "l": ss.l, "entries": entries}
    csv = "\n".join(",".join(_float_cell(x) for x in row)
                    for row in entries) + "\n"
    pretty = _pretty_matrix([[_float_cell(x) for x in row] for row in entries],
                            ss.graph.n, ss.l)
    _emit(args, payload, csv=csv, pretty=pretty)
    return EXIT_OK


def _cmd_features(args) -> int:
    g = _resolve_graph(args)
    base = build_spanning_set(g, args.k, args.l,
                              max_diagrams=args.max_diagrams)
    mats = feature_spanning_set(g, args.k, args.l, args.d_k, args.d_l,
                                max_diagrams=args.max_diagrams)
    per_base = args.d_l * args.d_k
    items = []
    for idx, mat in enumerate(mats):
        b, rem = divmod(idx, per_base)
        i, j = divmod(rem, args.d_k)
        items.append({
            "provenance": base.items[b].provenance,
            "feature": [i + 1, j + 1],
            "diagram": blg_to_json(base.items[b].diagram),
            "matrix": mat,
        })
    payload = {
        "graph": graph_to_json(g),
        "k": args.k, "l": args.l, "d_k": args.d_k, "d_l": args.d_l,
        "items": items,
    }
    blocks = ["\n".join(",".join(str(v) for v in row) for row in mat)
              for mat in mats]
    csv = "\n\n".join(blocks) + ("\n" if blocks else "")
    pretty = (f"{len(mats)} feature matrices "
              f"({len(base.items)} base x {args.d_l}x{args.d_k} units)")
    _emit(args, payload, csv=csv, pretty=pretty)
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = _resolve_graph(args)
    ss = build_spanning_set(g, args.k, args.l, max_diagrams=args.max_diagrams)
    report = check_spanning(ss, full_group=args.full_group_check)
    functor_failures = []
    if args.functor_samples:
        rng = random.Random(args.seed)
        for i in range(args.functor_samples):
            h1, h2, target = random_functor_triple(rng)
            if not check_functor(h1, h2, target):
                functor_failures.append({"sample": i})
    payload = {
        "case": _case_name(args),
        "k": args.k,
        "l": args.l,
        "rank": report["rank"],
        "dim": report["dim"],
        "spanning": report["spanning"],
        "equivariance_failures": report["equivariance_failures"],
        "functor_failures": functor_failures,
    }
    ok = (report["spanning"] and not report["equivariance_failures"]
          and not functor_failures and report["rank"] == report["dim"])
    pretty = (f"case {payload['case']} ({args.k},{args.l}): "
              f"rank {report['rank']} / dim {report['dim']}, "
              f"spanning={'yes' if report['spanning'] else 'NO'}, "
              f"equivariance failures={len(report['equivariance_failures'])}, "
              f"functor failures={len(functor_failures)}")
    _emit(args, payload, pretty=pretty)
    return EXIT_OK if ok else EXIT_DOMAIN


def _cmd_dim(args) -> int:
    g = _resolve_graph(args)
    gt = automorphism_group(g)
    d = orbit_count(gt, args.k + args.l)
    _emit(args, {"dim": d}, csv=f"{d}\n", pretty=str(d))
    return EXIT_OK


def _cmd_report(args) -> int:
    from .report import write_report  # matplotlib import deferred

    g = _resolve_graph(args)
    ss = build_spanning_set(g, args.k, args.l, max_diagrams=args.max_diagrams,
                            reduce=args.reduce_to_basis)
    paths = write_report(ss, args.outdir, dpi=args.dpi,
                         max_panels=args.max_panels)
    payload = {"written": {kind: str(p) for kind, p in paths.items()}}
    pretty = "\n".join(f"{kind}: {p}" for kind, p in paths.items())
    _emit(args, payload, pretty=pretty)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", "-b", metavar="NAME",
                   help="built-in graph: " + " | ".join(builtin_names()))
    p.add_argument("--graph", "-g", metavar="SPEC",
                   help="graph as inline JSON or a path to a JSON file")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", "-f", choices=("json", "csv", "pretty"),
                   default="json")
    p.add_argument("--out", "-o", metavar="FILE",
                   help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="homspan",
        description="Spanning sets of automorphism-equivariant weight "
                    "matrices via exact homomorphism counting.")
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text, *, graph=True, kl=False, span=False):
        p = sub.add_parser(name, help=help_text)
        if graph:
            _add_graph_args(p)
        if kl:
            p.add_argument("--k", type=int, required=True,
                           help="input tensor order")
            p.add_argument("--l", type=int, required=True,
                           help="output tensor order")
        if span:
            p.add_argument("--max-diagrams", type=int, default=MAX_DIAGRAMS,
                           help="policy cap on generated diagrams "
                                f"(default {MAX_DIAGRAMS})")
        _add_common(p)
        p.set_defaults(fn=fn)
        return p

    command("aut", _cmd_aut, "automorphism group of a graph")
    command("trail", _cmd_trail, "longest edge-repeat-free walk length")
    command("diagrams", _cmd_diagrams, "generated diagram stream",
            kl=True, span=True)

    p = command("spanset", _cmd_spanset, "spanning set of weight matrices",
                kl=True, span=True)
    p.add_argument("--reduce-to-basis", action="store_true",
                   help="greedily keep only rank-increasing matrices")

    p = command("bias", _cmd_bias, "spanning set for constant terms",
                span=True)
    p.add_argument("--l", type=int, required=True, help="output tensor order")
    p.add_argument("--reduce-to-basis", action="store_true",
                   help="greedily keep only rank-increasing matrices")

    p = command("weight", _cmd_weight, "weighted sum of spanning matrices",
                span=True)
    p.add_argument("--k", type=int, help="input tensor order")
    p.add_argument("--l", type=int, help="output tensor order")
    p.add_argument("--weights", "-w", required=True,
                   help="coefficients: comma separated or a JSON array")
    p.add_argument("--spanset", metavar="SPEC",
                   help="reuse a spanning set previously written as JSON")

    p = command("features", _cmd_features,
                "spanning set between feature-valued tensor spaces",
                kl=True, span=True)
    p.add_argument("--d-k", type=int, required=True,
                   help="input feature dimension")
    p.add_argument("--d-l", type=int, required=True,
                   help="output feature dimension")

    p = command("verify", _cmd_verify,
                "check equivariance and spanning of the built set",
                kl=True, span=True)
    p.add_argument("--full-group-check", action="store_true",
                   help="check every automorphism, not just generators")
    p.add_argument("--functor-samples", type=int, default=0,
                   help="also run this many random composition/tensor/"
                        "transpose identity checks")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the randomized checks")

    command("dim", _cmd_dim, "dimension of the equivariant space", kl=True)

    p = command("report", _cmd_report,
                "write matrices as CSV/JSON plus a rendered figure",
                kl=True, span=True)
    p.add_argument("--reduce-to-basis", action="store_true")
    p.add_argument("--outdir", required=True, help="output directory")
    p.add_argument("--dpi", type=int, default=150)
    p.add_argument("--max-panels", type=int, default=64,
                   help="cap on heatmap panels in the figure")

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _InputError as exc:
        sys.stderr.write(json.dumps(
            {"error": str(exc), "exit_code": EXIT_PARSE}) + "\n")
        return EXIT_PARSE
    except PolicyBoundError as exc:
        sys.stderr.write(json.dumps(
            {"error": str(exc), "exit_code": EXIT_POLICY}) + "\n")
        return EXIT_POLICY
    except ValueError as exc:
        sys.stderr.write(json.dumps(
            {"error": str(exc), "exit_code": EXIT_DOMAIN}) + "\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
