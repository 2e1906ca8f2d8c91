"""Command-line entry point.

Exit codes: 0 ok, 1 usage, 2 input error, 3 size refusal, 4 assertion failure.
Every run writes a manifest (command, arguments, input digests, version,
output digests) unless ``--no-manifest`` is given.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from . import arrangement as arr
from . import chain
from .elimination import MetricsReport, Ordering, eliminate, read_ordering, write_ordering
from .errors import FormatError, InvalidGraphError, InvalidOrderingError, NotChordalError, PreconditionError, SizeLimitError
from .exact import DEFAULT_MAX_VERTICES, METRICS, solve
from .family import VARIANTS, FamilyParams, divergence_table, family_report
from .graph import Graph, format_bipartite, parse_bipartite, read_edge_list, write_edge_list
from .heuristics import HEURISTICS, compare, corpus_paths, load_matrix_market, load_permutation, reports_to_csv

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SIZE, EXIT_ASSERT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- helpers --------------------------------------------------------------------

def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _stringify(obj):
    """Integers become decimal strings so no consumer truncates them to 64 bits."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    return obj


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and obj and all(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        if isinstance(obj, list):
            obj = " ".join("" if v is None else str(v) for v in obj)
        yield prefix.rstrip("."), "" if obj is None else str(obj)


def render(data: dict, fmt: str, table: str | None = None) -> str:
    data = _stringify(data)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "csv":
        if table is not None:
            return table
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flatten(data))
        return buf.getvalue()
    rows = list(_flatten(data))
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _threads() -> int:
    raw = os.environ.get("ORDERCRAFT_THREADS")
    if raw is None:
        return 1
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"ORDERCRAFT_THREADS must be a positive integer, got {raw!r}") from None
    if val < 1:
        raise UsageError(f"ORDERCRAFT_THREADS must be a positive integer, got {raw!r}")
    return val


def _load_graph(path) -> Graph:
    """Edge-list file, or Matrix Market when the name ends in ``.mtx`` or the header says so."""
    path = Path(path)
    if path.suffix == ".mtx":
        return load_matrix_market(path)
    with open(path, "rb") as fh:
        if fh.read(14) == b"%%MatrixMarket":
            return load_matrix_market(path)
    return read_edge_list(path)


class Run:
    """Collects inputs and outputs for the manifest."""

    def __init__(self, args):
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outputs: dict[str, str] = {}

    def read(self, path):
        self.inputs[str(path)] = _sha256(path)
        return path

    def wrote(self, path):
        self.outputs[str(path)] = _sha256(path)

    def manifest(self, argv, stdout_text: str, code: int) -> dict:
        args = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(self.args).items() if k != "func"}
        return {
            "tool": "ordercraft",
            "version": __version__,
            "command": " ".join(filter(None, (self.args.command, getattr(self.args, "action", None)))),
            "argv": list(argv),
            "arguments": _stringify(args),
            "threads": os.environ.get("ORDERCRAFT_THREADS", "1"),
            "inputs": self.inputs,
            "outputs": {**self.outputs, "<stdout>": hashlib.sha256(stdout_text.encode()).hexdigest()},
            "exit_code": code,
        }


# -- commands -------------------------------------------------------------------

def cmd_analyze(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    if a.ordering:
        ordering = read_ordering(run.read(a.ordering), g.n)
        source = str(a.ordering)
    else:
        ordering = HEURISTICS["md"](g)
        source = "md"
    tri, degs = eliminate(g, ordering)
    rep = MetricsReport.from_degrees(degs)
    rep.check(g.n)
    return {"graph": str(a.graph), "n": g.n, "m": g.m, "ordering": source, **rep.as_dict(), "fill": len(tri.fill)}


def cmd_family(run: Run):
    a = run.args
    if a.scale is not None:
        return divergence_table(a.scale, a.variant)
    if a.params is None:
        raise UsageError("give either --params L T C or --scale N")
    rep = family_report(FamilyParams(*a.params), verify=a.verify)
    return rep.as_dict()


def cmd_search(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    res = solve(g, a.metric, a.max_vertices)
    replayed = res.replay(g)
    key = {"fill": "nnz", "flops": "flops", "treewidth": "omega"}[a.metric]
    assert getattr(replayed, key) == res.value, "witness replay disagrees with the optimum"
    out = {"graph": str(a.graph), "n": g.n, "metric": a.metric, "value": res.value,
           "witness": [v + 1 for v in res.witness], "replay": replayed.as_dict()}
    if a.metric == "treewidth":
        out["treewidth"] = res.value - 1
    if a.out:
        write_ordering(res.witness, a.out)
        run.wrote(a.out)
    return out


def _poly(a) -> arr.CostPolynomial:
    try:
        return arr.CostPolynomial.parse(a.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_arrange_cost(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    ordering = read_ordering(run.read(a.ordering), g.n)
    c = _poly(a)
    cost = arr.arrangement_cost(g, ordering, c)
    return {"graph": str(a.graph), "n": g.n, "c": str(c), "c_value": arr.c_value(c, g.n),
            "linear": cost.linear, "quadratic": cost.quadratic,
            "cuts": list(arr.cut_profile(g, ordering).sizes)}


def cmd_arrange_exact(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    c = _poly(a)
    value, ordering = arr.arrangement_exact(g, c, a.direction, a.kind, a.max_vertices)
    if a.out:
        write_ordering(ordering, a.out)
        run.wrote(a.out)
    return {"graph": str(a.graph), "n": g.n, "kind": a.kind, "direction": a.direction,
            "c": str(c), "value": value, "witness": [v + 1 for v in ordering]}


def cmd_arrange_normalize(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    red = arr.maxcut_to_oqa(g, 0, padding=a.padding, c=_poly(a))
    if a.start:
        ordering = read_ordering(run.read(a.start), red.graph.n)
    else:
        seq = list(range(red.graph.n))
        random.Random(a.seed).shuffle(seq)
        ordering = Ordering(tuple(seq))
    res = arr.normalize_arrangement(red, ordering)
    res.blocks.check(red.n_original, red.padding)
    side = res.extracted_side(red.n_original)
    if a.out:
        write_ordering(res.ordering, a.out)
        run.wrote(a.out)
    return {
        "n_original": red.n_original, "padding": red.padding,
        "cost_start": arr.quadratic_cost(red.graph, ordering, arr.c_value(red.c, red.graph.n)),
        "cost_end": arr.quadratic_cost(red.graph, res.ordering, arr.c_value(red.c, red.graph.n)),
        "steps": len(res.trace),
        "blocks": {"boundaries": list(res.blocks.boundaries), "originals": list(res.blocks.n_counts),
                   "padding": list(res.blocks.f_counts), "cuts": list(res.blocks.cuts)},
        "extracted_side": [v + 1 for v in side],
        "extracted_cut": arr.cut_size(g, side),
        "trace": res.trace if a.trace else None,
    }


def _maxcut_reduce(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    red = arr.maxcut_to_oqa(g, a.k, padding=a.padding, c=_poly(a))
    out = {"kind": "maxcut-to-oqa", "n_original": red.n_original, "padding": red.padding,
           "n": red.graph.n, "m": red.graph.m, "k_prime": a.k, "k": red.k,
           "canonical_padding": red.canonical, "c": str(red.c),
           "id_map": {"original": [1, red.n_original], "padding": [red.n_original + 1, red.graph.n]}}
    if a.out_dir:
        out_dir = Path(a.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_edge_list(red.graph, out_dir / "gadget.edges")
        run.wrote(out_dir / "gadget.edges")
    return out


def cmd_arrange_reduce_maxcut(run: Run):
    return _maxcut_reduce(run)


def cmd_reduce_qcc_to_flops(run: Run):
    a = run.args
    b = parse_bipartite(Path(run.read(a.instance)).read_text(), path=str(a.instance))
    inst = chain.qcc_to_flops_instance(b, a.k)
    gad = inst.gadget
    out = {"kind": "qcc-to-flops", "p": b.p, "q": b.q, "n": gad.graph.n, "m": gad.graph.m,
           "k": a.k, "offset": inst.offset, "k_prime": inst.k,
           "id_map": {k: [lo + 1, hi] for k, (lo, hi) in gad.id_map().items()}}
    if a.out_dir:
        out_dir = Path(a.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_edge_list(gad.graph, out_dir / "gadget.edges")
        run.wrote(out_dir / "gadget.edges")
    return out


def cmd_reduce_oqa_to_qcc(run: Run):
    a = run.args
    g = _load_graph(run.read(a.graph))
    inst = chain.oqa_to_qcc_instance(g, a.k)
    bip = inst.gadget.bipartite
    ids = inst.gadget.id_map()
    out = {"kind": "oqa-to-qcc", "n": g.n, "p": bip.p, "q": bip.q, "m": len(bip.edges),
           "designated": bip.designated, "c": str(arr.REDUCTION_POLY),
           "k": a.k, "offset": inst.offset, "k_prime": inst.k,
           "id_map": {
               "P": [1, bip.p],
               "edge_vertices": {e: [x + 1, y + 1] for e, (x, y) in ids["edge_vertices"].items()},
               "R": [[lo + 1, hi] for lo, hi in ids["R"]],
           }}
    if a.out_dir:
        out_dir = Path(a.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "gadget.bip").write_text(format_bipartite(bip))
        run.wrote(out_dir / "gadget.bip")
    return out


def cmd_compare(run: Run):
    a = run.args
    paths = [Path(p) for p in a.matrices]
    if a.corpus:
        paths += corpus_paths()
    if not paths:
        raise UsageError("give at least one matrix or --corpus")
    names = [h for h in a.heuristics.split(",") if h]
    unknown = [h for h in names if h not in HEURISTICS]
    if unknown:
        raise UsageError(f"unknown heuristic(s) {unknown}; choose from {sorted(HEURISTICS)}")
    extra = []
    for spec in a.permutation:
        name, sep, file = spec.partition("=")
        if not sep:
            raise UsageError(f"--permutation expects NAME=FILE, got {spec!r}")
        extra.append((name, Path(file)))
    if extra and len(paths) != 1:
        raise UsageError("--permutation needs exactly one matrix")
    reports = []
    for path in paths:
        g = _load_graph(run.read(path))
        orderings = [(h, HEURISTICS[h](g)) for h in names]
        sources = ["heuristic"] * len(names)
        for name, file in extra:
            orderings.append((name, load_permutation(run.read(file), g.n)))
            sources.append(str(file))
        reports.append(compare(g, orderings, path.stem, sources))
    data = {"reports": [r.as_dict() for r in reports],
            "inversion_count": sum(len(r.inversions()) for r in reports)}
    return data, reports_to_csv(reports)


def cmd_selftest(run: Run):
    from .acceptance import run_all

    only = set(run.args.only) if run.args.only else None
    outcomes = run_all(only)
    for o in outcomes:
        print(o.line(), file=sys.stderr)
    data = {"passed": sum(o.passed for o in outcomes), "total": len(outcomes),
            "criteria": [{"id": o.ident, "name": o.name, "passed": o.passed,
                          "seconds": f"{o.seconds:.3f}", "detail": o.detail} for o in outcomes]}
    return data, None, all(o.passed for o in outcomes)


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--manifest", type=Path, default=Path("ordercraft-manifest.json"),
                        help="where to write the run manifest")
    common.add_argument("--no-manifest", action="store_true")
    common.add_argument("--output", type=Path, help="write the report here instead of stdout")

    p = _Parser(prog="ordercraft", description="Elimination orderings, fill and FLOPs, arrangements and reductions.")
    p.add_argument("--version", action="version", version=f"ordercraft {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("analyze", parents=[common], help="metrics of an ordering (default: minimum degree)")
    s.add_argument("graph", type=Path)
    s.add_argument("--ordering", type=Path)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("family", parents=[common], help="metrics of the two triangulations of the cycle-join family")
    s.add_argument("--params", type=int, nargs=3, metavar=("L", "T", "C"))
    s.add_argument("--scale", type=int, metavar="N")
    s.add_argument("--variant", choices=VARIANTS, default="separation")
    s.add_argument("--verify", action="store_true", help="replay both orderings against the closed forms")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("search", parents=[common], help="exact minimum fill, FLOPs or treewidth")
    s.add_argument("graph", type=Path)
    s.add_argument("--metric", choices=METRICS, default="fill")
    s.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    s.add_argument("--out", type=Path, help="write the optimal ordering here")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("arrange", help="vertex arrangements")
    asub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = asub.add_parser("cost", parents=[common])
    t.add_argument("graph", type=Path)
    t.add_argument("ordering", type=Path)
    t.add_argument("--c", default="0,0,0", help="cost polynomial coefficients c2,c1,c0")
    t.set_defaults(func=cmd_arrange_cost)
    t = asub.add_parser("exact", parents=[common])
    t.add_argument("graph", type=Path)
    t.add_argument("--c", default="0,0,0")
    t.add_argument("--kind", choices=("quadratic", "linear"), default="quadratic")
    t.add_argument("--direction", choices=("min", "max"), default="min")
    t.add_argument("--max-vertices", type=int, default=arr.DEFAULT_ARRANGEMENT_LIMIT)
    t.add_argument("--out", type=Path)
    t.set_defaults(func=cmd_arrange_exact)
    t = asub.add_parser("normalize", parents=[common], help="pad a graph and normalize an arrangement")
    t.add_argument("graph", type=Path)
    t.add_argument("--start", type=Path, help="start arrangement of the padded graph (default: seeded random)")
    t.add_argument("--padding", type=int)
    t.add_argument("--c", default="0,0,0")
    t.add_argument("--trace", action="store_true")
    t.add_argument("--out", type=Path)
    t.set_defaults(func=cmd_arrange_normalize)
    t = asub.add_parser("reduce-maxcut", parents=[common])
    t.add_argument("graph", type=Path)
    t.add_argument("--k", type=int, required=True, help="cut size threshold")
    t.add_argument("--padding", type=int)
    t.add_argument("--c", default="0,0,0")
    t.add_argument("--out-dir", type=Path)
    t.set_defaults(func=cmd_arrange_reduce_maxcut)

    s = sub.add_parser("reduce", help="reduction gadgets")
    rsub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = rsub.add_parser("oqa-to-qcc", parents=[common])
    t.add_argument("graph", type=Path)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--out-dir", type=Path)
    t.set_defaults(func=cmd_reduce_oqa_to_qcc)
    t = rsub.add_parser("qcc-to-flops", parents=[common])
    t.add_argument("instance", type=Path, help="bipartite instance file")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--out-dir", type=Path)
    t.set_defaults(func=cmd_reduce_qcc_to_flops)
    t = rsub.add_parser("maxcut-to-oqa", parents=[common])
    t.add_argument("graph", type=Path)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--padding", type=int)
    t.add_argument("--c", default="0,0,0")
    t.add_argument("--out-dir", type=Path)
    t.set_defaults(func=cmd_arrange_reduce_maxcut)

    s = sub.add_parser("compare", parents=[common], help="heuristic fill/FLOPs comparison")
    s.add_argument("matrices", nargs="*")
    s.add_argument("--corpus", action="store_true", help="include the bundled matrices")
    s.add_argument("--heuristics", default="md,deficiency")
    s.add_argument("--permutation", action="append", default=[], metavar="NAME=FILE")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", type=int, nargs="*")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args)
    code = EXIT_OK
    text = ""
    try:
        _threads()
        result = args.func(run)
        table, ok = None, True
        if isinstance(result, tuple):
            result, table, *rest = result
            ok = rest[0] if rest else True
        text = render(result, args.format, table)
        if args.output:
            args.output.write_text(text)
            run.wrote(args.output)
        else:
            sys.stdout.write(text)
        if not ok:
            code = EXIT_ASSERT
    except UsageError as exc:
        print(f"ordercraft: error: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except SizeLimitError as exc:
        print(f"ordercraft: refused: {exc}", file=sys.stderr)
        code = EXIT_SIZE
    except (FormatError, InvalidGraphError, InvalidOrderingError, PreconditionError, NotChordalError, OSError, ValueError) as exc:
        print(f"ordercraft: input error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except AssertionError as exc:
        print(f"ordercraft: assertion failed: {exc}", file=sys.stderr)
        code = EXIT_ASSERT
    if not args.no_manifest:
        try:
            args.manifest.write_text(json.dumps(run.manifest(argv, text, code), indent=2) + "\n")
        except OSError as exc:
            print(f"ordercraft: cannot write manifest: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
