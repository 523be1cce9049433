"""``cds`` command line: solve, convert, gen, bench, core decompose, oracle."""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .coredecomp import decompose
from .densest import ALGORITHMS, CLIQUE_ONLY, DsResult, solve
from .graph import Graph, GraphParseError, load_edge_list
from .oracle import OracleLimit, OracleRefused, brute_force_densest
from .pattern import Pattern, PatternError, parse_pattern

EXIT_OK, EXIT_INPUT, EXIT_USAGE = 0, 2, 64

REPORT_KEYS = ("algorithm", "pattern", "n", "m", "density", "vertices", "instance_count", "elapsed_ms", "stats")
STAT_KEYS = ("iterations", "network_nodes", "located_k", "k_max", "peel_length")
TSV_COLUMNS = ("algorithm", "pattern", "n", "m", "num", "den", "float", "instance_count", "elapsed_ms", "vertices")
BENCH_COLUMNS = ("dataset", "pattern", "algorithm", "elapsed_ms", "density", "k_max", "network_sizes", "status")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def sig6(x: float) -> float:
    return float(f"{x:.6g}")


# ---------------------------------------------------------------- inputs

def read_graph(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            return load_edge_list(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except GraphParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def resolve_pattern(selector: str) -> Pattern:
    try:
        return parse_pattern(selector)
    except OSError as exc:
        raise InputError(f"{selector}: {exc.strerror or exc}") from None
    except (PatternError, GraphParseError) as exc:
        if selector.strip().startswith("file:"):
            raise InputError(f"{selector}: {exc}") from None
        raise UsageError(str(exc)) from None


def check_compatible(algo: str, p: Pattern) -> None:
    if algo not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
    if algo in CLIQUE_ONLY and not p.is_clique:
        raise UsageError(f"algorithm {algo!r} needs a clique pattern; use pds-exact or pds-core-exact")


# ---------------------------------------------------------------- reports

def _fix(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def make_report(g: Graph, res: DsResult) -> dict:
    st = res.stats
    if "components" in st:
        nodes = [c["network_nodes"] for c in st["components"]]
    elif "network_nodes" in st:
        nodes = [st["network_nodes"]]
    else:
        nodes = []
    stats = {
        "iterations": st.get("iterations"),
        "network_nodes": nodes,
        "located_k": st.get("located_k"),
        "k_max": st.get("k_max"),
        "peel_length": st.get("peel_length"),
    }
    d = res.density
    return {
        "algorithm": res.algorithm,
        "pattern": res.pattern,
        "n": g.n,
        "m": g.m,
        "density": {"num": d.instance_count, "den": d.vertex_count, "float": sig6(float(d))},
        "vertices": sorted((g.labels[v] for v in res.vertices), key=_label_key),
        "instance_count": d.instance_count,
        "elapsed_ms": round(st.get("elapsed_ms", 0.0), 3),
        "stats": {k: _fix(v) for k, v in stats.items()},
    }


def _label_key(label: str):
    return (0, int(label), "") if re.fullmatch(r"-?\d+", label) else (1, 0, label)


def tsv_row(rep: dict) -> str:
    d = rep["density"]
    cells = [rep["algorithm"], rep["pattern"], rep["n"], rep["m"], d["num"], d["den"], f"{d['float']:.6g}",
             rep["instance_count"], rep["elapsed_ms"], ",".join(rep["vertices"])]
    return "\t".join(str(c) for c in cells)


def emit(rep: dict, fmt: str) -> None:
    if fmt == "tsv":
        print(tsv_row(rep))
    else:
        print(json.dumps(rep, sort_keys=False))


# ---------------------------------------------------------------- GML

class GmlError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


_GML_TOKEN = re.compile(r'\s+|#[^\n]*|(\[|\]|"[^"]*"|[^\s\[\]"]+)')


def _gml_tokens(text: str):
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _GML_TOKEN.match(text, pos)
        if m is None:
            raise GmlError(line, pos - line_start + 1, "unterminated string")
        tok = m.group(1)
        if tok is not None:
            yield tok, line, pos - line_start + 1
        chunk = m.group(0)
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()


def parse_gml(text: str) -> list:
    """Nested ``[(key, value, line, col)]``; list values for bracketed blocks."""
    stack: list[list] = [[]]
    opened: list[tuple[int, int]] = []
    key = None
    for tok, line, col in _gml_tokens(text):
        if key is None:
            if tok == "]":
                if not opened:
                    raise GmlError(line, col, "unmatched ']'")
                opened.pop()
                stack.pop()
                continue
            if tok == "[" or tok.startswith('"'):
                raise GmlError(line, col, f"expected a key, got {tok!r}")
            key = (tok, line, col)
            continue
        if tok == "]":
            raise GmlError(line, col, f"key {key[0]!r} has no value")
        if tok == "[":
            block: list = []
            stack[-1].append((key[0], block, key[1], key[2]))
            stack.append(block)
            opened.append((line, col))
        else:
            stack[-1].append((key[0], tok[1:-1] if tok.startswith('"') else tok, key[1], key[2]))
        key = None
    if key is not None:
        raise GmlError(key[1], key[2], f"key {key[0]!r} has no value")
    if opened:
        line, col = opened[-1]
        raise GmlError(line, col, "unmatched '['")
    return stack[0]


def gml_to_edge_list(text: str) -> str:
    """One ``source target`` line per GML edge, ids passed through verbatim."""
    items = parse_gml(text)
    graphs = [v for k, v, _, _ in items if k == "graph" and isinstance(v, list)]
    body = graphs[0] if graphs else items
    out = []
    for k, v, line, col in body:
        if k == "node" and isinstance(v, list):
            if not any(kk == "id" for kk, *_ in v):
                raise GmlError(line, col, "node without id")
        elif k == "edge" and isinstance(v, list):
            ends = {kk: vv for kk, vv, *_ in v if kk in ("source", "target")}
            for need in ("source", "target"):
                if need not in ends:
                    raise GmlError(line, col, f"edge without {need}")
                if isinstance(ends[need], list) or not ends[need] or re.search(r"\s", ends[need]):
                    raise GmlError(line, col, f"edge {need} is not a plain id")
            out.append(f"{ends['source']} {ends['target']}\n")
    return "".join(out)


# ---------------------------------------------------------------- generator

def gen_er(n: int, p: float, seed: int) -> str:
    rng = random.Random(seed)
    lines = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                lines.append(f"{u} {v}\n")
    return "".join(lines)


# ---------------------------------------------------------------- commands

def _solver_kwargs(args, algo: str, hook) -> dict:
    kw = {}
    if args.enable_instance_prune:
        if algo not in ("exact", "core-exact"):
            raise UsageError("--enable-instance-prune applies to exact and core-exact only")
        kw["prune"] = True
    if hook is not None and algo in ("exact", "core-exact", "pds-exact", "pds-core-exact"):
        kw["hook"] = hook
    if args.shrink != "alpha":
        if algo not in ("core-exact", "pds-core-exact"):
            raise UsageError("--shrink applies to core-exact and pds-core-exact only")
        kw["shrink"] = args.shrink
    return kw


def cmd_solve(args) -> int:
    p = resolve_pattern(args.pattern)
    check_compatible(args.algo, p)
    g = read_graph(args.graph)
    dumps: list[str] = []
    hook = None
    if args.debug_dump_network:
        def hook(net):
            dumps.append(f"# network {len(dumps)} kind={net.kind} alpha={net.alpha} nodes={net.num_nodes}\n" + net.dump())
    res = solve(g, p, args.algo, **_solver_kwargs(args, args.algo, hook))
    if args.debug_dump_network:
        try:
            with open(args.debug_dump_network, "w", encoding="utf-8") as fh:
                fh.write("".join(dumps))
        except OSError as exc:
            raise InputError(f"{args.debug_dump_network}: {exc.strerror or exc}") from None
    emit(make_report(g, res), args.format)
    return EXIT_OK


def cmd_oracle(args) -> int:
    p = resolve_pattern(args.pattern)
    g = read_graph(args.graph)
    try:
        res = brute_force_densest(g, p, OracleLimit(args.oracle_max_n))
    except OracleRefused as exc:
        raise UsageError(str(exc)) from None
    emit(make_report(g, res), args.format)
    return EXIT_OK


def cmd_convert(args) -> int:
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        out = gml_to_edge_list(text)
    except OSError as exc:
        raise InputError(f"{args.input}: {exc.strerror or exc}") from None
    except GmlError as exc:
        raise InputError(f"{args.input}: {exc}") from None
    _write_out(args.output, out)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind != "er":
        raise UsageError(f"unknown generator {args.kind!r}")
    if not 0.0 <= args.p <= 1.0:
        raise UsageError("p must lie in [0, 1]")
    if args.n < 0:
        raise UsageError("n must be non-negative")
    _write_out(args.output, gen_er(args.n, args.p, args.seed))
    return EXIT_OK


def cmd_core(args) -> int:
    p = resolve_pattern(args.pattern)
    g = read_graph(args.graph)
    dec = decompose(g, p)
    print("\n".join(f"{g.labels[v]}\t{dec.core[v]}" for v in range(g.n)))
    return EXIT_OK


@dataclass(frozen=True)
class BenchCell:
    dataset: str
    pattern: str
    algorithm: str


def run_cell(cell: BenchCell) -> str:
    try:
        p = resolve_pattern(cell.pattern)
        check_compatible(cell.algorithm, p)
        g = read_graph(cell.dataset)
        res = solve(g, p, cell.algorithm)
        rep = make_report(g, res)
        sizes = ";".join(",".join(str(x) for x in comp) for comp in rep["stats"]["network_nodes"])
        d = rep["density"]
        cells = [cell.dataset, cell.pattern, cell.algorithm, rep["elapsed_ms"], f"{d['num']}/{d['den']}",
                 rep["stats"]["k_max"], sizes or "-", "ok"]
    except (UsageError, InputError, ValueError) as exc:
        cells = [cell.dataset, cell.pattern, cell.algorithm, "-", "-", "-", "-", f"error: {exc}"]
    return "\t".join("-" if c is None else str(c) for c in cells)


def cmd_bench(args) -> int:
    grid = [BenchCell(d, p, a) for d in args.graphs for p in args.patterns for a in args.algos]
    print("\t".join(BENCH_COLUMNS))
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            for row in pool.map(run_cell, grid):
                print(row, flush=True)
    else:
        for cell in grid:
            print(run_cell(cell), flush=True)
    return EXIT_OK


def _write_out(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cds", description="Densest subgraph discovery under edge, clique and pattern density.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser, required=True)

    s = sub.add_parser("solve", help="find a densest subgraph")
    s.add_argument("--graph", required=True, help="edge-list file")
    s.add_argument("--pattern", default="edge", help="edge, triangle, diamond, 2triangle, c3star, N-clique, N-star, clique:h, star:x, cycle:k, file:path")
    s.add_argument("--algo", required=True, help=", ".join(ALGORITHMS))
    s.add_argument("--format", choices=("json", "tsv"), default="json")
    s.add_argument("--enable-instance-prune", action="store_true", help="drop clique instances that cannot be in the optimum")
    s.add_argument("--debug-dump-network", metavar="FILE", help="write every flow network as 'from to num den' arcs")
    s.add_argument("--shrink", choices=("alpha", "l"), default="alpha", help="core shrink threshold after a feasible guess")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive densest subgraph for tiny graphs")
    o.add_argument("--graph", required=True)
    o.add_argument("--pattern", default="edge")
    o.add_argument("--format", choices=("json", "tsv"), default="json")
    o.add_argument("--oracle-max-n", type=int, default=OracleLimit().max_n)
    o.set_defaults(func=cmd_oracle)

    c = sub.add_parser("convert", help="GML to edge list")
    c.add_argument("input", help="GML file, or - for stdin")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)

    gp = sub.add_parser("gen", help="seeded random graph")
    gp.add_argument("kind", help="er")
    gp.add_argument("n", type=int)
    gp.add_argument("p", type=float)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("-o", "--output")
    gp.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a dataset x pattern x algorithm grid")
    b.add_argument("--graphs", nargs="+", required=True)
    b.add_argument("--patterns", nargs="+", default=["edge"])
    b.add_argument("--algos", nargs="+", default=["peel", "inc", "core-app"])
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    k = sub.add_parser("core", help="core decomposition")
    ksub = k.add_subparsers(dest="action", parser_class=_Parser, required=True)
    kd = ksub.add_parser("decompose", help="print vertex<TAB>core_number")
    kd.add_argument("--graph", required=True)
    kd.add_argument("--pattern", default="edge")
    kd.set_defaults(func=cmd_core)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cds: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"cds: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
