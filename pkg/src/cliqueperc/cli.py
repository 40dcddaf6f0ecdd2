"""Command-line entry points: ``percolate`` and ``percolate-sweep``."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np
from scipy.sparse import csgraph, csr_matrix

from .cliques import DEFAULT_CLIQUE_CAP, CliqueCapExceeded, clique_size_distribution, enumerate_maximal_cliques, format_cliques
from .engines import DEFAULT_NAIVE_CAP, STATS_COLUMNS, NaiveCapExceeded, alg1_percolate, format_cover, naive_percolate
from .graph import EdgeListParseError, Graph, load_graph
from .harness import (
    EdgeBudget, GNParams, SweepReport, count_clique_graph_edges, equivalence_sweep, generate_gn, sweep_graphs,
)
from .scp import scp_percolate
from .tree import alg2_percolate, build_clique_tree

EXIT_USAGE, EXIT_CAP, EXIT_IO = 2, 3, 4


def _parse_gn(text: str) -> tuple[int, int, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--gn expects C,S,PIN,POUT")
    try:
        return int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"--gn: {exc}") from None


def _parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError("--k-range expects A..B") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("--k-range is empty")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="percolate", description="k-clique percolation communities.")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="edge-list file (or Facebook100 .mat)")
    src.add_argument("--gn", type=_parse_gn, metavar="C,S,PIN,POUT", help="generate a planted-partition graph")
    p.add_argument("--algorithm", choices=("naive", "alg1", "alg2", "scp"), default="alg1")
    ks = p.add_mutually_exclusive_group()
    ks.add_argument("--k", type=int)
    ks.add_argument("--all-k", action="store_true", help="every k from 3 to the largest clique size")
    ks.add_argument("--k-range", type=_parse_range, metavar="A..B")
    p.add_argument("--min-clique-size", type=int, help="default: the smallest k requested (at least 3)")
    p.add_argument("--fpr", type=float, default=0.01, help="Bloom filter false-positive target (alg2)")
    p.add_argument("--clique-cap", type=int, default=DEFAULT_CLIQUE_CAP)
    p.add_argument("--naive-cap", type=int, default=DEFAULT_NAIVE_CAP)
    p.add_argument("--cover-out", metavar="PATH", help="default: stdout")
    p.add_argument("--stats-out", metavar="PATH")
    p.add_argument("--dist-out", metavar="PATH", help="maximal-clique size histogram CSV")
    p.add_argument("--cliques-out", metavar="PATH", help="dump maximal cliques, one per line")
    p.add_argument("--cgbound", action="store_true", help="count clique-graph edges instead of percolating")
    p.add_argument("--budget-pairs", type=int)
    p.add_argument("--budget-secs", type=float)
    p.add_argument("--seed", type=int, default=0, help="generator seed for --gn")
    p.add_argument("--network", help="name used in stats rows")
    return p


def _k_values(args, max_clique: int) -> list[int]:
    if args.all_k:
        return list(range(3, max_clique + 1))
    if args.k_range:
        lo, hi = args.k_range
        return list(range(lo, hi + 1))
    return [args.k if args.k is not None else 3]


def _components_cover_text(g: Graph) -> str:
    adj = csr_matrix((np.ones(len(g.indices), dtype=np.int8), g.indices, g.indptr), shape=(g.node_count,) * 2)
    n, labels = csgraph.connected_components(adj, directed=False)
    deg = g.degrees()
    lines = []
    cid = 0
    for c in range(n):
        members = np.flatnonzero((labels == c) & (deg > 0))
        if len(members):
            lines.append(f"2\t{cid}\t{' '.join(sorted(g.labels[v] for v in members))}\n")
            cid += 1
    return "".join(lines)


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="") if path else sys.stdout


def run(args) -> int:
    if args.input:
        g = load_graph(args.input)
        network = args.network or os.path.basename(args.input)
    else:
        c, s, pin, pout = args.gn
        g = generate_gn(GNParams(c, s, pin, pout, seed=args.seed))
        network = args.network or f"gn-{c}-{s}-{pin}-{pout}-s{args.seed}"

    min_size = args.min_clique_size
    if min_size is None:
        if args.k_range:
            min_size = max(3, args.k_range[0])
        elif args.k is not None:
            min_size = max(3, args.k)
        else:
            min_size = 3
    store = enumerate_maximal_cliques(g, min_size=min_size, cap=args.clique_cap)
    ks = _k_values(args, store.max_size)
    if any(k < 2 for k in ks):
        print("percolate: k must be >= 2", file=sys.stderr)
        return EXIT_USAGE
    if any(k >= 3 and k < min_size for k in ks):
        print(f"percolate: --min-clique-size {min_size} exceeds requested k", file=sys.stderr)
        return EXIT_USAGE

    if args.dist_out:
        with open(args.dist_out, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["size", "count"])
            w.writerows(clique_size_distribution(store).items())
    if args.cliques_out:
        with open(args.cliques_out, "w", encoding="utf-8") as fh:
            fh.write(format_cliques(store, g.labels))

    if args.cgbound:
        max_pairs = args.budget_pairs
        if max_pairs is None and args.budget_secs is None:
            max_pairs = np.iinfo(np.int64).max
        budget = EdgeBudget(max_pairs, args.budget_secs)
        out = _open_out(args.stats_out)
        try:
            w = csv.writer(out)
            w.writerow(["network", "k", "clique_graph_edges", "exact"])
            for k in ks:
                if k >= 3:
                    edges, exact = count_clique_graph_edges(store, k, budget)
                    w.writerow([network, k, edges, int(exact)])
        finally:
            if out is not sys.stdout:
                out.close()
        return 0

    tree = build_clique_tree(store, args.fpr) if args.algorithm == "alg2" and len(store) else None
    cover_parts, stat_rows = [], []
    for k in ks:
        if k == 2:
            print("percolate: k=2 is plain connected components; running that instead", file=sys.stderr)
            cover_parts.append(_components_cover_text(g))
            continue
        if args.algorithm == "naive":
            cover, stats = naive_percolate(store, k, cap=args.naive_cap)
        elif args.algorithm == "alg1":
            cover, stats = alg1_percolate(store, k)
        elif args.algorithm == "alg2":
            if tree is None:
                cover, stats = alg1_percolate(store, k)  # empty store: nothing to search
                stats.algorithm = "alg2"
            else:
                tree.reset_visited()
                cover, stats = alg2_percolate(tree, store, k)
        else:
            res = scp_percolate(g, k, cap=args.clique_cap)
            cover, stats = res.cover, res.stats
        cover_parts.append(format_cover(cover, g.labels))
        stat_rows.append(stats.row(network))

    out = _open_out(args.cover_out)
    try:
        out.write("".join(cover_parts))
    finally:
        if out is not sys.stdout:
            out.close()
    if args.stats_out:
        with open(args.stats_out, "w", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=STATS_COLUMNS)
            w.writeheader()
            w.writerows(stat_rows)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.fpr is not None and not 0.0 < args.fpr < 1.0:
        parser.error("--fpr must lie in (0, 1)")
    if args.k is not None and args.k < 2:
        parser.error("--k must be >= 2")
    if args.min_clique_size is not None and args.min_clique_size < 1:
        parser.error("--min-clique-size must be >= 1")
    if args.gn is not None:
        c, s, pin, pout = args.gn
        try:
            GNParams(c, s, pin, pout)
        except ValueError as exc:
            parser.error(f"--gn: {exc}")
    try:
        return run(args)
    except (CliqueCapExceeded, NaiveCapExceeded) as exc:
        print(f"percolate: cap exceeded: {exc.cap_name} ({exc})", file=sys.stderr)
        return EXIT_CAP
    except (OSError, EdgeListParseError, UnicodeDecodeError) as exc:
        print(f"percolate: {exc}", file=sys.stderr)
        return EXIT_IO


def sweep_main(argv=None) -> int:
    """Cross-engine equivalence sweep over seeded random graphs."""
    p = argparse.ArgumentParser(prog="percolate-sweep", description=sweep_main.__doc__)
    p.add_argument("--er", type=int, default=200, help="number of Erdos-Renyi graphs")
    p.add_argument("--er-max-nodes", type=int, default=30)
    p.add_argument("--gn-graphs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    args = p.parse_args(argv)
    report = SweepReport()
    graphs = list(sweep_graphs(args.er, args.er_max_nodes, args.gn_graphs, args.seed))
    for name, g, params in graphs:
        report.merge(equivalence_sweep(g, network=name))
        report.meta.setdefault("graphs", []).append({"network": name, **params})
    if args.csv:
        report.write_csv(args.csv)
    if args.json:
        report.write_json(args.json)
    print(json.dumps({"graphs": len(graphs), "runs": len(report.rows), "mismatches": len(report.mismatches),
                      "forest_violations": len(report.forest_violations)}))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
