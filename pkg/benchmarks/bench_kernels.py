"""Time the percolation kernels compiled with numba against the pure-Python fallback.

Each mode runs in its own interpreter because the switch is read at import time.

    python benchmarks/bench_kernels.py [--nodes 300] [--groups 90] [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from cliqueperc import USING_NUMBA
from cliqueperc.cliques import enumerate_maximal_cliques
from cliqueperc.engines import alg1_percolate
from cliqueperc.harness import EdgeBudget, count_clique_graph_edges, generate_planted_cliques
from cliqueperc.tree import alg2_percolate, build_clique_tree

nodes, groups, repeat = map(int, sys.argv[1:4])
s = enumerate_maximal_cliques(generate_planted_cliques(nodes, groups, seed=0), 3)
t = build_clique_tree(s)
ks = range(3, s.max_size + 1)

def alg2_all():
    for k in ks:
        t.reset_visited()
        alg2_percolate(t, s, k)

jobs = {
    "alg1": lambda: [alg1_percolate(s, k) for k in ks],
    "alg2": alg2_all,
    "cgbound": lambda: [count_clique_graph_edges(s, k, EdgeBudget(max_pairs=10**12)) for k in ks],
}
res = {"numba": USING_NUMBA, "cliques": len(s)}
for name, fn in jobs.items():
    fn()  # warm-up, includes compilation when numba is on
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    res[name] = min(times)
print(json.dumps(res))
"""


def run(disable: bool, args) -> dict:
    env = dict(os.environ)
    env.pop("CLIQUEPERC_DISABLE_JIT", None)
    if disable:
        env["CLIQUEPERC_DISABLE_JIT"] = "1"
    cmd = [sys.executable, "-c", WORKER, str(args.nodes), str(args.groups), str(args.repeat)]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    return json.loads(out)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--nodes", type=int, default=300)
    p.add_argument("--groups", type=int, default=90)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    jit, plain = run(False, args), run(True, args)
    print(f"{jit['cliques']} maximal cliques, all k from 3 up")
    print(f"{'kernel':<10}{'numba s':>12}{'python s':>12}{'speedup':>10}")
    for name in ("alg1", "alg2", "cgbound"):
        print(f"{name:<10}{jit[name]:>12.4f}{plain[name]:>12.4f}{plain[name] / jit[name]:>10.1f}x")


if __name__ == "__main__":
    main()
