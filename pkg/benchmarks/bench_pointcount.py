"""Compare the compiled and numpy point-counting kernels on corpus cases.

    python3 benchmarks/bench_pointcount.py [--repeat 3] [--cases 2L,1H,8A]
"""

import argparse
import time

from delpezzo.corpus import load_corpus
from delpezzo.vectorfields.pointcount import build_problem, compiled_available, count_problem

DEFAULT_CASES = [(2, "1T", 8), (2, "9A", 8), (3, "1H", 27), (3, "2L", 27), (3, "8A", 9), (5, "1D", 25)]


def best_of(fn, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cases", help="comma list of p:id:q, e.g. 3:1H:27")
    args = ap.parse_args()
    cases = DEFAULT_CASES
    if args.cases:
        cases = [(int(p), cid, int(q)) for p, cid, q in (c.split(":") for c in args.cases.split(","))]
    if not compiled_available():
        print("compiled kernel not built; only the numpy kernel runs")
    print(f"{'case':<8}{'q':>4}{'dim L':>7}{'count':>10}{'numpy s':>10}{'compiled s':>12}{'speedup':>9}")
    for p, cid, q in cases:
        prob = build_problem(load_corpus(p)[cid].config(p), q)
        t_np, n_np = best_of(lambda: count_problem(prob, "numpy"), args.repeat)
        row = f"{cid + '/' + str(p):<8}{q:>4}{len(prob.basis):>7}{n_np:>10}{t_np:>10.3f}"
        if compiled_available():
            t_c, n_c = best_of(lambda: count_problem(prob, "compiled"), args.repeat)
            assert n_c == n_np, (cid, q, n_c, n_np)
            row += f"{t_c:>12.3f}{t_np / t_c:>9.1f}"
        print(row)


if __name__ == "__main__":
    main()
