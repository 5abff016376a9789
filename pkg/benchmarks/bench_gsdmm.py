"""Time the GSDMM sweep on both kernels.

    python3 benchmarks/bench_gsdmm.py --docs 2000 --K 50 --iterations 10

Also checks that the two backends agree on the final assignments.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from newsrank.events import GsdmmParams, available_backends, gibbs_sample
from newsrank.preprocess import TokenizedDoc


def corpus(n_docs: int, topics: int, vocab: int, length: int, seed: int):
    rng = np.random.default_rng(seed)
    return [
        TokenizedDoc.from_tokens(f"d{i}", [f"t{i % topics}w{j}" for j in rng.integers(0, vocab, size=length)])
        for i in range(n_docs)
    ]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=2000)
    ap.add_argument("--topics", type=int, default=8)
    ap.add_argument("--vocab", type=int, default=50)
    ap.add_argument("--length", type=int, default=8)
    ap.add_argument("--K", type=int, default=50)
    ap.add_argument("--iterations", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    docs = corpus(args.docs, args.topics, args.vocab, args.length, args.seed)
    params = GsdmmParams(K=args.K, iterations=args.iterations, seed=args.seed)
    print(f"{args.docs} docs, K={args.K}, {args.iterations} sweeps, best of {args.repeat}")

    timings, results = {}, {}
    for backend in available_backends():
        best = float("inf")
        for _ in range(args.repeat):
            start = time.perf_counter()
            state, _ = gibbs_sample(docs, params, backend=backend)
            best = min(best, time.perf_counter() - start)
        timings[backend], results[backend] = best, state.z
        print(f"{backend:<8} {best:8.3f} s")

    if len(timings) == 2:
        print(f"speedup  {timings['python'] / timings['cython']:8.1f}x")
        same = np.array_equal(results["python"], results["cython"])
        print(f"identical assignments: {same}")
    else:
        print("compiled kernel not built; only the python backend was timed")


if __name__ == "__main__":
    main()
