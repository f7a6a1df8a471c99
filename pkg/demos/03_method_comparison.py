#!/usr/bin/env python3
"""Comparing expansion methods on a controlled benchmark.

Runs the shared-initialization protocol (10 random 5+5 seed sets, 20
iterations each) over a synthetic vocabulary whose gold cluster mixes
tight sub-modes, a mimicking distractor cluster, and geometric label
noise.  The grid below is the package's reproduction of the headline
comparison: margin-based querying with an RBF kernel beats ranking by
a single central vector, and the plain centroid beats the other
central-vector variants.
"""

import time

from termset import (
    ExpansionConfig,
    GoldTermSet,
    make_cluster_benchmark,
    render_report_text,
    run_experiment,
)


def main() -> None:
    model, gold_terms = make_cluster_benchmark(seed=0)
    print(f"benchmark: {len(model.terms)} terms x {model.dim} dims, "
          f"gold cluster of {len(gold_terms)}")
    print()

    # On unit-length vectors squared distances live in [0, 4], so the
    # RBF width must be O(1)-O(10) to see any contrast; 1/dim would
    # flatten the kernel.
    configs = [
        ExpansionConfig(method="svm-rbf", k=10, rbf_gamma=8.0),
        ExpansionConfig(method="svm-linear", k=10),
        ExpansionConfig(method="centroid", k=10),
        ExpansionConfig(method="eigencentrality", k=10),
        ExpansionConfig(method="snr", k=10),
    ]
    gold = GoldTermSet(name="gold", terms=frozenset(gold_terms))

    t0 = time.monotonic()
    report = run_experiment(
        [("bench", model)], configs, [gold],
        n_inits=10, steps=20, k=10, seed_base=0,
    )
    print(render_report_text(report))
    print(f"({10 * 20 * len(configs)} expansion iterations "
          f"in {time.monotonic() - t0:.1f}s)")
    print()

    means = {
        cfg.method: report.cell("gold", cfg.method, "bench").mean
        for cfg in configs
    }
    order = sorted(means, key=means.get, reverse=True)
    print("ranking:", "  >  ".join(f"{m} ({means[m]:.2f})" for m in order))
    print()
    print("CLI equivalent: termset evaluate --models bench=model.txt "
          "--term-sets gold.txt --methods svm-rbf centroid "
          "eigencentrality snr --inits 10 --steps 20 --k 10")


if __name__ == "__main__":
    main()
