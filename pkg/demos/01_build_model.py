#!/usr/bin/env python3
"""From raw sentences to an embedding model with meaningful neighbors.

Pipeline: count symmetric-window co-occurrences, weight them with
smoothed positive PMI, factorize with a truncated SVD, and query the
resulting vectors for nearest neighbors.  The same pipeline is exposed
on the command line as `termset build-model`.
"""

import tempfile
from pathlib import Path

from _shared import build_demo_corpus
from termset import (
    FactorizationConfig,
    count_cooccurrences,
    factorize,
    load_word2vec_text,
    normalize_unit_l2,
    save_word2vec_text,
    smoothed_ppmi,
    top_k_similar,
)


def main() -> None:
    sentences = build_demo_corpus()
    print(f"corpus: {len(sentences)} sentences, "
          f"{sum(len(s) for s in sentences)} tokens")
    print("sample:", " ".join(sentences[0]))
    print()

    counts = count_cooccurrences(sentences, window=2, min_count=5)
    print(f"counted: {len(counts.terms)} vocabulary terms, "
          f"{int(counts.total)} co-occurrence events (window 2)")

    weighted = smoothed_ppmi(counts, alpha=0.75)
    print(f"weighted: scheme {weighted.scheme}, "
          f"{weighted.weights.nnz} nonzero cells")

    model = factorize(weighted, FactorizationConfig(dim=16, sv_exponent=0.5))
    model = normalize_unit_l2(model)
    print(f"factorized: {len(model.terms)} terms x {model.dim} dims")
    print()

    for query in ("flour", "telescope"):
        neighbors = top_k_similar(model, model.vector(query), k=5, exclude=[query])
        pretty = ", ".join(f"{n.term} ({n.score:.2f})" for n in neighbors)
        print(f"nearest to {query}: {pretty}")
    print()

    out = Path(tempfile.mkdtemp(prefix="termset-demo-")) / "demo-model.txt"
    save_word2vec_text(model, out)
    reloaded = load_word2vec_text(out)
    print(f"saved to {out} and reloaded: {len(reloaded.terms)} terms intact")
    print("CLI equivalent: termset build-model --corpus corpus.txt "
          "--scheme sppmi --alpha 0.75 --window 2 --dim 16 "
          "--out demo-model.txt")


if __name__ == "__main__":
    main()
