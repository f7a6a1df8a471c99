#!/usr/bin/env python3
"""Growing a term set from seeds, one labeled batch at a time.

Builds the demo model, seeds a labeled set with a few cooking words,
and runs the expand-label loop by hand for two methods: ranking by
similarity to the centroid of the positives, and querying the terms an
SVM is least sure about.  The oracle here is simple membership in the
cooking family; interactively, a human plays that role.
"""

from _shared import COOKING, build_demo_corpus
from termset import (
    ExpansionConfig,
    FactorizationConfig,
    LabeledTermSet,
    count_cooccurrences,
    factorize,
    normalize_unit_l2,
    propose_candidates,
    smoothed_ppmi,
    update_labeled_set,
)


def build_model():
    counts = count_cooccurrences(build_demo_corpus(), window=2, min_count=5)
    return normalize_unit_l2(
        factorize(smoothed_ppmi(counts, alpha=0.75),
                  FactorizationConfig(dim=16, sv_exponent=0.5))
    )


def expand(model, config: ExpansionConfig, steps: int) -> None:
    gold = set(COOKING)
    labeled = LabeledTermSet.from_seeds(
        ["flour", "sugar", "butter"], ["star", "planet"]
    )
    print(f"[{config.method}] seeds (+): flour sugar butter   (-): star planet")
    for step in range(1, steps + 1):
        proposal = propose_candidates(model, labeled, config)
        labels = [term in gold for term in proposal.candidates]
        shown = "  ".join(
            term + ("+" if ok else "-")
            for term, ok in zip(proposal.candidates, labels)
        )
        print(f"  iteration {step}: {shown}")
        labeled = update_labeled_set(labeled, proposal.candidates, labels, step)
    found = [t for t in labeled.positives() if t not in ("flour", "sugar", "butter")]
    print(f"  found {len(found)} of {len(gold) - 3} remaining family members: "
          f"{' '.join(sorted(found))}")
    print()


def main() -> None:
    model = build_model()
    print(f"model: {len(model.terms)} terms x {model.dim} dims")
    print()
    expand(model, ExpansionConfig(method="centroid", k=3), steps=3)
    expand(model, ExpansionConfig(method="svm-rbf", k=3, rbf_gamma=4.0), steps=3)
    print("CLI equivalent: termset expand --model model.txt "
          "--term-set seeds.txt --oracle cooking.txt "
          "--method centroid --k 3 --steps 3")


if __name__ == "__main__":
    main()
