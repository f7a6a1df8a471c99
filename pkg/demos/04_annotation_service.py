#!/usr/bin/env python3
"""Walkthrough of the batch-synchronous annotation service.

Drives a labeling session through the service layer: create a session
from seed terms, fetch a candidate batch, submit labels, and export the
lexicon both ways (labeled positives only, and classifier-expanded).
Sessions persist to disk after every accepted mutation, so a second
service instance can pick one up mid-flight.

The same operations are served over HTTP by `termset serve`; each step
prints the matching request.
"""

import tempfile
from pathlib import Path

from _shared import COOKING, build_demo_corpus
from termset import (
    ExpansionConfig,
    FactorizationConfig,
    SessionService,
    count_cooccurrences,
    factorize,
    normalize_unit_l2,
    smoothed_ppmi,
)


def main() -> None:
    counts = count_cooccurrences(build_demo_corpus(), window=2, min_count=5)
    model = normalize_unit_l2(
        factorize(smoothed_ppmi(counts, alpha=0.75),
                  FactorizationConfig(dim=16, sv_exponent=0.5))
    )
    data_dir = Path(tempfile.mkdtemp(prefix="termset-sessions-"))
    service = SessionService({"demo": model}, data_dir=data_dir)
    print(f"service: models {[m['id'] for m in service.list_models()]}, "
          f"sessions persist to {data_dir}")
    print("   HTTP: POST /models")
    print()

    session = service.create_session(
        "demo",
        ExpansionConfig(method="svm-rbf", k=4, rbf_gamma=2.0),
        seed_positives=["flour", "sugar", "butter"],
        seed_negatives=["star", "planet"],
    )
    print(f"created session {session.id[:8]}..., status {session.status}")
    print("   HTTP: POST /sessions "
          '{"model": "demo", "method": "svm-rbf", "k": 4, ...}')
    print()

    gold = set(COOKING)
    for round_no in (1, 2):
        candidates = service.request_candidates(session.id)
        print(f"round {round_no} candidates: {' '.join(candidates)}")
        print(f"   HTTP: POST /sessions/{session.id[:8]}.../candidates")
        labels = {term: term in gold for term in candidates}
        session = service.submit_labels(session.id, labels)
        print(f"round {round_no} labeled: "
              f"{session.history[-1]}/{len(labels)} positive, "
              f"iteration now {session.iteration}")
        print(f"   HTTP: POST /sessions/{session.id[:8]}.../labels "
              '{"labels": {...}}')
        print()

    labeled = service.export_lexicon(session.id, "labeled-positives")
    print(f"export labeled-positives: {len(labeled)} terms")
    for entry in labeled:
        print(f"   {entry['term']:10s} {entry['provenance']}")
    print(f"   HTTP: GET /sessions/{session.id[:8]}.../export"
          "?mode=labeled-positives")
    print()

    expanded = service.export_lexicon(session.id, "classifier-expanded")
    inferred = [e for e in expanded if e["provenance"] == "inferred"]
    print(f"export classifier-expanded: {len(expanded)} terms, "
          f"{len(inferred)} inferred beyond the annotations")
    for entry in inferred[:5]:
        print(f"   {entry['term']:10s} inferred (score {entry['score']:.2f})")
    print()

    # Raising the threshold prunes low-confidence inferences (borderline
    # function words tend to sit just above zero).
    strict = service.export_lexicon(session.id, "classifier-expanded",
                                    threshold=0.25)
    kept = [e for e in strict if e["provenance"] == "inferred"]
    dropped = sorted(e["term"] for e in inferred
                     if e["term"] not in {k["term"] for k in kept})
    print(f"same export at threshold 0.25: {len(kept)} inferred kept, "
          f"pruned {', '.join(dropped) if dropped else 'nothing'}")
    print(f"   HTTP: GET /sessions/{session.id[:8]}.../export"
          "?mode=classifier-expanded&threshold=0.25")
    print()

    # A fresh instance restores the session from its on-disk document.
    other = SessionService({"demo": model}, data_dir=data_dir)
    restored = other.restore(session.id)
    print(f"restored in a fresh instance: iteration {restored.iteration}, "
          f"history {list(restored.history)}, equal: {restored == session}")
    print()
    print("serve it: termset serve --models manifest.json --port 8000")


if __name__ == "__main__":
    main()
