"""Labeled term sets: construction, growth, serialization."""

import pytest

from termset.errors import ValidationError
from termset.labeled import (
    LabeledTerm,
    LabeledTermSet,
    PROVENANCE_ANNOTATED,
    PROVENANCE_SEED,
    update_labeled_set,
)


def seeds():
    return LabeledTermSet.from_seeds(
        positives=["good", "nice", "happy", "fine", "great"],
        negatives=["wall", "chair", "walk", "blue", "seven"],
    )


class TestConstruction:
    def test_from_seeds_partitions(self):
        labeled = seeds()
        assert len(labeled) == 10
        assert len(labeled.positives()) == 5
        assert len(labeled.negatives()) == 5
        assert set(labeled.positives()) | set(labeled.negatives()) == set(labeled.terms())

    def test_duplicate_rejected(self):
        with pytest.raises(ValidationError, match="twice"):
            LabeledTermSet.from_seeds(positives=["a"], negatives=["a"])

    def test_seed_provenance(self):
        for entry in seeds().entries:
            assert entry.provenance == PROVENANCE_SEED
            assert entry.iteration is None

    def test_annotated_needs_iteration(self):
        with pytest.raises(ValidationError, match="iteration"):
            LabeledTerm("x", True, PROVENANCE_ANNOTATED, None)

    def test_label_lookup(self):
        labeled = seeds()
        assert labeled.label_of("good") is True
        assert labeled.label_of("wall") is False
        with pytest.raises(ValidationError):
            labeled.label_of("absent")


class TestUpdate:
    def test_annotation_walkthrough(self):
        # Ten candidates of which two are positive: 5+5 seeds grow to
        # 7 positives and 13 negatives.
        labeled = seeds()
        candidates = ["agreeable", "supportive"] + [f"n{i}" for i in range(8)]
        labels = [True, True] + [False] * 8
        grown = update_labeled_set(labeled, candidates, labels, iteration=1)
        assert len(grown.positives()) == 7
        assert len(grown.negatives()) == 13
        assert len(grown) == 20

    def test_growth_is_exact(self):
        labeled = seeds()
        grown = update_labeled_set(labeled, ["x", "y"], [True, False], iteration=3)
        assert len(grown) == len(labeled) + 2
        assert grown.entries[-1].iteration == 3
        assert grown.entries[-1].provenance == PROVENANCE_ANNOTATED

    def test_original_untouched(self):
        labeled = seeds()
        update_labeled_set(labeled, ["x"], [True], iteration=1)
        assert "x" not in labeled

    def test_empty_update_is_identity(self):
        labeled = seeds()
        grown = update_labeled_set(labeled, [], [], iteration=1)
        assert grown.entries == labeled.entries

    def test_relabel_rejected_by_name(self):
        labeled = seeds()
        with pytest.raises(ValidationError, match="good"):
            update_labeled_set(labeled, ["good"], [False], iteration=1)

    def test_duplicate_candidate_rejected(self):
        labeled = seeds()
        with pytest.raises(ValidationError, match="already labeled"):
            update_labeled_set(labeled, ["x", "x"], [True, True], iteration=1)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValidationError, match="candidates"):
            update_labeled_set(seeds(), ["x"], [True, False], iteration=1)

    def test_counts_monotone_over_iterations(self):
        labeled = seeds()
        pos, neg = 5, 5
        for it in range(1, 6):
            labels = [it % 2 == 0, True, False]
            labeled = update_labeled_set(
                labeled, [f"c{it}_{j}" for j in range(3)], labels, iteration=it
            )
            assert len(labeled.positives()) >= pos
            assert len(labeled.negatives()) >= neg
            pos, neg = len(labeled.positives()), len(labeled.negatives())


class TestSerialization:
    def test_round_trip(self):
        labeled = update_labeled_set(seeds(), ["x", "y"], [True, False], iteration=2)
        restored = LabeledTermSet.from_json(labeled.to_json())
        assert restored == labeled
        assert restored.entries == labeled.entries

    def test_insertion_order_preserved(self):
        labeled = seeds()
        restored = LabeledTermSet.from_json(labeled.to_json())
        assert restored.terms() == labeled.terms()

    def test_malformed_document_rejected(self):
        with pytest.raises(ValidationError):
            LabeledTermSet.from_json("{}")
        with pytest.raises(ValidationError):
            LabeledTermSet.from_json('{"entries": [{"term": "a"}]}')
