"""Labeled term sets: the state the expansion loop grows.

A LabeledTermSet is an insertion-ordered, append-only map from term to
boolean label with per-entry provenance (seed vs annotated-at-iteration).
Updates are pure: update_labeled_set returns a new set, so concurrent
sessions can share snapshots freely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError

PROVENANCE_SEED = "seed"
PROVENANCE_ANNOTATED = "annotated"


@dataclass(frozen=True)
class LabeledTerm:
    term: str
    label: bool
    provenance: str = PROVENANCE_SEED
    iteration: int | None = None

    def __post_init__(self):
        if self.provenance not in (PROVENANCE_SEED, PROVENANCE_ANNOTATED):
            raise ValidationError(f"unknown provenance {self.provenance!r}")
        if self.provenance == PROVENANCE_ANNOTATED and self.iteration is None:
            raise ValidationError("annotated entries must carry an iteration")
        if self.provenance == PROVENANCE_SEED and self.iteration is not None:
            raise ValidationError("seed entries carry no iteration")


@dataclass(frozen=True)
class LabeledTermSet:
    entries: tuple[LabeledTerm, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {}
        for entry in self.entries:
            if entry.term in index:
                raise ValidationError(f"term {entry.term!r} labeled twice")
            index[entry.term] = entry
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_seeds(
        cls, positives: Sequence[str], negatives: Sequence[str]
    ) -> "LabeledTermSet":
        entries = [LabeledTerm(t, True) for t in positives]
        entries += [LabeledTerm(t, False) for t in negatives]
        return cls(entries=tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def label_of(self, term: str) -> bool:
        try:
            return self._index[term].label
        except KeyError:
            raise ValidationError(f"term {term!r} is not labeled") from None

    def terms(self) -> list[str]:
        return [e.term for e in self.entries]

    def positives(self) -> list[str]:
        return [e.term for e in self.entries if e.label]

    def negatives(self) -> list[str]:
        return [e.term for e in self.entries if not e.label]

    def to_json_dict(self) -> dict:
        return {
            "entries": [
                {
                    "term": e.term,
                    "label": e.label,
                    "provenance": e.provenance,
                    **({"iteration": e.iteration} if e.iteration is not None else {}),
                }
                for e in self.entries
            ]
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "LabeledTermSet":
        try:
            raw = payload["entries"]
        except (KeyError, TypeError):
            raise ValidationError("labeled-set document needs an 'entries' list") from None
        entries = []
        for item in raw:
            try:
                entries.append(
                    LabeledTerm(
                        term=item["term"],
                        label=bool(item["label"]),
                        provenance=item.get("provenance", PROVENANCE_SEED),
                        iteration=item.get("iteration"),
                    )
                )
            except (KeyError, TypeError):
                raise ValidationError(f"malformed labeled-set entry: {item!r}") from None
        return cls(entries=tuple(entries))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "LabeledTermSet":
        return cls.from_json_dict(json.loads(text))


def update_labeled_set(
    labeled: LabeledTermSet,
    candidates: Sequence[str],
    labels: Iterable[bool],
    iteration: int,
) -> LabeledTermSet:
    """Append `candidates` with `labels`, provenance annotated(iteration).

    Growth is strict: every candidate must be new, and the result size is
    len(labeled) + len(candidates).
    """
    labels = list(labels)
    if len(candidates) != len(labels):
        raise ValidationError(
            f"{len(candidates)} candidates but {len(labels)} labels"
        )
    new_entries = list(labeled.entries)
    seen = set(labeled.terms())
    for term, label in zip(candidates, labels):
        if term in seen:
            raise ValidationError(f"term {term!r} is already labeled")
        seen.add(term)
        new_entries.append(
            LabeledTerm(term, bool(label), PROVENANCE_ANNOTATED, iteration)
        )
    return LabeledTermSet(entries=tuple(new_entries))
