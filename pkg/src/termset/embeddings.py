"""Dense distributional models: loading, normalization, similarity search.

A model is an ordered vocabulary plus one dense vector per term.  All
expansion methods query it through :func:`top_k_similar`, which is an
exact brute-force scan: vocabularies stay small enough (a few hundred
thousand terms) that approximate search would only add recall noise to
method comparisons.

Similarity is cosine, computed in float64.  On unit-L2-normalized models
it coincides with the inner product, which is what makes similarity to a
centroid equal to the average similarity to the set members.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ValidationError, VectorFileError

NORM_RAW = "raw"
NORM_UNIT_L2 = "unit-l2"

# Load-time acceptance for rows claiming unit norm; files carry ~9 digits.
_UNIT_NORM_TOL = 1e-6


class Neighbor(NamedTuple):
    term: str
    score: float


@dataclass
class EmbeddingModel:
    """Immutable vocabulary + vector matrix.

    Treat instances as read-only: normalization returns a new model, and
    any number of threads may query one instance concurrently.
    """

    terms: list[str]
    vectors: np.ndarray
    norm_scheme: str = NORM_RAW
    _index: dict[str, int] = field(init=False, repr=False)
    _row_norms: np.ndarray = field(init=False, repr=False)
    _term_array: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValidationError("vectors must be a 2-D matrix")
        if len(self.terms) != self.vectors.shape[0]:
            raise ValidationError(
                f"{len(self.terms)} terms but {self.vectors.shape[0]} vector rows"
            )
        if len(set(self.terms)) != len(self.terms):
            raise ValidationError("duplicate terms in vocabulary")
        if not np.all(np.isfinite(self.vectors)):
            raise ValidationError("non-finite vector values")
        self._index = {t: i for i, t in enumerate(self.terms)}
        self._row_norms = np.linalg.norm(self.vectors, axis=1)
        self._term_array = np.asarray(self.terms, dtype=str)
        if self.norm_scheme == NORM_UNIT_L2:
            bad = np.flatnonzero(np.abs(self._row_norms - 1.0) > _UNIT_NORM_TOL)
            if bad.size:
                raise ValidationError(
                    f"norm_scheme is {NORM_UNIT_L2} but term "
                    f"{self.terms[bad[0]]!r} has L2 norm {self._row_norms[bad[0]]:.6g}"
                )
        elif self.norm_scheme != NORM_RAW:
            raise ValidationError(f"unknown norm scheme {self.norm_scheme!r}")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def index(self, term: str) -> int:
        try:
            return self._index[term]
        except KeyError:
            raise ValidationError(f"term {term!r} not in vocabulary") from None

    def vector(self, term: str) -> np.ndarray:
        return self.vectors[self.index(term)]


def load_word2vec_text(path) -> EmbeddingModel:
    """Parse a word2vec text file: header "N d", then "term v1 .. vd" rows.

    Terms are whitespace-free UTF-8; the parse order of the file becomes
    the vocabulary order.  Every malformed condition reports the 1-based
    line it was found on.
    """
    terms: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise VectorFileError(f"header must be two integers, got {header!r}", line=1)
        try:
            n_terms, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise VectorFileError(f"header must be two integers, got {header!r}", line=1)
        if n_terms < 1 or dim < 1:
            raise VectorFileError("header counts must be positive", line=1)
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = line.split()
            term = fields[0]
            if len(fields) - 1 != dim:
                raise VectorFileError(
                    f"term {term!r} has {len(fields) - 1} values, expected {dim}",
                    line=lineno,
                )
            if term in seen:
                raise VectorFileError(f"duplicate term {term!r}", line=lineno)
            try:
                vec = np.array(fields[1:], dtype=np.float64)
            except ValueError:
                raise VectorFileError(f"unparseable value in row for {term!r}", line=lineno)
            if not np.all(np.isfinite(vec)):
                raise VectorFileError(f"non-finite value in row for {term!r}", line=lineno)
            seen.add(term)
            terms.append(term)
            rows.append(vec)
    if len(terms) != n_terms:
        raise VectorFileError(f"header promised {n_terms} rows, file has {len(terms)}")
    return EmbeddingModel(terms=terms, vectors=np.vstack(rows), norm_scheme=NORM_RAW)


def save_word2vec_text(model: EmbeddingModel, path) -> None:
    """Write the model in word2vec text format, 9 significant digits.

    save followed by load preserves terms exactly and values to the
    printed precision.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(model.terms)} {model.dim}\n")
        for term, row in zip(model.terms, model.vectors):
            if any(ch.isspace() for ch in term):
                raise ValidationError(f"term {term!r} contains whitespace")
            fh.write(term + " " + " ".join(f"{v:.9g}" for v in row) + "\n")


def normalize_unit_l2(model: EmbeddingModel) -> EmbeddingModel:
    """Return a copy of the model with every row scaled to unit L2 norm."""
    norms = np.linalg.norm(model.vectors, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ValidationError(f"zero vector for term {model.terms[zero[0]]!r}")
    return EmbeddingModel(
        terms=list(model.terms),
        vectors=model.vectors / norms[:, None],
        norm_scheme=NORM_UNIT_L2,
    )


def similarity(model: EmbeddingModel, a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity between two vectors of the model's dimension."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != (model.dim,) or b.shape != (model.dim,):
        raise ValidationError(f"expected vectors of length {model.dim}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValidationError("cosine similarity undefined for zero vector")
    return float(np.dot(a, b) / (na * nb))


def top_k_similar(
    model: EmbeddingModel,
    query: np.ndarray,
    k: int,
    exclude: Iterable[str] = (),
) -> list[Neighbor]:
    """Exact top-k cosine neighbors of `query` over Vocab minus `exclude`.

    Returns min(k, remaining vocabulary) neighbors sorted by descending
    score, ties broken by ascending term string so repeated calls are
    bit-identical.  Rows with zero norm have no defined cosine and are
    never returned.
    """
    if k < 1:
        raise ValidationError("k must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (model.dim,):
        raise ValidationError(f"query must have length {model.dim}")
    qnorm = np.linalg.norm(query)
    if qnorm == 0.0:
        raise ValidationError("cosine similarity undefined for zero query")

    keep = np.ones(len(model.terms), dtype=bool)
    for term in exclude:
        idx = model._index.get(term)
        if idx is not None:
            keep[idx] = False
    keep &= model._row_norms > 0.0
    candidates = np.flatnonzero(keep)
    if candidates.size == 0:
        return []

    scores = (model.vectors[candidates] @ query) / (model._row_norms[candidates] * qnorm)
    # Primary key: descending score; secondary: ascending term string.
    order = np.lexsort((model._term_array[candidates], -scores))[:k]
    return [
        Neighbor(term=str(model._term_array[candidates[i]]), score=float(scores[i]))
        for i in order
    ]
