"""Count-based distributional models.

Pipeline: tokenized sentences -> symmetric-window co-occurrence counts
-> PPMI or smoothed-PPMI weighting -> truncated SVD factorization with
an adjustable singular-value exponent.  The result is an EmbeddingModel,
so count models and pretrained vector files are interchangeable
downstream.

Counting is line-scoped (a sentence per input line, windows never cross
lines) and order-insensitive: the vocabulary is sorted, so permuting the
corpus lines yields identical counts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .embeddings import EmbeddingModel, NORM_RAW
from .errors import CorpusError, ValidationError
from .linalg import truncated_svd

DEFAULT_MIN_COUNT = 5
DEFAULT_ALPHA = 0.75

SCHEME_PPMI = "ppmi"


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Sparse #(w, c) matrix over a shared target/context vocabulary."""

    terms: list[str]
    counts: sp.csr_matrix
    window: int
    total: float

    def row_marginals(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    def col_marginals(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=0)).ravel()


@dataclass(frozen=True)
class WeightedMatrix:
    """Nonnegative association weights; zero cells are not stored."""

    terms: list[str]
    weights: sp.csr_matrix
    scheme: str


@dataclass(frozen=True)
class FactorizationConfig:
    """Controls for the truncated-SVD factorization step."""

    dim: int = 200
    sv_exponent: float = 0.5
    oversample: int = 10
    max_iters: int = 100
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("dim must be >= 1")
        if not 0.0 <= self.sv_exponent <= 1.0:
            raise ValidationError("sv_exponent must be in [0, 1]")


def read_corpus(path):
    """Yield one whitespace-token list per non-empty line of a UTF-8 file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if tokens:
                yield tokens


def count_cooccurrences(
    sentences,
    window: int = 2,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CooccurrenceCounts:
    """Count symmetric-window co-occurrences over tokenized sentences.

    Tokens rarer than `min_count` are removed from every sentence before
    positions are assigned, so surviving tokens can pair across a gap a
    dropped token used to fill.  Each ordered pair within the window is
    counted once per occurrence, making the matrix symmetric.

    `sentences` is consumed twice (frequency pass, then counting pass);
    non-restartable iterables are materialized.
    """
    if window < 1:
        raise ValidationError("window must be >= 1")
    if min_count < 0:
        raise ValidationError("min_count must be >= 0")
    if not isinstance(sentences, (list, tuple)):
        sentences = [list(s) for s in sentences]

    freq: Counter = Counter()
    for sentence in sentences:
        freq.update(sentence)
    if not freq:
        raise CorpusError("corpus is empty")

    vocab = sorted(t for t, n in freq.items() if n >= min_count)
    if not vocab:
        raise CorpusError(
            f"no term reaches min_count={min_count} (most frequent has "
            f"{max(freq.values())})"
        )
    index = {t: i for i, t in enumerate(vocab)}

    pair_counts: Counter = Counter()
    for sentence in sentences:
        ids = [index[t] for t in sentence if t in index]
        for i, wid in enumerate(ids):
            lo = max(0, i - window)
            for j in range(lo, min(len(ids), i + window + 1)):
                if j != i:
                    pair_counts[(wid, ids[j])] += 1

    n = len(vocab)
    if pair_counts:
        keys = np.array(list(pair_counts.keys()), dtype=np.int64)
        vals = np.array(list(pair_counts.values()), dtype=np.float64)
        matrix = sp.coo_matrix((vals, (keys[:, 0], keys[:, 1])), shape=(n, n)).tocsr()
    else:
        matrix = sp.csr_matrix((n, n), dtype=np.float64)
    return CooccurrenceCounts(
        terms=vocab, counts=matrix, window=window, total=float(matrix.sum())
    )


def ppmi(counts: CooccurrenceCounts) -> WeightedMatrix:
    """Positive PMI: max(0, ln(#(w,c) total / (#(w,.) #(.,c))))."""
    return _weight(counts, alpha=None, scheme=SCHEME_PPMI)


def smoothed_ppmi(counts: CooccurrenceCounts, alpha: float = DEFAULT_ALPHA) -> WeightedMatrix:
    """PPMI with the context marginal raised to `alpha` and renormalized.

    P_a(c) = #(.,c)^a / sum_c' #(.,c')^a; alpha=1 recovers plain PPMI.
    Smoothing inflates the probability of rare contexts, damping their
    otherwise outsized PMI scores.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValidationError("alpha must be in (0, 1]")
    return _weight(counts, alpha=alpha, scheme=f"sppmi(alpha={alpha:g})")


def _weight(counts: CooccurrenceCounts, alpha, scheme: str) -> WeightedMatrix:
    if counts.total <= 0:
        raise ValidationError("counts are empty; nothing to weight")
    row = counts.row_marginals()
    col = counts.col_marginals()
    coo = counts.counts.tocoo()
    if alpha is None:
        # pmi = ln( v * total / (row_i * col_j) )
        denom = row[coo.row] * col[coo.col]
        pmi = np.log(coo.data * counts.total / denom)
    else:
        # pmi = ln( (v/total) / ((row_i/total) * col_j^a / Z_a) )
        col_a = np.power(col, alpha)
        z = col_a.sum()
        pmi = np.log(coo.data * z / (row[coo.row] * col_a[coo.col]))
    keep = pmi > 0.0
    matrix = sp.coo_matrix(
        (pmi[keep], (coo.row[keep], coo.col[keep])), shape=coo.shape
    ).tocsr()
    return WeightedMatrix(terms=list(counts.terms), weights=matrix, scheme=scheme)


def factorize(matrix: WeightedMatrix, config: FactorizationConfig) -> EmbeddingModel:
    """Row embeddings W = U_d diag(s_d)^sv_exponent from the truncated SVD.

    The exponent interpolates between pure left singular vectors (0) and
    the conventional U Sigma rows (1); 0.5 splits the spectrum evenly
    between the two factor sides.
    """
    n_rows, n_cols = matrix.weights.shape
    if config.dim > min(n_rows, n_cols):
        raise ValidationError(
            f"dim {config.dim} exceeds min(matrix dimensions) = {min(n_rows, n_cols)}"
        )
    u, s, _ = truncated_svd(
        matrix.weights,
        dim=config.dim,
        oversample=config.oversample,
        max_iters=config.max_iters,
        tol=config.tol,
        seed=config.seed,
    )
    vectors = u * np.power(s, config.sv_exponent)[None, :]
    return EmbeddingModel(terms=list(matrix.terms), vectors=vectors, norm_scheme=NORM_RAW)
