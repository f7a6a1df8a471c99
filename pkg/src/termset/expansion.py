"""Candidate proposal: centrality methods and the method dispatcher.

Three centrality methods summarize the positive examples into a single
central vector and return its nearest unlabeled neighbors:

* centroid: elementwise mean.
* snr: mean scaled down elementwise by sample standard deviation, so
  dimensions that disagree across positives count less.
* eigencentrality: dominant eigenvector of W^T W for the positive-row
  matrix W, i.e. the direction of maximal shared variance.

Classifier methods (margin-based candidate selection) live in the svm
module; propose_candidates dispatches to either family and reports which
method actually ran, since snr and eigencentrality need at least two
positives and fall back to centroid below that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingModel, top_k_similar
from .errors import ValidationError
from .labeled import LabeledTermSet
from .linalg import power_iteration
from . import svm as _svm

METHOD_CENTROID = "centroid"
METHOD_SNR = "snr"
METHOD_EIGEN = "eigencentrality"
METHOD_SVM_LINEAR = "svm-linear"
METHOD_SVM_RBF = "svm-rbf"

CENTRALITY_METHODS = frozenset({METHOD_CENTROID, METHOD_SNR, METHOD_EIGEN})
CLASSIFIER_METHODS = frozenset({METHOD_SVM_LINEAR, METHOD_SVM_RBF})
ALL_METHODS = CENTRALITY_METHODS | CLASSIFIER_METHODS

DEFAULT_SNR_EPSILON = 1e-6
POWER_TOL = 1e-10
POWER_BUDGET = 10_000


@dataclass(frozen=True)
class CentralVector:
    values: np.ndarray
    method: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(values)):
            raise ValidationError("central vector has non-finite entries")
        if np.linalg.norm(values) == 0.0:
            raise ValidationError("central vector is zero")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class ExpansionConfig:
    method: str
    k: int = 10
    svm_c: float = 1.0
    rbf_gamma: float | None = None  # None = 1/dim at training time
    snr_epsilon: float = DEFAULT_SNR_EPSILON

    def __post_init__(self):
        if self.method not in ALL_METHODS:
            raise ValidationError(
                f"unknown method {self.method!r}; expected one of {sorted(ALL_METHODS)}"
            )
        if self.k < 1:
            raise ValidationError("k must be >= 1")
        if self.svm_c <= 0:
            raise ValidationError("svm_c must be positive")
        if self.rbf_gamma is not None and self.rbf_gamma <= 0:
            raise ValidationError("rbf_gamma must be positive")
        if self.snr_epsilon <= 0:
            raise ValidationError("snr_epsilon must be positive")


@dataclass(frozen=True)
class Proposal:
    """Candidates plus what produced them."""

    candidates: list[str]
    method_used: str
    fallback: bool


def centroid(positives: list[np.ndarray]) -> CentralVector:
    """Elementwise mean of the positive vectors."""
    if not positives:
        raise ValidationError("no positive examples")
    return CentralVector(np.mean(np.asarray(positives, dtype=np.float64), axis=0),
                         METHOD_CENTROID)


def snr_centroid(
    positives: list[np.ndarray], epsilon: float = DEFAULT_SNR_EPSILON
) -> CentralVector:
    """Mean divided elementwise by (sample standard deviation + epsilon).

    Sample std uses the 1/(n-1) convention, hence the two-vector minimum.
    """
    if len(positives) < 2:
        raise ValidationError("snr needs at least 2 positive examples")
    matrix = np.asarray(positives, dtype=np.float64)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0, ddof=1)
    return CentralVector(mean / (std + epsilon), METHOD_SNR)


def eigencentrality_vector(positive_matrix: np.ndarray) -> CentralVector:
    """Dominant eigenvector of W^T W, sign-fixed toward the rows of W.

    Power iteration starts from the normalized row sum (deterministic)
    and the returned direction has nonnegative total similarity to the
    positive rows.
    """
    w = np.asarray(positive_matrix, dtype=np.float64)
    if w.ndim != 2 or w.shape[0] < 1:
        raise ValidationError("positive matrix must have at least one row")
    if not np.any(w):
        raise ValidationError("positive matrix is zero")
    start = w.sum(axis=0)
    if np.linalg.norm(start) == 0.0:
        start = w[0]
    v = power_iteration(lambda x: w.T @ (w @ x), v0=start,
                        tol=POWER_TOL, max_iters=POWER_BUDGET)
    if float(np.sum(w @ v)) < 0.0:
        v = -v
    return CentralVector(v, METHOD_EIGEN)


def central_vector(
    model: EmbeddingModel, labeled: LabeledTermSet, config: ExpansionConfig
) -> CentralVector:
    """Central vector for the configured centrality method.

    snr and eigencentrality degenerate on a single positive and fall
    back to centroid; the result's `method` field reports what ran.
    """
    positives = labeled.positives()
    if not positives:
        raise ValidationError("no positive examples")
    vectors = [model.vector(t) for t in positives]
    method = config.method
    if method in (METHOD_SNR, METHOD_EIGEN) and len(vectors) < 2:
        method = METHOD_CENTROID
    if method == METHOD_CENTROID:
        return centroid(vectors)
    if method == METHOD_SNR:
        return snr_centroid(vectors, epsilon=config.snr_epsilon)
    if method == METHOD_EIGEN:
        return eigencentrality_vector(np.asarray(vectors))
    raise ValidationError(f"{config.method!r} is not a centrality method")


def expand_centrality(
    model: EmbeddingModel, labeled: LabeledTermSet, config: ExpansionConfig
) -> list[str]:
    """The k unlabeled terms most similar to the central vector.

    Returns fewer than k only when the unlabeled vocabulary runs out.
    """
    if config.method not in CENTRALITY_METHODS:
        raise ValidationError(f"{config.method!r} is not a centrality method")
    central = central_vector(model, labeled, config)
    neighbors = top_k_similar(model, central.values, config.k, exclude=labeled.terms())
    return [n.term for n in neighbors]


def propose_candidates(
    model: EmbeddingModel, labeled: LabeledTermSet, config: ExpansionConfig
) -> Proposal:
    """Next candidate batch under the configured method.

    Centrality methods rank by similarity to their central vector; the
    svm methods train a soft-margin classifier on the full labeled set
    and rank by proximity to its separating surface.
    """
    if config.method in CENTRALITY_METHODS:
        central = central_vector(model, labeled, config)
        neighbors = top_k_similar(
            model, central.values, config.k, exclude=labeled.terms()
        )
        return Proposal(
            candidates=[n.term for n in neighbors],
            method_used=central.method,
            fallback=central.method != config.method,
        )
    kernel = _svm.kernel_for(config, model.dim)
    trained = _svm.train_svm(labeled, model, kernel, c=config.svm_c)
    candidates = _svm.expand_margin(trained, model, labeled, config.k)
    return Proposal(candidates=candidates, method_used=config.method, fallback=False)
