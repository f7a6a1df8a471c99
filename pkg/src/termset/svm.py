"""Soft-margin kernel SVM with margin-based candidate selection.

The dual problem

    min_a  0.5 a'Qa - e'a   s.t.  0 <= a_i <= C_i,  y'a = 0,
    Q_ij = y_i y_j K(x_i, x_j)

is solved by sequential minimal optimization on the maximal violating
pair: each step picks the two coordinates that most violate the KKT
system and solves their two-variable subproblem exactly.  Selection is
by first-occurrence argmax/argmin and the solver draws no random
numbers, so training is deterministic given its inputs.

Candidate selection ranks unlabeled terms by |d(t)|, the distance proxy
to the separating surface: the labels the current classifier is least
sure about are the most informative to ask for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingModel
from .errors import ConvergenceError, ValidationError
from .labeled import LabeledTermSet

KERNEL_LINEAR = "linear"
KERNEL_RBF = "rbf"

DEFAULT_C = 1.0
DEFAULT_TOL = 1e-3
DEFAULT_BUDGET = 100_000

# Below this, a dual coefficient is treated as zero and its point is not
# kept as a support vector.
_ALPHA_CUTOFF = 1e-12
_BOUND_SNAP = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    kind: str
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in (KERNEL_LINEAR, KERNEL_RBF):
            raise ValidationError(f"unknown kernel {self.kind!r}")
        if self.kind == KERNEL_RBF:
            if self.gamma is None or self.gamma <= 0:
                raise ValidationError("rbf kernel needs gamma > 0")
        elif self.gamma is not None:
            raise ValidationError("linear kernel takes no gamma")


def kernel_for(config, dim: int) -> KernelSpec:
    """KernelSpec for an ExpansionConfig method, defaulting gamma to 1/dim."""
    from .expansion import METHOD_SVM_LINEAR, METHOD_SVM_RBF

    if config.method == METHOD_SVM_LINEAR:
        return KernelSpec(KERNEL_LINEAR)
    if config.method == METHOD_SVM_RBF:
        gamma = config.rbf_gamma if config.rbf_gamma is not None else 1.0 / dim
        return KernelSpec(KERNEL_RBF, gamma=gamma)
    raise ValidationError(f"{config.method!r} is not an svm method")


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError("kernel arguments must have equal length")
    if spec.kind == KERNEL_LINEAR:
        return float(np.dot(a, b))
    diff = a - b
    return float(np.exp(-spec.gamma * np.dot(diff, diff)))


def kernel_matrix(spec: KernelSpec, x: np.ndarray, z: np.ndarray | None = None) -> np.ndarray:
    """K[i, j] = K(x_i, z_j); z defaults to x."""
    x = np.asarray(x, dtype=np.float64)
    z = x if z is None else np.asarray(z, dtype=np.float64)
    if spec.kind == KERNEL_LINEAR:
        return x @ z.T
    sq = (
        np.sum(x * x, axis=1)[:, None]
        + np.sum(z * z, axis=1)[None, :]
        - 2.0 * (x @ z.T)
    )
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-spec.gamma * sq)


@dataclass(frozen=True)
class SmoDiagnostics:
    iterations: int
    gap: float
    kkt_residual: float
    dual_objective: float


@dataclass(frozen=True)
class SvmModel:
    """Trained classifier: support vectors, dual coefficients, bias."""

    support_terms: tuple[str, ...]
    support_vectors: np.ndarray
    support_labels: np.ndarray
    alphas: np.ndarray
    bias: float
    kernel: KernelSpec
    c: float
    diagnostics: SmoDiagnostics


def fit_smo(
    x: np.ndarray,
    y: np.ndarray,
    kernel: KernelSpec,
    c_bounds: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_BUDGET,
):
    """Solve the dual on raw arrays; returns (alpha, bias, diagnostics).

    y is +-1; c_bounds is the per-point box ceiling (uniform C unless
    class weighting is on).  Optimality is the maximal-violation gap
    m - M <= tol, and the bias is the midpoint of the feasible interval
    [m, M].
    """
    n = len(y)
    k = kernel_matrix(kernel, x)
    q = (y[:, None] * y[None, :]) * k
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the dual objective, Q a - e
    gap = np.inf
    iterations = 0
    for iterations in range(1, max_iters + 1):
        g = -y * grad
        up = ((y > 0) & (alpha < c_bounds)) | ((y < 0) & (alpha > 0))
        lo = ((y < 0) & (alpha < c_bounds)) | ((y > 0) & (alpha > 0))
        g_up = np.where(up, g, -np.inf)
        g_lo = np.where(lo, g, np.inf)
        i = int(np.argmax(g_up))
        j = int(np.argmin(g_lo))
        gap = float(g_up[i] - g_lo[j])
        if gap <= tol:
            bias = float((g_up[i] + g_lo[j]) / 2.0)
            break
        # Two-variable subproblem along a_i += y_i t, a_j -= y_j t, t > 0.
        eta = max(k[i, i] + k[j, j] - 2.0 * k[i, j], 1e-12)
        t = gap / eta
        t_cap_i = (c_bounds[i] - alpha[i]) if y[i] > 0 else alpha[i]
        t_cap_j = (c_bounds[j] - alpha[j]) if y[j] < 0 else alpha[j]
        t = min(t, t_cap_i, t_cap_j)
        da_i = y[i] * t
        da_j = -y[j] * t
        alpha[i] += da_i
        alpha[j] += da_j
        for idx in (i, j):
            if alpha[idx] < _BOUND_SNAP:
                alpha[idx] = 0.0
            elif alpha[idx] > c_bounds[idx] - _BOUND_SNAP:
                alpha[idx] = c_bounds[idx]
        grad += q[:, i] * da_i + q[:, j] * da_j
    else:
        raise ConvergenceError(
            f"SMO exhausted {max_iters} iterations", residual=gap
        )

    margins = y * (k @ (alpha * y) + bias)
    at_zero = alpha <= _ALPHA_CUTOFF
    at_c = alpha >= c_bounds - _ALPHA_CUTOFF
    residual = np.where(
        at_zero,
        np.maximum(0.0, 1.0 - margins),
        np.where(at_c, np.maximum(0.0, margins - 1.0), np.abs(margins - 1.0)),
    )
    objective = 0.5 * float(alpha @ grad) - 0.5 * float(alpha.sum())
    diagnostics = SmoDiagnostics(
        iterations=iterations,
        gap=gap,
        kkt_residual=float(residual.max()),
        dual_objective=objective,
    )
    return alpha, bias, diagnostics


def train_svm(
    labeled: LabeledTermSet,
    model: EmbeddingModel,
    kernel: KernelSpec,
    c: float = DEFAULT_C,
    class_weight: bool = False,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_BUDGET,
) -> SvmModel:
    """Train on every labeled term's vector; positives are +1.

    class_weight scales each class's box ceiling inversely to its size
    (off by default).
    """
    if c <= 0:
        raise ValidationError("C must be positive")
    terms = labeled.terms()
    if not labeled.positives() or not labeled.negatives():
        raise ValidationError("training needs at least one term of each label")
    x = np.vstack([model.vector(t) for t in terms])
    y = np.array([1.0 if labeled.label_of(t) else -1.0 for t in terms])
    if class_weight:
        n_pos = float(np.sum(y > 0))
        n_neg = float(np.sum(y < 0))
        per_class = {1.0: c * len(y) / (2.0 * n_pos), -1.0: c * len(y) / (2.0 * n_neg)}
        c_bounds = np.array([per_class[v] for v in y])
    else:
        c_bounds = np.full(len(y), c)
    alpha, bias, diagnostics = fit_smo(x, y, kernel, c_bounds, tol=tol, max_iters=max_iters)

    balance = float(np.dot(alpha, y))
    if abs(balance) > 1e-6:
        raise ConvergenceError(
            f"dual constraint violated: sum(alpha*y) = {balance:.3e}", residual=balance
        )
    keep = alpha > _ALPHA_CUTOFF
    return SvmModel(
        support_terms=tuple(t for t, k_ in zip(terms, keep) if k_),
        support_vectors=x[keep],
        support_labels=y[keep],
        alphas=alpha[keep],
        bias=bias,
        kernel=kernel,
        c=c,
        diagnostics=diagnostics,
    )


def decision_values(svm: SvmModel, xs: np.ndarray) -> np.ndarray:
    """d(x) = sum_i alpha_i y_i K(x_i, x) + bias for each row of xs."""
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if svm.alphas.size == 0:
        return np.full(xs.shape[0], svm.bias)
    k = kernel_matrix(svm.kernel, svm.support_vectors, xs)
    return (svm.alphas * svm.support_labels) @ k + svm.bias


def decision_value(svm: SvmModel, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != svm.support_vectors.shape[1]:
        raise ValidationError(
            f"expected a vector of length {svm.support_vectors.shape[1]}"
        )
    return float(decision_values(svm, x[None, :])[0])


def primal_weights(svm: SvmModel) -> np.ndarray:
    """Explicit w = sum alpha_i y_i x_i; linear kernel only."""
    if svm.kernel.kind != KERNEL_LINEAR:
        raise ValidationError("primal weights exist only for the linear kernel")
    return (svm.alphas * svm.support_labels) @ svm.support_vectors


def _unlabeled_scores(svm: SvmModel, model: EmbeddingModel, labeled: LabeledTermSet):
    mask = np.ones(len(model), dtype=bool)
    for term in labeled.terms():
        idx = model._index.get(term)
        if idx is not None:
            mask[idx] = False
    candidates = np.flatnonzero(mask)
    scores = decision_values(svm, model.vectors[candidates])
    return candidates, scores


def expand_margin(
    svm: SvmModel, model: EmbeddingModel, labeled: LabeledTermSet, k: int
) -> list[str]:
    """The k unlabeled terms with smallest |d(t)|, ties by term string."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    candidates, scores = _unlabeled_scores(svm, model, labeled)
    if candidates.size == 0:
        return []
    names = model._term_array[candidates]
    order = np.lexsort((names, np.abs(scores)))[:k]
    return [str(names[i]) for i in order]


def classify_all(
    svm: SvmModel, model: EmbeddingModel, labeled: LabeledTermSet
) -> list[tuple[str, float]]:
    """All unlabeled terms with d(t) > 0, descending by d(t)."""
    candidates, scores = _unlabeled_scores(svm, model, labeled)
    positive = scores > 0.0
    candidates, scores = candidates[positive], scores[positive]
    names = model._term_array[candidates]
    order = np.lexsort((names, -scores))
    return [(str(names[i]), float(scores[i])) for i in order]


def svm_to_json_dict(svm: SvmModel) -> dict:
    return {
        "kernel": {"kind": svm.kernel.kind, "gamma": svm.kernel.gamma},
        "c": svm.c,
        "bias": svm.bias,
        "support": [
            {"term": t, "alpha": float(a), "label": int(y)}
            for t, a, y in zip(svm.support_terms, svm.alphas, svm.support_labels)
        ],
    }


def svm_from_json_dict(payload: dict, model: EmbeddingModel) -> SvmModel:
    """Rehydrate a serialized classifier; vectors come from `model` by name."""
    try:
        kernel = KernelSpec(payload["kernel"]["kind"], payload["kernel"].get("gamma"))
        support = payload["support"]
        terms = tuple(item["term"] for item in support)
        alphas = np.array([float(item["alpha"]) for item in support])
        labels = np.array([float(item["label"]) for item in support])
        bias = float(payload["bias"])
        c = float(payload["c"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed classifier document: {exc}") from None
    vectors = (
        np.vstack([model.vector(t) for t in terms])
        if terms
        else np.zeros((0, model.dim))
    )
    if np.any(labels == 0) or np.any(np.abs(labels) != 1):
        raise ValidationError("support labels must be +1 or -1")
    return SvmModel(
        support_terms=terms,
        support_vectors=vectors,
        support_labels=labels,
        alphas=alphas,
        bias=bias,
        kernel=kernel,
        c=c,
        diagnostics=SmoDiagnostics(0, 0.0, 0.0, 0.0),
    )
