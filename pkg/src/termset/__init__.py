"""Interactive term-set expansion over count-based word embeddings.

The package splits into a small set of layers: count models and
factorization (counts), vector storage and similarity (embeddings),
the expand-label loop with centrality and SVM rankers (labeled,
expansion, svm), a reproducible comparison protocol (evaluation,
synthetic), and an annotation session service with an HTTP surface
(service, api) plus a command-line front end (cli).
"""

from .counts import (
    CooccurrenceCounts,
    FactorizationConfig,
    WeightedMatrix,
    count_cooccurrences,
    factorize,
    ppmi,
    read_corpus,
    smoothed_ppmi,
)
from .embeddings import (
    EmbeddingModel,
    Neighbor,
    load_word2vec_text,
    normalize_unit_l2,
    save_word2vec_text,
    similarity,
    top_k_similar,
)
from .errors import (
    ConvergenceError,
    CorpusError,
    NotFoundError,
    StateError,
    TermSetError,
    ValidationError,
    VectorFileError,
)
from .evaluation import (
    ExperimentReport,
    GoldTermSet,
    TrialRecord,
    load_term_set,
    make_initial_set,
    oracle_label,
    render_report_text,
    run_experiment,
    run_trial,
)
from .expansion import (
    ALL_METHODS,
    CENTRALITY_METHODS,
    CLASSIFIER_METHODS,
    METHOD_CENTROID,
    METHOD_EIGEN,
    METHOD_SNR,
    METHOD_SVM_LINEAR,
    METHOD_SVM_RBF,
    CentralVector,
    ExpansionConfig,
    Proposal,
    central_vector,
    expand_centrality,
    propose_candidates,
)
from .labeled import (
    LabeledTerm,
    LabeledTermSet,
    PROVENANCE_ANNOTATED,
    PROVENANCE_SEED,
    update_labeled_set,
)
from .linalg import power_iteration, truncated_svd
from .service import Session, SessionService, load_model_manifest
from .svm import (
    KernelSpec,
    SvmModel,
    classify_all,
    decision_value,
    decision_values,
    expand_margin,
    train_svm,
)
from .synthetic import (
    cluster_model,
    make_cluster_benchmark,
    orthonormal_model,
    perfect_cluster_model,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_METHODS",
    "CENTRALITY_METHODS",
    "CLASSIFIER_METHODS",
    "CentralVector",
    "ConvergenceError",
    "CooccurrenceCounts",
    "CorpusError",
    "EmbeddingModel",
    "ExpansionConfig",
    "ExperimentReport",
    "FactorizationConfig",
    "GoldTermSet",
    "KernelSpec",
    "LabeledTerm",
    "LabeledTermSet",
    "METHOD_CENTROID",
    "METHOD_EIGEN",
    "METHOD_SNR",
    "METHOD_SVM_LINEAR",
    "METHOD_SVM_RBF",
    "Neighbor",
    "NotFoundError",
    "PROVENANCE_ANNOTATED",
    "PROVENANCE_SEED",
    "Proposal",
    "Session",
    "SessionService",
    "StateError",
    "SvmModel",
    "TermSetError",
    "TrialRecord",
    "ValidationError",
    "VectorFileError",
    "WeightedMatrix",
    "central_vector",
    "classify_all",
    "cluster_model",
    "count_cooccurrences",
    "decision_value",
    "decision_values",
    "expand_centrality",
    "expand_margin",
    "factorize",
    "load_model_manifest",
    "load_term_set",
    "load_word2vec_text",
    "make_cluster_benchmark",
    "make_initial_set",
    "normalize_unit_l2",
    "oracle_label",
    "orthonormal_model",
    "perfect_cluster_model",
    "power_iteration",
    "ppmi",
    "propose_candidates",
    "read_corpus",
    "render_report_text",
    "run_experiment",
    "run_trial",
    "save_word2vec_text",
    "similarity",
    "smoothed_ppmi",
    "top_k_similar",
    "train_svm",
    "truncated_svd",
    "update_labeled_set",
]
