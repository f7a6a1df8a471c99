"""Acceptance gates: one test per gate, verdicts summarized by conftest.

Each test pins an end-to-end behavior the package must keep: oracle
equivalences for the numerical kernels, hand-computed weighting
fixtures, protocol invariants of the expansion loop, the benchmark
method ordering, the frozen reference grid, and session replay.
Runtime ceilings are asserted inside the tests that carry one.
"""

import json
import math
import time
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from cvxopt import matrix as cvx_matrix
from cvxopt import solvers as cvx_solvers

from termset.counts import (
    FactorizationConfig,
    WeightedMatrix,
    count_cooccurrences,
    factorize,
    ppmi,
    smoothed_ppmi,
)
from termset.embeddings import EmbeddingModel, top_k_similar
from termset.evaluation import (
    ExperimentReport,
    GoldTermSet,
    render_report_text,
    run_experiment,
    run_trial,
)
from termset.expansion import (
    ExpansionConfig,
    centroid,
    eigencentrality_vector,
    snr_centroid,
)
from termset.labeled import LabeledTermSet
from termset.linalg import truncated_svd
from termset.service import SessionService
from termset.svm import (
    KERNEL_LINEAR,
    KERNEL_RBF,
    KernelSpec,
    decision_value,
    kernel_matrix,
    train_svm,
)
from termset.synthetic import (
    cluster_model,
    make_cluster_benchmark,
    perfect_cluster_model,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_similarity_search_matches_exhaustive_oracle():
    t0 = time.monotonic()
    rng = np.random.default_rng(97)
    for _ in range(25):
        n_terms = int(rng.integers(5, 501))
        dim = int(rng.integers(2, 21))
        terms = [f"t{i:04d}" for i in range(n_terms)]
        vectors = rng.standard_normal((n_terms, dim))
        model = EmbeddingModel(terms=terms, vectors=vectors)
        norms = np.linalg.norm(vectors, axis=1)
        for _ in range(100):
            query = rng.standard_normal(dim)
            k = int(rng.integers(1, n_terms + 2))
            n_excl = int(rng.integers(0, 6))
            exclude = (
                [str(t) for t in rng.choice(terms, size=n_excl, replace=False)]
                if n_excl
                else []
            )
            got = top_k_similar(model, query, k, exclude=exclude)
            scores = vectors @ query / (norms * np.linalg.norm(query))
            excluded = set(exclude)
            ranked = sorted(
                (i for i, t in enumerate(terms) if t not in excluded),
                key=lambda i: (-scores[i], terms[i]),
            )[:k]
            assert [n.term for n in got] == [terms[i] for i in ranked]
            assert np.allclose(
                [n.score for n in got], scores[ranked], rtol=1e-12, atol=1e-12
            )
    assert time.monotonic() - t0 < 10.0


def _dense(weighted: WeightedMatrix) -> np.ndarray:
    return np.asarray(weighted.weights.todense())


def test_count_model_hand_fixtures_and_factorization():
    t0 = time.monotonic()

    # Two-token corpus, window 1: one pair each way, so
    # PMI(a, b) = ln(count * total / (marginal_a * marginal_b)) = ln 2.
    counts = count_cooccurrences([["a", "b"]], window=1, min_count=0)
    weighted = _dense(ppmi(counts))
    a = counts.terms.index("a")
    b = counts.terms.index("b")
    assert abs(weighted[a, b] - math.log(2.0)) <= 1e-9
    assert abs(weighted[b, a] - math.log(2.0)) <= 1e-9
    assert weighted[a, a] == 0.0 and weighted[b, b] == 0.0

    # alpha = 1 leaves the context marginal untouched.
    rng = np.random.default_rng(12)
    vocab = ["a", "b", "c", "d", "e", "f"]
    sentences = [
        [vocab[int(j)] for j in rng.integers(0, len(vocab), size=8)]
        for _ in range(30)
    ]
    counts = count_cooccurrences(sentences, window=2, min_count=1)
    plain = _dense(ppmi(counts))
    smoothed = _dense(smoothed_ppmi(counts, alpha=1.0))
    assert np.max(np.abs(plain - smoothed)) <= 1e-12

    # Full-rank factorization reconstructs and matches a dense SVD oracle.
    matrix = np.abs(rng.standard_normal((20, 20)))
    u, s, vt = truncated_svd(matrix, dim=20)
    assert np.linalg.norm(u @ np.diag(s) @ vt - matrix) <= 1e-6
    assert np.all(np.diff(s) <= 0.0)
    dense_s = np.linalg.svd(matrix, compute_uv=False)
    assert np.max(np.abs(s - dense_s)) <= 1e-6

    wm = WeightedMatrix(
        terms=[f"t{i:02d}" for i in range(20)],
        weights=sp.csr_matrix(matrix),
        scheme="fixture",
    )
    emb = factorize(wm, FactorizationConfig(dim=20, sv_exponent=1.0))
    assert np.linalg.norm(emb.vectors @ vt - matrix) <= 1e-6

    assert time.monotonic() - t0 < 10.0


def test_centrality_rankers_match_dense_oracles():
    t0 = time.monotonic()
    rng = np.random.default_rng(11)

    # Ranking by similarity to the centroid == ranking by mean similarity
    # to the positives (unit rows make cosine linear in the query).
    for _ in range(50):
        n = int(rng.integers(6, 61))
        dim = int(rng.integers(2, 11))
        vectors = rng.standard_normal((n, dim))
        vectors /= np.linalg.norm(vectors, axis=1)[:, None]
        terms = [f"t{i:03d}" for i in range(n)]
        model = EmbeddingModel(terms=terms, vectors=vectors)
        n_pos = int(rng.integers(2, 6))
        center = centroid([vectors[i] for i in range(n_pos)]).values
        got = top_k_similar(model, center, k=n, exclude=terms[:n_pos])
        mean_sim = (vectors[n_pos:] @ vectors[:n_pos].T).mean(axis=1)
        want = sorted(
            range(n_pos, n), key=lambda i: (-mean_sim[i - n_pos], terms[i])
        )
        assert [nb.term for nb in got] == [terms[i] for i in want]

    # Dominant eigenvector against a dense symmetric eigensolver.
    for _ in range(50):
        rows = int(rng.integers(1, 11))
        cols = int(rng.integers(1, 11))
        w = rng.standard_normal((rows, cols))
        got = eigencentrality_vector(w).values
        _, evecs = np.linalg.eigh(w.T @ w)
        oracle = evecs[:, -1]
        assert abs(float(got @ oracle)) >= 1.0 - 1e-8

    # Zero variance: identical positives leave only the common direction.
    for _ in range(10):
        dim = int(rng.integers(2, 12))
        v = rng.standard_normal(dim)
        copies = [v.copy() for _ in range(int(rng.integers(2, 6)))]
        got = snr_centroid(copies).values
        cos = float(got @ v) / (np.linalg.norm(got) * np.linalg.norm(v))
        assert cos >= 1.0 - 1e-9

    assert time.monotonic() - t0 < 10.0


def _qp_oracle(kernel_gram: np.ndarray, y: np.ndarray, c: float) -> float:
    """Brute-force dual optimum via an interior-point QP solve."""
    n = len(y)
    q = np.outer(y, y) * kernel_gram
    sol = cvx_solvers.qp(
        cvx_matrix(q),
        cvx_matrix(-np.ones(n)),
        cvx_matrix(np.vstack([-np.eye(n), np.eye(n)])),
        cvx_matrix(np.concatenate([np.zeros(n), np.full(n, c)])),
        cvx_matrix(y.reshape(1, -1)),
        cvx_matrix(np.zeros(1)),
        options={"show_progress": False, "abstol": 1e-11, "reltol": 1e-11},
    )
    assert sol["status"] == "optimal"
    alpha = np.asarray(sol["x"]).ravel()
    return float(0.5 * alpha @ q @ alpha - alpha.sum())


def test_svm_satisfies_kkt_and_matches_qp_oracle():
    t0 = time.monotonic()
    trained = []

    # Symmetric 1-D toy: the separating surface must sit at the origin
    # with unit margins.
    toy_model = EmbeddingModel(terms=["neg", "pos"], vectors=np.array([[-1.0], [1.0]]))
    toy = train_svm(
        LabeledTermSet.from_seeds(["pos"], ["neg"]),
        toy_model,
        KernelSpec(KERNEL_LINEAR),
        c=10.0,
    )
    trained.append(toy)
    assert abs(decision_value(toy, np.array([0.0]))) <= 1e-6
    assert abs(decision_value(toy, np.array([1.0])) - 1.0) <= 1e-3
    assert abs(decision_value(toy, np.array([-1.0])) + 1.0) <= 1e-3

    rng = np.random.default_rng(5)
    for trial in range(20):
        n_pos = int(rng.integers(1, 7))
        n_neg = int(rng.integers(1, 7))
        dim = int(rng.integers(1, 4))
        x = rng.standard_normal((n_pos + n_neg, dim))
        y = np.array([1.0] * n_pos + [-1.0] * n_neg)
        c = float(rng.choice([0.5, 1.0, 10.0]))
        kernel = (
            KernelSpec(KERNEL_RBF, gamma=float(rng.uniform(0.5, 2.0)))
            if trial % 2
            else KernelSpec(KERNEL_LINEAR)
        )
        terms = [f"p{i}" for i in range(n_pos)] + [f"n{i}" for i in range(n_neg)]
        model = EmbeddingModel(terms=terms, vectors=x)
        labeled = LabeledTermSet.from_seeds(terms[:n_pos], terms[n_pos:])
        # Tight stopping tolerance so the dual optimum, not the stopping
        # rule, decides the comparison.
        svm = train_svm(labeled, model, kernel, c=c, tol=1e-8)
        trained.append(svm)
        want = _qp_oracle(kernel_matrix(kernel, x), y, c)
        got = svm.diagnostics.dual_objective
        assert abs(got - want) <= 1e-3 * max(abs(want), 1e-3)

    for svm in trained:
        assert np.all(svm.alphas >= -1e-12)
        assert np.all(svm.alphas <= svm.c + 1e-9)
        assert abs(float(svm.alphas @ svm.support_labels)) <= 1e-6
        assert svm.diagnostics.kkt_residual <= 1e-3

    assert time.monotonic() - t0 < 30.0


def test_expansion_protocol_invariants():
    model_a, assignment = cluster_model(seed=21, n_clusters=3, per_cluster=40, dim=12)
    model_b, _ = cluster_model(seed=22, n_clusters=3, per_cluster=40, dim=12)
    gold = GoldTermSet(
        name="g", terms=frozenset(t for t, c in assignment.items() if c == 0)
    )
    methods = ("centroid", "eigencentrality", "snr", "svm-rbf")
    configs = [ExpansionConfig(method=m, k=5) for m in methods]
    args = dict(n_inits=3, steps=4, k=5, seed_base=7)
    report = run_experiment(
        [("a", model_a), ("b", model_b)], configs, [gold], **args
    )

    for record in report.records.values():
        # Growth by exactly k per iteration; duplicate terms would have
        # been rejected at labeled-set construction, so the count proves
        # candidates never repeat.
        assert len(record.final_set) == len(record.initial_set) + 4 * 5
        by_iter = {}
        for entry in record.final_set.entries:
            if entry.iteration is not None:
                by_iter.setdefault(entry.iteration, []).append(entry.term)
        assert sorted(by_iter) == [1, 2, 3, 4]
        assert all(len(batch) == 5 for batch in by_iter.values())

    for seed in (7, 8, 9):
        inits = [
            report.records[("g", method, model_name, seed)].initial_set
            for method in methods
            for model_name in ("a", "b")
        ]
        assert all(init == inits[0] for init in inits)

    rerun = run_experiment([("a", model_a), ("b", model_b)], configs, [gold], **args)
    parallel = run_experiment(
        [("a", model_a), ("b", model_b)], configs, [gold], max_workers=4, **args
    )
    assert report.to_json() == rerun.to_json()
    assert report.to_json() == parallel.to_json()


def test_benchmark_method_ordering():
    t0 = time.monotonic()
    # Gamma sits in the informative band for unit-normalized vectors,
    # where squared distances live in [0, 4]; the 1/dim default targets
    # unnormalized features and flattens the kernel here.
    configs = [
        ExpansionConfig(method="svm-rbf", k=10, rbf_gamma=8.0),
        ExpansionConfig(method="centroid", k=10),
        ExpansionConfig(method="eigencentrality", k=10),
        ExpansionConfig(method="snr", k=10),
    ]
    holds = 0
    observed = []
    for seed in (0, 1, 2):
        model, gold_terms = make_cluster_benchmark(seed)
        assert len(model.terms) == 2000
        assert model.dim == 50
        assert len(gold_terms) == 200
        gold = GoldTermSet(name=f"bench{seed}", terms=frozenset(gold_terms))
        report = run_experiment(
            [("bench", model)], configs, [gold], n_inits=10, steps=20, k=10,
            seed_base=0,
        )
        means = {
            cfg.method: report.cell(gold.name, cfg.method, "bench").mean
            for cfg in configs
        }
        observed.append(means)
        if (
            means["svm-rbf"] >= means["centroid"]
            and means["centroid"] >= means["eigencentrality"]
            and means["centroid"] >= means["snr"]
        ):
            holds += 1
    assert holds >= 2, f"ordering held in only {holds}/3 seeds: {observed}"
    assert time.monotonic() - t0 < 300.0


def test_degenerate_and_perfect_gold_sanity():
    # Gold covering the whole vocabulary: every batch is all-positive,
    # so every (method, seed) cell averages exactly k.
    model, _ = cluster_model(seed=4, n_clusters=3, per_cluster=100, dim=10)
    gold = GoldTermSet(name="all", terms=frozenset(model.terms))
    terms_sorted = sorted(model.terms)
    for method in ("centroid", "eigencentrality", "snr", "svm-linear", "svm-rbf"):
        for seed in (0, 1, 2):
            rng = np.random.default_rng(seed)
            chosen = [str(t) for t in rng.choice(terms_sorted, size=10, replace=False)]
            record = run_trial(
                model,
                ExpansionConfig(method=method, k=10),
                gold,
                seed=seed,
                steps=5,
                initial_set=LabeledTermSet.from_seeds(chosen[:5], chosen[5:]),
            )
            assert record.per_iteration_positives == [10] * 5
            assert record.mean_positives == 10.0

    # Perfectly separated gold: centroid returns k gold members per
    # iteration until the 55 unlabeled ones run out (50 + 5), then none.
    pmodel, pgold = perfect_cluster_model(60, 40, seed=1)
    record = run_trial(
        pmodel,
        ExpansionConfig(method="centroid", k=10),
        GoldTermSet(name="gold", terms=frozenset(pgold)),
        seed=3,
        steps=8,
    )
    assert record.per_iteration_positives == [10, 10, 10, 10, 10, 5, 0, 0]


def test_reference_grid_renders_byte_for_byte():
    payload = json.loads((FIXTURES / "afinn_pos_reference.json").read_text())
    report = ExperimentReport.from_json_dict(payload)
    text = render_report_text(report)
    assert text == (FIXTURES / "afinn_pos_reference.txt").read_text()

    lines = text.splitlines()
    header = lines[3].split()
    assert header == ["method", "cbow", "ppmi", "sgns", "sppmi"]
    ppmi_col = header.index("ppmi")
    rows = {line.split()[0]: line.split() for line in lines[4:9]}
    assert rows["svm-rbf"][ppmi_col] == "4.27"
    assert rows["centroid"][ppmi_col] == "1.91"


def test_session_replay_and_restore(tmp_path):
    model, assignment = cluster_model(seed=3, n_clusters=3, per_cluster=12, dim=16)
    gold = {t for t, c in assignment.items() if c == 0}
    positives = sorted(t for t in assignment if assignment[t] == 0)[:3]
    negatives = sorted(t for t in assignment if assignment[t] == 1)[:2]
    config = ExpansionConfig(method="svm-rbf", k=4)

    service_a = SessionService({"m": model}, data_dir=tmp_path / "a")
    session_a = service_a.create_session("m", config, positives, negatives)
    recorded = []
    for _ in range(5):
        candidates = service_a.request_candidates(session_a.id)
        labels = {t: (t in gold) for t in candidates}
        service_a.submit_labels(session_a.id, labels)
        recorded.append((candidates, labels))

    # Replay against a fresh instance: same seeds, same batches.
    service_b = SessionService({"m": model}, data_dir=tmp_path / "b")
    session_b = service_b.create_session("m", config, positives, negatives)
    for candidates, labels in recorded:
        assert service_b.request_candidates(session_b.id) == candidates
        service_b.submit_labels(session_b.id, labels)

    # Restore from disk in yet another instance round-trips deep-equal.
    service_c = SessionService({"m": model}, data_dir=tmp_path / "b")
    assert service_c.restore(session_b.id) == service_b.get_session(session_b.id)
