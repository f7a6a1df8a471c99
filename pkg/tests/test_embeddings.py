"""Embedding store: file IO, normalization, similarity, exact top-k."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from termset.embeddings import (
    EmbeddingModel,
    NORM_UNIT_L2,
    Neighbor,
    load_word2vec_text,
    normalize_unit_l2,
    save_word2vec_text,
    similarity,
    top_k_similar,
)
from termset.errors import ValidationError, VectorFileError


def brute_force_top_k(model, query, k, exclude=()):
    """Oracle: score every term with explicit cosine, sort, cut.

    Independent of the library path: python loop, math on scalars,
    ties broken by (-score, term) sort key.
    """
    qn = np.linalg.norm(query)
    scored = []
    excluded = set(exclude)
    for i, term in enumerate(model.terms):
        if term in excluded:
            continue
        row = model.vectors[i]
        rn = np.linalg.norm(row)
        if rn == 0.0:
            continue
        scored.append((term, float(np.dot(row, query) / (rn * qn))))
    scored.sort(key=lambda ts: (-ts[1], ts[0]))
    return scored[:k]


def random_model(rng, n_terms, dim, normalized=True):
    vectors = rng.standard_normal((n_terms, dim))
    terms = [f"w{i:04d}" for i in range(n_terms)]
    model = EmbeddingModel(terms=terms, vectors=vectors)
    return normalize_unit_l2(model) if normalized else model


class TestModelInvariants:
    def test_rejects_duplicate_terms(self):
        with pytest.raises(ValidationError, match="duplicate"):
            EmbeddingModel(terms=["a", "a"], vectors=np.eye(2))

    def test_rejects_row_count_mismatch(self):
        with pytest.raises(ValidationError):
            EmbeddingModel(terms=["a"], vectors=np.eye(2))

    def test_rejects_non_finite(self):
        bad = np.array([[1.0, np.nan]])
        with pytest.raises(ValidationError, match="finite"):
            EmbeddingModel(terms=["a"], vectors=bad)

    def test_rejects_non_unit_rows_under_unit_scheme(self):
        with pytest.raises(ValidationError, match="unit"):
            EmbeddingModel(
                terms=["a"], vectors=np.array([[2.0, 0.0]]), norm_scheme=NORM_UNIT_L2
            )

    def test_vector_lookup_and_membership(self):
        model = EmbeddingModel(terms=["a", "b"], vectors=np.eye(2))
        assert "a" in model and "c" not in model
        assert_allclose(model.vector("b"), [0.0, 1.0])
        with pytest.raises(ValidationError, match="not in vocabulary"):
            model.vector("zzz")


class TestFileIO:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(7)
        model = random_model(rng, 20, 6, normalized=False)
        path = tmp_path / "vecs.txt"
        save_word2vec_text(model, path)
        loaded = load_word2vec_text(path)
        assert loaded.terms == model.terms
        assert_allclose(loaded.vectors, model.vectors, rtol=1e-8)

    def test_header_errors_carry_line_one(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("not a header\n")
        with pytest.raises(VectorFileError) as exc:
            load_word2vec_text(path)
        assert exc.value.line == 1

    def test_row_arity_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\na 1 2 3\nb 1 2\n")
        with pytest.raises(VectorFileError) as exc:
            load_word2vec_text(path)
        assert exc.value.line == 3

    def test_duplicate_term_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\na 1 2\na 3 4\n")
        with pytest.raises(VectorFileError) as exc:
            load_word2vec_text(path)
        assert exc.value.line == 3
        assert "duplicate" in str(exc.value)

    def test_row_count_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("3 2\na 1 2\nb 3 4\n")
        with pytest.raises(VectorFileError, match="promised 3"):
            load_word2vec_text(path)

    def test_unparseable_value_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2\na 1 oops\n")
        with pytest.raises(VectorFileError) as exc:
            load_word2vec_text(path)
        assert exc.value.line == 2


class TestNormalization:
    def test_rows_become_unit(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, 15, 4, normalized=False)
        unit = normalize_unit_l2(model)
        assert unit.norm_scheme == NORM_UNIT_L2
        assert_allclose(np.linalg.norm(unit.vectors, axis=1), 1.0, atol=1e-12)

    def test_zero_row_rejected(self):
        model = EmbeddingModel(
            terms=["a", "z"], vectors=np.array([[1.0, 0.0], [0.0, 0.0]])
        )
        with pytest.raises(ValidationError, match="z"):
            normalize_unit_l2(model)

    def test_directions_preserved(self):
        model = EmbeddingModel(terms=["a"], vectors=np.array([[3.0, 4.0]]))
        unit = normalize_unit_l2(model)
        assert_allclose(unit.vectors, [[0.6, 0.8]])


class TestSimilarity:
    def test_cosine_is_scale_invariant(self):
        model = EmbeddingModel(
            terms=["a", "b"], vectors=np.array([[1.0, 0.0], [10.0, 10.0]])
        )
        got = similarity(model, model.vector("a"), model.vector("b"))
        assert_allclose(got, np.sqrt(0.5), atol=1e-12)

    def test_unit_model_similarity_equals_dot(self):
        rng = np.random.default_rng(11)
        model = random_model(rng, 30, 8)
        for a, b in [("w0000", "w0001"), ("w0010", "w0029")]:
            va, vb = model.vector(a), model.vector(b)
            assert abs(similarity(model, va, vb) - float(np.dot(va, vb))) < 1e-12

    def test_zero_vector_rejected(self):
        model = EmbeddingModel(terms=["a"], vectors=np.array([[1.0, 0.0]]))
        with pytest.raises(ValidationError, match="zero"):
            similarity(model, np.zeros(2), model.vector("a"))


class TestTopK:
    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(42)
        for trial in range(10):
            model = random_model(rng, 80, 5)
            query = rng.standard_normal(5)
            got = top_k_similar(model, query, k=7)
            want = brute_force_top_k(model, query, k=7)
            assert [n.term for n in got] == [t for t, _ in want]
            assert_allclose([n.score for n in got], [s for _, s in want], atol=1e-12)

    def test_exclusions_respected(self):
        rng = np.random.default_rng(9)
        model = random_model(rng, 40, 4)
        exclude = ["w0003", "w0017", "not-in-vocab"]
        got = top_k_similar(model, model.vector("w0003"), k=5, exclude=exclude)
        assert "w0003" not in [n.term for n in got]
        assert "w0017" not in [n.term for n in got]
        want = brute_force_top_k(model, model.vector("w0003"), 5, exclude)
        assert [n.term for n in got] == [t for t, _ in want]

    def test_ties_broken_by_term_order(self):
        # Identical rows: scores tie exactly, so ordering falls to the term.
        vectors = np.array([[1.0, 0.0]] * 3 + [[0.0, 1.0]])
        model = EmbeddingModel(
            terms=["bb", "aa", "cc", "dd"], vectors=vectors, norm_scheme=NORM_UNIT_L2
        )
        got = top_k_similar(model, np.array([1.0, 0.0]), k=3)
        assert [n.term for n in got] == ["aa", "bb", "cc"]

    def test_k_larger_than_vocab_returns_all(self):
        model = EmbeddingModel(terms=["a", "b"], vectors=np.eye(2))
        got = top_k_similar(model, np.array([1.0, 1.0]), k=10)
        assert len(got) == 2

    def test_result_type(self):
        model = EmbeddingModel(terms=["a"], vectors=np.array([[1.0]]))
        got = top_k_similar(model, np.array([2.0]), k=1)
        assert isinstance(got[0], Neighbor)
