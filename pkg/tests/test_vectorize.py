"""Sparse vectors, vocabulary fitting, TFIDF weights and chi-square selection."""

import math
import random

import numpy as np
import pytest

from pashtext.corpus import LabelSet
from pashtext.errors import DataError
from pashtext.pipeline import TokenizedDocument
from pashtext.vectorize import (
    TFIDF,
    UNIGRAM,
    FeatureMatrix,
    SparseVector,
    Vocabulary,
    apply_mask,
    apply_mask_vector,
    build_vocabulary,
    chi2_scores,
    idf_weights,
    select_top_k,
    tfidf_vector,
    unigram_vector,
    vectorize_documents,
)


def tdoc(doc_id, tokens, label="a"):
    return TokenizedDocument(id=doc_id, tokens=tuple(tokens), label=label)


def test_sparse_vector_invariants():
    with pytest.raises(DataError):
        SparseVector(np.array([1, 1]), np.array([1.0, 2.0]), 3)
    with pytest.raises(DataError):
        SparseVector(np.array([2, 1]), np.array([1.0, 2.0]), 3)
    with pytest.raises(DataError):
        SparseVector(np.array([0, 3]), np.array([1.0, 2.0]), 3)
    with pytest.raises(DataError):
        SparseVector(np.array([-1]), np.array([1.0]), 3)
    with pytest.raises(DataError):
        SparseVector(np.array([0]), np.array([np.inf]), 3)
    with pytest.raises(DataError):
        SparseVector(np.array([0]), np.array([1.0, 2.0]), 3)


def test_sparse_vector_round_trips_and_get():
    dense = [0.0, 2.0, 0.0, -1.5]
    vec = SparseVector.from_dense(dense)
    assert vec.nnz == 2
    assert vec.get(1) == 2.0
    assert vec.get(0) == 0.0
    assert vec.get(3) == -1.5
    assert np.array_equal(vec.to_dense(), np.asarray(dense))
    again = SparseVector.from_dict({3: -1.5, 1: 2.0, 0: 0.0}, 4)
    assert np.array_equal(again.to_dense(), vec.to_dense())


def test_sparse_dot_matches_dense_sweep():
    rng = random.Random(13)
    for _ in range(200):
        dim = rng.randrange(1, 12)
        a = [rng.choice([0.0, 0.0, rng.uniform(-2, 2)]) for _ in range(dim)]
        b = [rng.choice([0.0, 0.0, rng.uniform(-2, 2)]) for _ in range(dim)]
        va, vb = SparseVector.from_dense(a), SparseVector.from_dense(b)
        assert va.dot(vb) == pytest.approx(float(np.dot(a, b)), abs=1e-12)
        assert va.norm_sq() == pytest.approx(float(np.dot(a, a)), abs=1e-12)
    with pytest.raises(DataError):
        SparseVector.from_dense([1.0]).dot(SparseVector.from_dense([1.0, 2.0]))


def test_build_vocabulary_first_occurrence_order():
    docs = [tdoc("1", ["b", "a", "b"]), tdoc("2", ["c", "a"])]
    vocab = build_vocabulary(docs)
    assert vocab.token_to_index == {"b": 0, "a": 1, "c": 2}
    assert vocab.document_frequency.tolist() == [1, 2, 1]
    assert vocab.n_train_docs == 2


def test_build_vocabulary_min_df():
    docs = [tdoc("1", ["a", "b"]), tdoc("2", ["a", "c"])]
    vocab = build_vocabulary(docs, min_df=2)
    assert list(vocab.token_to_index) == ["a"]
    with pytest.raises(DataError, match="empty after filtering"):
        build_vocabulary(docs, min_df=3)
    with pytest.raises(DataError):
        build_vocabulary([], min_df=1)


def test_unigram_vector_counts_and_oov():
    vocab = build_vocabulary([tdoc("1", ["a", "b"]), tdoc("2", ["b", "c"])])
    vec = unigram_vector(["b", "a", "b", "zzz"], vocab)
    assert vec.dim == 3
    assert vec.get(vocab.token_to_index["a"]) == 1.0
    assert vec.get(vocab.token_to_index["b"]) == 2.0
    assert vec.get(vocab.token_to_index["c"]) == 0.0
    empty = unigram_vector(["zzz", "yyy"], vocab)
    assert empty.nnz == 0 and empty.dim == 3


def test_idf_is_natural_log_of_inverse_df():
    docs = [tdoc("1", ["a", "b"]), tdoc("2", ["b"]), tdoc("3", ["b", "c"])]
    vocab = build_vocabulary(docs)
    idf = idf_weights(vocab)
    assert idf[vocab.token_to_index["a"]] == pytest.approx(math.log(3 / 1), abs=1e-15)
    assert idf[vocab.token_to_index["b"]] == pytest.approx(0.0, abs=1e-15)
    assert idf[vocab.token_to_index["c"]] == pytest.approx(math.log(3 / 1), abs=1e-15)


def test_tfidf_prunes_zero_weights():
    docs = [tdoc("1", ["a", "b"]), tdoc("2", ["b"])]
    vocab = build_vocabulary(docs)
    counts = unigram_vector(["a", "b", "b"], vocab)
    weighted = tfidf_vector(counts, idf_weights(vocab))
    # "b" appears in every training doc, so its idf (and weight) is 0.
    assert weighted.get(vocab.token_to_index["b"]) == 0.0
    assert vocab.token_to_index["b"] not in weighted.indices.tolist()
    assert weighted.get(vocab.token_to_index["a"]) == pytest.approx(
        1.0 * math.log(2.0), abs=1e-12
    )


def test_vectorize_documents_modes_and_labels():
    labels = LabelSet(["x", "y"])
    docs = [tdoc("1", ["a", "a", "b"], "x"), tdoc("2", ["b"], "y")]
    vocab = build_vocabulary(docs)
    counts = vectorize_documents(docs, vocab, UNIGRAM, labels)
    assert counts.mode == UNIGRAM
    assert counts.row_labels.tolist() == [0, 1]
    assert counts.rows[0].get(vocab.token_to_index["a"]) == 2.0
    weighted = vectorize_documents(docs, vocab, TFIDF, labels)
    assert weighted.mode == TFIDF
    with pytest.raises(DataError):
        vectorize_documents(docs, vocab, "bigram", labels)


def test_chi2_worked_examples():
    # Two docs, one per class. Feature present with weight 2 in class 0:
    # O = (2, 0), E = (1, 1), score = (2-1)^2/1 + (0-1)^2/1 = 2.
    m = FeatureMatrix(
        rows=[SparseVector.from_dense([2.0]), SparseVector.from_dense([0.0])],
        row_labels=np.array([0, 1]),
        mode=UNIGRAM,
        dim=1,
    )
    assert chi2_scores(m, 2)[0] == pytest.approx(2.0, abs=1e-12)
    # O = (1, 0), E = (0.5, 0.5) -> 1.0
    m = FeatureMatrix(
        rows=[SparseVector.from_dense([1.0]), SparseVector.from_dense([0.0])],
        row_labels=np.array([0, 1]),
        mode=UNIGRAM,
        dim=1,
    )
    assert chi2_scores(m, 2)[0] == pytest.approx(1.0, abs=1e-12)
    # A feature absent everywhere has E = 0 for every class: score 0.
    m = FeatureMatrix(
        rows=[SparseVector.from_dense([0.0, 1.0]), SparseVector.from_dense([0.0, 1.0])],
        row_labels=np.array([0, 1]),
        mode=UNIGRAM,
        dim=2,
    )
    assert chi2_scores(m, 2)[0] == 0.0


def brute_force_chi2(dense, labels, n_classes):
    n, dim = dense.shape
    scores = []
    for j in range(dim):
        total = sum(dense[i][j] for i in range(n))
        score = 0.0
        for c in range(n_classes):
            observed = sum(dense[i][j] for i in range(n) if labels[i] == c)
            n_c = sum(1 for lab in labels if lab == c)
            expected = (n_c / n) * total
            if expected > 0:
                score += (observed - expected) ** 2 / expected
        scores.append(score)
    return scores


def test_chi2_matches_brute_force_sweep():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randrange(2, 8)
        dim = rng.randrange(1, 5)
        n_classes = rng.randrange(2, 4)
        labels = [rng.randrange(n_classes) for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0] = 0
            labels[1] = 1
        dense = np.array(
            [[rng.choice([0.0, 0.0, 1.0, 2.0]) for _ in range(dim)] for _ in range(n)]
        )
        m = FeatureMatrix(
            rows=[SparseVector.from_dense(row) for row in dense],
            row_labels=np.array(labels),
            mode=UNIGRAM,
            dim=dim,
        )
        expected = brute_force_chi2(dense, labels, n_classes)
        assert np.allclose(chi2_scores(m, n_classes), expected, atol=1e-12)


def test_chi2_rejects_negative_values_and_bad_labels():
    m = FeatureMatrix(
        rows=[SparseVector.from_dense([-1.0]), SparseVector.from_dense([1.0])],
        row_labels=np.array([0, 1]),
        mode=UNIGRAM,
        dim=1,
    )
    with pytest.raises(DataError):
        chi2_scores(m, 2)
    ok = FeatureMatrix(
        rows=[SparseVector.from_dense([1.0])], row_labels=np.array([1]),
        mode=UNIGRAM, dim=1,
    )
    with pytest.raises(DataError):
        chi2_scores(ok, 1)


def test_select_top_k_stable_ties_and_clamp(caplog):
    scores = np.array([1.0, 3.0, 3.0, 0.5])
    mask = select_top_k(scores, 2)
    # the two 3.0 scores win; ties keep the lower index first
    assert mask.kept_indices.tolist() == [1, 2]
    mask = select_top_k(scores, 3)
    assert mask.kept_indices.tolist() == [0, 1, 2]
    with caplog.at_level("WARNING"):
        mask = select_top_k(scores, 10)
    assert mask.kept_indices.tolist() == [0, 1, 2, 3]
    assert any("clamping" in r.message for r in caplog.records)
    with pytest.raises(DataError):
        select_top_k(scores, 0)


def test_apply_mask_matches_dense_slicing():
    rng = random.Random(4)
    for _ in range(50):
        dim = rng.randrange(2, 10)
        n = rng.randrange(1, 6)
        dense = np.array(
            [[rng.choice([0.0, 0.0, rng.uniform(0, 3)]) for _ in range(dim)]
             for _ in range(n)]
        )
        m = FeatureMatrix(
            rows=[SparseVector.from_dense(row) for row in dense],
            row_labels=np.zeros(n, dtype=np.int64),
            mode=UNIGRAM,
            dim=dim,
        )
        k = rng.randrange(1, dim + 1)
        scores = np.array([rng.random() for _ in range(dim)])
        mask = select_top_k(scores, k)
        masked = apply_mask(mask, m)
        assert masked.dim == k
        assert np.allclose(masked.to_dense(), dense[:, mask.kept_indices])
        vec = SparseVector.from_dense(dense[0])
        assert np.allclose(
            apply_mask_vector(mask, vec).to_dense(), dense[0][mask.kept_indices]
        )


def test_vocabulary_round_trip_and_validation(tmp_path):
    docs = [tdoc("1", ["الف", "ب"]), tdoc("2", ["ب"])]
    vocab = build_vocabulary(docs)
    path = tmp_path / "vocab.json"
    vocab.save(path)
    loaded = Vocabulary.load(path)
    assert loaded.token_to_index == vocab.token_to_index
    assert loaded.document_frequency.tolist() == vocab.document_frequency.tolist()
    assert loaded.n_train_docs == vocab.n_train_docs
    with pytest.raises(DataError):
        Vocabulary({"a": 0, "b": 2}, np.array([1, 1]), 2)
    with pytest.raises(DataError):
        Vocabulary({"a": 0}, np.array([5]), 2)
