"""TF-IDF vectorization and from-scratch linear classifiers.

Logistic regression (multinomial, full-batch gradient descent on
cross-entropy) and a one-vs-rest linear SVM (subgradient descent on hinge
loss) over L2-normalized tf-idf vectors. Training is deterministic: zero
initialization, a single seeded shuffle of example order, fixed epochs,
single-threaded numpy/scipy ops — identical inputs and seed give
bit-identical models.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from . import textprep
from .errors import (
    DegenerateLabels,
    DimensionMismatch,
    EmptyCorpus,
    EmptyVocabulary,
    IoError,
    SchemaViolation,
)
from .languages import LanguageTag, default_language_for_script

MODEL_SCHEMA_VERSION = 1
_MODEL_FIELDS = {"version", "kind", "labels", "vocab", "idf", "weights",
                 "bias", "hyper", "seed"}


@dataclass(frozen=True)
class Vectorizer:
    vocabulary: dict[str, int]          # word -> column index
    idf: np.ndarray                     # aligned with column indices
    min_df: int = 1
    max_features: int | None = None

    @property
    def size(self) -> int:
        return len(self.vocabulary)


@dataclass(frozen=True)
class SparseVector:
    indices: np.ndarray                 # strictly increasing column indices
    values: np.ndarray                  # matching non-zero weights


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 0.5
    epochs: int = 300
    l2_lambda: float = 1e-4
    svm_margin_c: float = 1.0           # SVM only

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be a positive integer")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be non-negative")
        if self.svm_margin_c <= 0:
            raise ValueError("svm_margin_c must be positive")


@dataclass(frozen=True)
class LinearModel:
    kind: str                           # "LogisticRegression" | "LinearSVM"
    labels: tuple[str, ...]
    weights: np.ndarray                 # (classes, vocabulary)
    bias: np.ndarray                    # (classes,)
    vectorizer: Vectorizer
    hyper: Hyperparams
    seed: int


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class_precision_recall: dict[str, tuple[float, float]]
    confusion: np.ndarray               # rows: true label, cols: predicted
    n_examples: int


def fit_tfidf(corpus: Sequence[Sequence[str]], min_df: int = 1,
              max_features: int | None = None) -> Vectorizer:
    """Build a vocabulary and smoothed idf weights from tokenized documents.

    Vocabulary keeps tokens appearing in at least ``min_df`` documents,
    truncated to ``max_features`` by descending document frequency then
    lexicographic order; surviving words get column indices in lexicographic
    order. idf(w) = ln((1+N)/(1+df(w))) + 1.
    """
    if not corpus:
        raise EmptyCorpus("cannot fit tf-idf on an empty corpus")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")

    df: dict[str, int] = {}
    for doc in corpus:
        for word in set(doc):
            df[word] = df.get(word, 0) + 1

    selected = [w for w, n in df.items() if n >= min_df]
    if not selected:
        raise EmptyVocabulary(f"no token appears in >= {min_df} documents")
    if max_features is not None and len(selected) > max_features:
        selected.sort(key=lambda w: (-df[w], w))
        selected = selected[:max_features]
    selected.sort()

    n_docs = len(corpus)
    idf = np.array([np.log((1 + n_docs) / (1 + df[w])) + 1.0 for w in selected])
    vocabulary = {w: i for i, w in enumerate(selected)}
    return Vectorizer(vocabulary=vocabulary, idf=idf, min_df=min_df,
                      max_features=max_features)


def vectorize(v: Vectorizer, tokens: Iterable[str]) -> SparseVector:
    """Counts times idf for in-vocabulary tokens, L2-normalized. Tokens
    outside the vocabulary are ignored; an all-OOV input gives the zero
    vector."""
    counts: dict[int, int] = {}
    for word in tokens:
        idx = v.vocabulary.get(word)
        if idx is not None:
            counts[idx] = counts.get(idx, 0) + 1
    if not counts:
        return SparseVector(np.empty(0, dtype=np.int64), np.empty(0))
    indices = np.array(sorted(counts), dtype=np.int64)
    values = np.array([counts[i] for i in indices], dtype=np.float64) * v.idf[indices]
    norm = np.linalg.norm(values)
    if norm > 0:
        values = values / norm
    return SparseVector(indices, values)


def _to_csr(X: Sequence[SparseVector], n_cols: int) -> sparse.csr_matrix:
    indptr = np.zeros(len(X) + 1, dtype=np.int64)
    for i, vec in enumerate(X):
        indptr[i + 1] = indptr[i] + len(vec.indices)
    indices = np.concatenate([vec.indices for vec in X]) if X else np.empty(0, dtype=np.int64)
    data = np.concatenate([vec.values for vec in X]) if X else np.empty(0)
    return sparse.csr_matrix((data, indices, indptr), shape=(len(X), n_cols))


def _check_training_inputs(X: Sequence[SparseVector], y: Sequence[str],
                           vectorizer: Vectorizer) -> tuple[str, ...]:
    if len(X) != len(y):
        raise DimensionMismatch(f"{len(X)} vectors vs {len(y)} labels")
    if len(X) < 2:
        raise DimensionMismatch("need at least 2 training examples")
    labels = tuple(sorted(set(y)))
    if len(labels) < 2:
        raise DegenerateLabels(f"need >= 2 distinct labels, got {labels}")
    size = vectorizer.size
    for vec in X:
        if len(vec.indices) and vec.indices[-1] >= size:
            raise DimensionMismatch("vector index exceeds vocabulary size")
    return labels


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _logreg_loss_grad(W: np.ndarray, b: np.ndarray, X: sparse.csr_matrix,
                      Y: np.ndarray, l2_lambda: float
                      ) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy + (l2/2)*||W||^2 and its analytic gradient.

    The bias is not regularized. Exposed for the finite-difference gradient
    check in the test suite.
    """
    n = X.shape[0]
    P = _softmax(X @ W.T + b)
    eps = np.finfo(float).tiny
    loss = -np.mean(np.log(np.sum(P * Y, axis=1) + eps))
    loss += 0.5 * l2_lambda * float(np.sum(W * W))
    D = (P - Y) / n
    grad_W = (X.T @ D).T + l2_lambda * W
    grad_b = D.sum(axis=0)
    return loss, grad_W, grad_b


def train_logistic_regression(X: Sequence[SparseVector], y: Sequence[str],
                              hyper: Hyperparams, seed: int,
                              vectorizer: Vectorizer,
                              labels: Sequence[str] | None = None) -> LinearModel:
    """Multinomial logistic regression by full-batch gradient descent.

    Weights start at zero; the example order is shuffled once with a seeded
    RNG. With a full batch the shuffle is mathematically inert but pins the
    floating-point summation order, which is what makes models bit-identical
    across runs.
    """
    inferred = _check_training_inputs(X, y, vectorizer)
    label_order = tuple(labels) if labels is not None else inferred
    if set(label_order) != set(inferred):
        raise DegenerateLabels(f"labels {label_order} do not match corpus {inferred}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(X))
    Xm = _to_csr([X[i] for i in order], vectorizer.size)
    label_index = {lab: i for i, lab in enumerate(label_order)}
    y_idx = np.array([label_index[y[i]] for i in order])
    Y = np.zeros((len(X), len(label_order)))
    Y[np.arange(len(X)), y_idx] = 1.0

    W = np.zeros((len(label_order), vectorizer.size))
    b = np.zeros(len(label_order))
    for _ in range(hyper.epochs):
        _, grad_W, grad_b = _logreg_loss_grad(W, b, Xm, Y, hyper.l2_lambda)
        W -= hyper.learning_rate * grad_W
        b -= hyper.learning_rate * grad_b

    return LinearModel(kind="LogisticRegression", labels=label_order,
                       weights=W, bias=b, vectorizer=vectorizer,
                       hyper=hyper, seed=seed)


def train_linear_svm(X: Sequence[SparseVector], y: Sequence[str],
                     hyper: Hyperparams, seed: int,
                     vectorizer: Vectorizer,
                     labels: Sequence[str] | None = None) -> LinearModel:
    """One-vs-rest linear SVM by full-batch subgradient descent on
    hinge loss + L2; same determinism contract as logistic regression."""
    inferred = _check_training_inputs(X, y, vectorizer)
    label_order = tuple(labels) if labels is not None else inferred
    if set(label_order) != set(inferred):
        raise DegenerateLabels(f"labels {label_order} do not match corpus {inferred}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(X))
    Xm = _to_csr([X[i] for i in order], vectorizer.size)
    label_index = {lab: i for i, lab in enumerate(label_order)}
    y_idx = np.array([label_index[y[i]] for i in order])
    Y = -np.ones((len(X), len(label_order)))
    Y[np.arange(len(X)), y_idx] = 1.0

    n = len(X)
    W = np.zeros((len(label_order), vectorizer.size))
    b = np.zeros(len(label_order))
    for _ in range(hyper.epochs):
        margins = (Xm @ W.T + b) * Y
        active = (margins < 1.0) * Y          # subgradient mask, signed
        grad_W = hyper.l2_lambda * W - (hyper.svm_margin_c / n) * (Xm.T @ active).T
        grad_b = -(hyper.svm_margin_c / n) * active.sum(axis=0)
        W -= hyper.learning_rate * grad_W
        b -= hyper.learning_rate * grad_b

    return LinearModel(kind="LinearSVM", labels=label_order, weights=W,
                       bias=b, vectorizer=vectorizer, hyper=hyper, seed=seed)


def predict(model: LinearModel, text_tokens: Iterable[str]
            ) -> tuple[str, dict[str, float]]:
    """Predicted label plus per-label scores: softmax probabilities for
    logistic regression, raw margins for the SVM. Ties break by label order
    (argmax takes the first maximum)."""
    vec = vectorize(model.vectorizer, text_tokens)
    raw = model.bias.copy()
    if len(vec.indices):
        raw = raw + model.weights[:, vec.indices] @ vec.values
    if model.kind == "LogisticRegression":
        scores = _softmax(raw[None, :])[0]
    else:
        scores = raw
    best = int(np.argmax(scores))
    return model.labels[best], {lab: float(s) for lab, s in zip(model.labels, scores)}


def evaluate(model: LinearModel, corpus: Sequence[tuple[Sequence[str], str]]) -> EvalReport:
    """Accuracy, per-class precision/recall (0 on empty denominators) and a
    confusion matrix with true labels as rows."""
    if not corpus:
        raise EmptyCorpus("cannot evaluate on an empty corpus")
    label_index = {lab: i for i, lab in enumerate(model.labels)}
    k = len(model.labels)
    confusion = np.zeros((k, k), dtype=np.int64)
    for tokens, label in corpus:
        if label not in label_index:
            raise DimensionMismatch(f"label {label!r} not among model labels")
        predicted, _ = predict(model, tokens)
        confusion[label_index[label], label_index[predicted]] += 1

    n = int(confusion.sum())
    accuracy = float(np.trace(confusion)) / n
    per_class: dict[str, tuple[float, float]] = {}
    for lab, i in label_index.items():
        tp = float(confusion[i, i])
        predicted_i = float(confusion[:, i].sum())
        actual_i = float(confusion[i, :].sum())
        precision = tp / predicted_i if predicted_i else 0.0
        recall = tp / actual_i if actual_i else 0.0
        per_class[lab] = (precision, recall)
    return EvalReport(accuracy=accuracy, per_class_precision_recall=per_class,
                      confusion=confusion, n_examples=n)


def top_features(model: LinearModel, k: int) -> dict[str, list[tuple[str, float]]]:
    """Per class, the k strongest positively weighted words, descending;
    ties break lexicographically. Fewer than k are returned when the class
    has fewer positive weights."""
    if k < 1:
        raise ValueError("k must be >= 1")
    words = sorted(model.vectorizer.vocabulary, key=model.vectorizer.vocabulary.get)
    result: dict[str, list[tuple[str, float]]] = {}
    for row, label in enumerate(model.labels):
        weighted = [(w, float(model.weights[row, i])) for i, w in enumerate(words)
                    if model.weights[row, i] > 0]
        weighted.sort(key=lambda item: (-item[1], item[0]))
        result[label] = weighted[:k]
    return result


def save_model(model: LinearModel, path: str | Path) -> None:
    """Write the documented JSON schema with full-precision numbers; output
    bytes are a pure function of the model."""
    doc = {
        "version": MODEL_SCHEMA_VERSION,
        "kind": model.kind,
        "labels": list(model.labels),
        "vocab": model.vectorizer.vocabulary,
        "idf": model.vectorizer.idf.tolist(),
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "hyper": {
            "learning_rate": model.hyper.learning_rate,
            "epochs": model.hyper.epochs,
            "l2_lambda": model.hyper.l2_lambda,
            "svm_margin_c": model.hyper.svm_margin_c,
        },
        "seed": model.seed,
    }
    try:
        Path(path).write_text(json.dumps(doc, sort_keys=True, ensure_ascii=False),
                              encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write model file {path}: {exc}") from exc


def load_model(path: str | Path) -> LinearModel:
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read model file {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc.keys()) != _MODEL_FIELDS:
        raise SchemaViolation("model file fields do not match the schema")
    if doc["version"] != MODEL_SCHEMA_VERSION:
        raise SchemaViolation(f"unsupported model version {doc['version']!r}")
    if doc["kind"] not in ("LogisticRegression", "LinearSVM"):
        raise SchemaViolation(f"unknown model kind {doc['kind']!r}")

    vocab = {str(w): int(i) for w, i in doc["vocab"].items()}
    idf = np.array(doc["idf"], dtype=np.float64)
    weights = np.array(doc["weights"], dtype=np.float64)
    bias = np.array(doc["bias"], dtype=np.float64)
    labels = tuple(doc["labels"])
    if idf.shape != (len(vocab),) or weights.shape != (len(labels), len(vocab)) \
            or bias.shape != (len(labels),):
        raise SchemaViolation("model array shapes are inconsistent")
    vectorizer = Vectorizer(vocabulary=vocab, idf=idf)
    hyper = Hyperparams(**doc["hyper"])
    return LinearModel(kind=doc["kind"], labels=labels, weights=weights,
                       bias=bias, vectorizer=vectorizer, hyper=hyper,
                       seed=int(doc["seed"]))


def prepare_tokens(text: str, language: LanguageTag | None = None) -> list[str]:
    """Normalized feature tokens for one document: full preprocessing with
    stopword removal and stemming. The language defaults to the detected
    script's registry language."""
    if language is None:
        language = default_language_for_script(
            textprep.detect_script(textprep.normalize(text)))
    config = textprep.PreprocessConfig(language=language)
    processed = textprep.preprocess(text, config)
    return [t.normalized for sent in processed.tokens_per_sentence for t in sent]


def load_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Load (text, label) pairs from a ``.csv`` (header ``text,label``) or
    ``.jsonl`` (fields ``text``, ``label``) file, auto-detected by
    extension."""
    p = Path(path)
    try:
        if p.suffix == ".csv":
            with p.open(newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                if reader.fieldnames is None or \
                        {"text", "label"} - set(reader.fieldnames):
                    raise SchemaViolation("corpus CSV needs a text,label header")
                return [(row["text"], row["label"]) for row in reader]
        if p.suffix == ".jsonl":
            pairs = []
            with p.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    doc = json.loads(line)
                    pairs.append((doc["text"], doc["label"]))
            return pairs
    except OSError as exc:
        raise IoError(f"cannot read corpus {path}: {exc}") from exc
    except (json.JSONDecodeError, KeyError) as exc:
        raise SchemaViolation(f"bad corpus record in {path}: {exc}") from exc
    raise SchemaViolation(f"unsupported corpus extension: {p.suffix!r}")
