"""Document enrichment: binary sentiment via the in-repo logistic
regression, and regex-based date extraction.

Date extraction returns surfaces and pattern ids only — no calendar
normalization, so the day/month ambiguity of numeric dates is deliberately
left unresolved.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import classifier
from .classifier import Hyperparams, LinearModel, SparseVector
from .errors import DegenerateLabels

SENTIMENT_LABELS = ("negative", "positive")


@dataclass(frozen=True)
class SentimentModel:
    inner: LinearModel

    def __post_init__(self) -> None:
        if tuple(self.inner.labels) != SENTIMENT_LABELS:
            raise DegenerateLabels(
                f"sentiment model must have labels {SENTIMENT_LABELS}")


@dataclass(frozen=True)
class DateMatch:
    surface: str
    start: int
    end: int
    pattern_id: str


_MONTHS = ("january", "february", "march", "april", "may", "june", "july",
           "august", "september", "october", "november", "december")
_MONTH_RE = "|".join(f"{m}|{m[:3]}" for m in _MONTHS)
_DEV_DIGIT = "[०-९]"

# Each pattern id maps to one or more regexes; all matches are pooled and
# selected left to right, longest first at each position. P1-P3 take ASCII
# digits only (re.ASCII) so Devanagari digits fall through to P4.
_DATE_PATTERNS: list[tuple[str, re.Pattern]] = [
    # D/M/Y or D-M-Y, 1-2 digit day/month, 2- or 4-digit year, one separator
    ("P1", re.compile(r"(?<![\d/-])(\d{1,2})([/-])(\d{1,2})\2(\d{4}|\d{2})(?![\d/-])",
                      re.ASCII)),
    # ISO Y-M-D
    ("P2", re.compile(r"(?<![\d/-])\d{4}-\d{2}-\d{2}(?![\d/-])", re.ASCII)),
    # "<day> <MonthName> <year>" with full or 3-letter English month names
    ("P3", re.compile(rf"\b(\d{{1,2}})\s+({_MONTH_RE})\s+(\d{{4}})\b",
                      re.IGNORECASE | re.ASCII)),
    # "<MonthName> <day>, <year>"
    ("P3", re.compile(rf"\b({_MONTH_RE})\s+(\d{{1,2}}),\s*(\d{{4}})\b",
                      re.IGNORECASE | re.ASCII)),
    # P1 and P3 shapes with Devanagari digits
    ("P4", re.compile(rf"(?<!{_DEV_DIGIT})({_DEV_DIGIT}{{1,2}})([/-])({_DEV_DIGIT}{{1,2}})\2"
                      rf"({_DEV_DIGIT}{{4}}|{_DEV_DIGIT}{{2}})(?!{_DEV_DIGIT})")),
    ("P4", re.compile(rf"\b({_DEV_DIGIT}{{1,2}})\s+({_MONTH_RE})\s+({_DEV_DIGIT}{{4}})",
                      re.IGNORECASE)),
    ("P4", re.compile(rf"\b({_MONTH_RE})\s+({_DEV_DIGIT}{{1,2}}),\s*({_DEV_DIGIT}{{4}})",
                      re.IGNORECASE)),
]


def extract_dates(text: str) -> list[DateMatch]:
    """All non-overlapping date matches, left to right; when several
    candidates start at the same offset the longest wins, then earlier
    pattern order."""
    candidates: list[tuple[int, int, int, str, str]] = []
    for order, (pattern_id, pattern) in enumerate(_DATE_PATTERNS):
        for m in pattern.finditer(text):
            candidates.append((m.start(), -(m.end() - m.start()), order,
                               pattern_id, m.group(0)))
    candidates.sort()
    matches: list[DateMatch] = []
    taken_until = -1
    for start, neg_len, _, pattern_id, surface in candidates:
        end = start - neg_len
        if start <= taken_until:
            continue
        matches.append(DateMatch(surface=surface, start=start, end=end,
                                 pattern_id=pattern_id))
        taken_until = end - 1
    return matches


def train_sentiment(corpus: list[tuple[list[str], str]], hyper: Hyperparams,
                    seed: int) -> SentimentModel:
    """Train the binary polarity model on (tokens, polarity) pairs with the
    fixed label order (negative, positive)."""
    polarities = {label for _, label in corpus}
    if polarities != set(SENTIMENT_LABELS):
        raise DegenerateLabels(
            f"corpus polarities {sorted(polarities)} != {list(SENTIMENT_LABELS)}")
    vectorizer = classifier.fit_tfidf([tokens for tokens, _ in corpus], min_df=1)
    X: list[SparseVector] = [classifier.vectorize(vectorizer, tokens)
                             for tokens, _ in corpus]
    y = [label for _, label in corpus]
    inner = classifier.train_logistic_regression(
        X, y, hyper, seed, vectorizer, labels=SENTIMENT_LABELS)
    return SentimentModel(inner=inner)


def predict_sentiment(model: SentimentModel, text: str) -> tuple[str, float]:
    """Polarity plus the winning softmax probability (>= 0.5 for two
    classes). Empty text falls back to the bias-only decision."""
    tokens = classifier.prepare_tokens(text)
    label, scores = classifier.predict(model.inner, tokens)
    return label, scores[label]


def load_sentiment_corpus(path: str | Path | None = None
                          ) -> list[tuple[list[str], str]]:
    """(tokens, polarity) pairs from a CSV in the classifier corpus format;
    defaults to the bundled review-snippet corpus."""
    if path is None:
        raw = resources.files("docpipe.data").joinpath("sentiment", "reviews.csv") \
            .read_text("utf-8")
        rows = list(csv.DictReader(raw.splitlines()))
        pairs = [(row["text"], row["label"]) for row in rows]
    else:
        pairs = classifier.load_corpus(path)
    return [(classifier.prepare_tokens(text), label) for text, label in pairs]


def train_default_sentiment_model(hyper: Hyperparams | None = None,
                                  seed: int = 42) -> SentimentModel:
    return train_sentiment(load_sentiment_corpus(),
                           hyper or Hyperparams(), seed)
