"""Evaluation metrics: Levenshtein distance, CER, WER, ROUGE-1, ROUGE-L and
corpus-level BLEU.

Definitions are frozen so scores reproduce across runs and implementations:
unit-cost edit distance, clipped-count ROUGE with harmonic-mean F1, and
corpus BLEU with uniform n-gram weights, epsilon smoothing for zero counts,
and the standard brevity penalty.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from . import textprep
from .errors import EmptyHypothesisCorpus, EmptyReference, LengthMismatch


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricReport:
    """A metric value plus the intermediate quantities that produced it."""

    name: str
    value: float
    components: dict = field(default_factory=dict)


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Minimum number of single-symbol insertions, deletions and
    substitutions (unit cost) transforming ``a`` into ``b``."""
    if len(a) < len(b):
        a, b = b, a  # keep the rolling row short
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, sym_a in enumerate(a, start=1):
        curr = [i]
        for j, sym_b in enumerate(b, start=1):
            cost = 0 if sym_a == sym_b else 1
            curr.append(min(prev[j] + 1,          # deletion
                            curr[j - 1] + 1,      # insertion
                            prev[j - 1] + cost))  # substitution / match
        prev = curr
    return prev[-1]


def cer(reference: str, hypothesis: str) -> float:
    """Character error rate: unit-cost edit distance over Unicode scalar
    values divided by reference length. Both sides are normalized first
    (canonical composition, whitespace collapse) so engine output and ground
    truth compare fairly. May exceed 1."""
    ref = textprep.normalize(reference)
    hyp = textprep.normalize(hypothesis)
    if not ref:
        raise EmptyReference("reference is empty after normalization")
    return levenshtein(ref, hyp) / len(ref)


def wer(reference: str, hypothesis: str) -> float:
    """Word error rate: edit distance over whitespace tokens divided by
    reference token count. May exceed 1."""
    ref_tokens = textprep.normalize(reference).split()
    hyp_tokens = textprep.normalize(hypothesis).split()
    if not ref_tokens:
        raise EmptyReference("reference contains no tokens")
    return levenshtein(ref_tokens, hyp_tokens) / len(ref_tokens)


def _rouge_tokens(text: str) -> list[str]:
    script = textprep.detect_script(text)
    return [t.normalized for t in textprep.tokenize(text, script)]


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge1(reference: str, hypothesis: str) -> RougeScore:
    """Clipped unigram overlap. Tokens come from textprep.tokenize
    (case-folded for Latin); stopwords are retained."""
    ref = _rouge_tokens(reference)
    hyp = _rouge_tokens(hypothesis)
    ref_counts = Counter(ref)
    hyp_counts = Counter(hyp)
    match = sum(min(n, ref_counts[w]) for w, n in hyp_counts.items())
    precision = match / len(hyp) if hyp else 0.0
    recall = match / len(ref) if ref else 0.0
    return RougeScore(precision, recall, _f1(precision, recall))


def _lcs_length(a: Sequence, b: Sequence) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[j - 1]))
        prev = curr
    return prev[-1]


def rougeL(reference: str, hypothesis: str) -> RougeScore:
    """Longest-common-subsequence F1 over token sequences."""
    ref = _rouge_tokens(reference)
    hyp = _rouge_tokens(hypothesis)
    lcs = _lcs_length(ref, hyp)
    precision = lcs / len(hyp) if hyp else 0.0
    recall = lcs / len(ref) if ref else 0.0
    return RougeScore(precision, recall, _f1(precision, recall))


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(references: Sequence[Sequence[str]], hypotheses: Sequence[Sequence[str]],
         max_n: int = 4) -> float:
    """Corpus-level BLEU with one reference per hypothesis.

    Modified n-gram precisions use clipped counts pooled over the corpus.
    A zero precision is replaced by 1/(2 * total hypothesis n-gram count for
    that order); an order with no hypothesis n-grams at all yields 0. The
    brevity penalty is 1 when the hypothesis corpus is longer than the
    reference corpus, else exp(1 - r/c). Result lies in [0, 1].
    """
    report = bleu_report(references, hypotheses, max_n)
    return report.value


def bleu_report(references: Sequence[Sequence[str]], hypotheses: Sequence[Sequence[str]],
                max_n: int = 4) -> MetricReport:
    if len(references) != len(hypotheses):
        raise LengthMismatch(
            f"{len(references)} references vs {len(hypotheses)} hypotheses")
    if not hypotheses:
        raise EmptyHypothesisCorpus("no hypotheses given")
    if max_n < 1:
        raise ValueError("max_n must be >= 1")

    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for ref, hyp in zip(references, hypotheses):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _ngram_counts(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref, n)
            totals[n - 1] += sum(hyp_counts.values())
            matches[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())

    precisions: list[float] = []
    degenerate = False
    for n in range(max_n):
        if totals[n] == 0:
            degenerate = True  # hypotheses too short for this order
            precisions.append(0.0)
        elif matches[n] == 0:
            precisions.append(1.0 / (2 * totals[n]))  # epsilon smoothing
        else:
            precisions.append(matches[n] / totals[n])

    if degenerate or hyp_len == 0:
        value = 0.0
        bp = 0.0 if hyp_len == 0 else None
    else:
        bp = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
        log_sum = sum(math.log(p) for p in precisions) / max_n
        value = bp * math.exp(log_sum)

    return MetricReport(
        name="bleu",
        value=value,
        components={
            "precisions": precisions,
            "matches": matches,
            "totals": totals,
            "brevity_penalty": bp,
            "hypothesis_length": hyp_len,
            "reference_length": ref_len,
            "max_n": max_n,
        },
    )


# --- MetricReport builders used by the CLI ---

def cer_report(reference: str, hypothesis: str) -> MetricReport:
    ref = textprep.normalize(reference)
    hyp = textprep.normalize(hypothesis)
    if not ref:
        raise EmptyReference("reference is empty after normalization")
    edits = levenshtein(ref, hyp)
    return MetricReport("cer", edits / len(ref),
                        {"edit_distance": edits, "reference_chars": len(ref)})


def wer_report(reference: str, hypothesis: str) -> MetricReport:
    ref_tokens = textprep.normalize(reference).split()
    hyp_tokens = textprep.normalize(hypothesis).split()
    if not ref_tokens:
        raise EmptyReference("reference contains no tokens")
    edits = levenshtein(ref_tokens, hyp_tokens)
    return MetricReport("wer", edits / len(ref_tokens),
                        {"edit_distance": edits, "reference_tokens": len(ref_tokens)})


def rouge1_report(reference: str, hypothesis: str) -> MetricReport:
    score = rouge1(reference, hypothesis)
    return MetricReport("rouge1", score.f1,
                        {"precision": score.precision, "recall": score.recall})


def rougeL_report(reference: str, hypothesis: str) -> MetricReport:
    score = rougeL(reference, hypothesis)
    lcs = _lcs_length(_rouge_tokens(reference), _rouge_tokens(hypothesis))
    return MetricReport("rougel", score.f1,
                        {"precision": score.precision, "recall": score.recall,
                         "lcs_length": lcs})
