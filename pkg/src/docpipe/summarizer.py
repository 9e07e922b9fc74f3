"""Summarization: a remote abstractive provider plus a deterministic local
extractive fallback so the pipeline runs fully offline.

The extractive scorer ranks sentences by the mean corpus-internal frequency
of their content tokens — fully auditable by hand, language-agnostic given
the tokenizer.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlparse

from . import textprep
from .errors import EmptyInput, MalformedProviderResponse
from .languages import LanguageTag
from .providers import ProviderConfig, Transport, post_with_retries

DEFAULT_SUMMARY_KEY_ENV = "DOCPIPE_SUMMARY_API_KEY"
EXTRACTIVE_PROVIDER_ID = "local-extractive/1"


class SummaryMethod(Enum):
    REMOTE_ABSTRACTIVE = "RemoteAbstractive"
    LOCAL_EXTRACTIVE = "LocalExtractive"


@dataclass(frozen=True)
class SummaryRequest:
    sentences: tuple[textprep.Sentence, ...]
    language: LanguageTag
    target_ratio: float = 0.3
    max_sentences: int | None = None

    def __post_init__(self) -> None:
        if not 0 < self.target_ratio <= 1:
            raise ValueError("target_ratio must be in (0, 1]")
        if self.max_sentences is not None and self.max_sentences < 1:
            raise ValueError("max_sentences must be positive")


@dataclass(frozen=True)
class Summary:
    text: str
    method: SummaryMethod
    provider_id: str
    compression_ratio: float
    selected_indices: tuple[int, ...] | None = None


def sentence_scores(request: SummaryRequest) -> list[float]:
    """Mean corpus-internal frequency of each sentence's content tokens.

    Frequencies are computed over the request's sentences only; stopwords
    for the request language are excluded. A sentence with no content
    tokens scores 0.
    """
    stops = textprep.stopword_set(request.language.code)
    content: list[list[str]] = []
    for sentence in request.sentences:
        tokens = textprep.tokenize(sentence.text, sentence.script)
        content.append([t.normalized for t in tokens if t.normalized not in stops])
    freq = Counter(word for words in content for word in words)
    return [sum(freq[w] for w in words) / len(words) if words else 0.0
            for words in content]


def summarize_extractive(request: SummaryRequest) -> Summary:
    """Select the top ceil(target_ratio * N) sentences (capped by
    max_sentences) by score, ties to the lower index, and emit them in
    original document order."""
    n = len(request.sentences)
    if n == 0:
        raise EmptyInput("no sentences to summarize")
    scores = sentence_scores(request)
    k = math.ceil(request.target_ratio * n)
    if request.max_sentences is not None:
        k = min(k, request.max_sentences)
    ranked = sorted(range(n), key=lambda i: (-scores[i], i))
    selected = tuple(sorted(ranked[:k]))

    source_text = " ".join(s.text for s in request.sentences)
    text = " ".join(request.sentences[i].text for i in selected)
    return Summary(
        text=text,
        method=SummaryMethod.LOCAL_EXTRACTIVE,
        provider_id=EXTRACTIVE_PROVIDER_ID,
        compression_ratio=len(text) / len(source_text) if source_text else 0.0,
        selected_indices=selected,
    )


def summarize_remote(request: SummaryRequest, config: ProviderConfig,
                     transport: Transport | None = None) -> Summary:
    """Send the document to the abstractive provider and return its summary
    verbatim. The API key must be present in the configured environment
    variable before any network activity happens."""
    if not request.sentences:
        raise EmptyInput("no sentences to summarize")
    source_text = " ".join(s.text for s in request.sentences)
    body = {
        "text": source_text,
        "language": request.language.code,
        "ratio": request.target_ratio,
    }
    payload = post_with_retries(config, body, transport)
    summary_text = payload.get("summary")
    if not isinstance(summary_text, str):
        raise MalformedProviderResponse('response lacks a string "summary" field')
    host = urlparse(config.endpoint_url).netloc or config.endpoint_url
    return Summary(
        text=summary_text,
        method=SummaryMethod.REMOTE_ABSTRACTIVE,
        provider_id=f"remote:{host}",
        compression_ratio=len(summary_text) / len(source_text) if source_text else 0.0,
        selected_indices=None,
    )
