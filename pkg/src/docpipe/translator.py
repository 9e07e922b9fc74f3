"""Translation via a remote provider, with an identity fallback for offline
runs, plus the translate -> re-translate round trip used for quality
scoring."""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urlparse

from . import textprep
from .errors import MalformedProviderResponse, SameLanguagePair
from .languages import LanguageTag
from .providers import ProviderConfig, Transport, post_with_retries

DEFAULT_TRANSLATE_KEY_ENV = "DOCPIPE_TRANSLATE_API_KEY"
IDENTITY_PROVIDER_ID = "identity"

# Providers cap payload sizes; longer texts are split at sentence boundaries
# and the pieces are sent sequentially.
CHUNK_CHAR_BUDGET = 4000


class IdentityProvider:
    """Offline stand-in: translation is the identity function on text."""


IDENTITY = IdentityProvider()


@dataclass(frozen=True)
class TranslationRequest:
    text: str
    source: LanguageTag
    target: LanguageTag

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("translation text must be non-empty")


@dataclass(frozen=True)
class TranslationResult:
    text: str
    source: LanguageTag
    target: LanguageTag
    provider_id: str


def _chunks(text: str) -> list[str]:
    if len(text) <= CHUNK_CHAR_BUDGET:
        return [text]
    script = textprep.detect_script(text)
    pieces: list[str] = []
    current = ""
    for sentence in textprep.segment_sentences(textprep.normalize(text), script):
        candidate = f"{current} {sentence.text}".strip()
        if current and len(candidate) > CHUNK_CHAR_BUDGET:
            pieces.append(current)
            current = sentence.text
        else:
            current = candidate
    if current:
        pieces.append(current)
    return pieces or [text]


def translate(request: TranslationRequest,
              provider: ProviderConfig | IdentityProvider,
              transport: Transport | None = None) -> TranslationResult:
    """Translate text between languages. The identity provider returns the
    input unchanged (and accepts equal source/target); the remote provider
    uses the documented wire contract with the summarizer's retry policy."""
    if isinstance(provider, IdentityProvider):
        return TranslationResult(text=request.text, source=request.source,
                                 target=request.target,
                                 provider_id=IDENTITY_PROVIDER_ID)
    if request.source.code == request.target.code:
        raise SameLanguagePair(f"source equals target: {request.source.code}")

    host = urlparse(provider.endpoint_url).netloc or provider.endpoint_url
    translated: list[str] = []
    for chunk in _chunks(request.text):
        body = {"text": chunk, "source": request.source.code,
                "target": request.target.code}
        payload = post_with_retries(provider, body, transport)
        piece = payload.get("translation")
        if not isinstance(piece, str):
            raise MalformedProviderResponse(
                'response lacks a string "translation" field')
        translated.append(piece)
    return TranslationResult(text=" ".join(translated), source=request.source,
                             target=request.target, provider_id=f"remote:{host}")


def round_trip(text: str, src: LanguageTag, pivot: LanguageTag,
               provider: ProviderConfig | IdentityProvider,
               transport: Transport | None = None
               ) -> tuple[TranslationResult, TranslationResult]:
    """Translate src -> pivot then back; both legs are returned so callers
    can score the back-translation against the original. Errors on the
    forward leg propagate before any back-translation request is made."""
    forward = translate(TranslationRequest(text, src, pivot), provider, transport)
    back = translate(TranslationRequest(forward.text, pivot, src), provider, transport)
    return forward, back
