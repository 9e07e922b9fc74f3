"""Domain exceptions shared across the pipeline.

Every error carries a stable ``code`` string (its class name) that the HTTP
service and CLI surface verbatim, so clients can match on codes instead of
messages.
"""

from __future__ import annotations


class DocpipeError(Exception):
    """Base class for all domain errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- OCR ---

class MissingImage(DocpipeError):
    pass


class EngineUnavailable(DocpipeError):
    pass


class EngineTimeout(DocpipeError):
    pass


class UnsupportedLanguage(DocpipeError):
    pass


class EmptyDictionary(DocpipeError):
    pass


# --- classifier ---

class EmptyCorpus(DocpipeError):
    pass


class EmptyVocabulary(DocpipeError):
    pass


class DegenerateLabels(DocpipeError):
    pass


class DimensionMismatch(DocpipeError):
    pass


class SchemaViolation(DocpipeError):
    pass


class IoError(DocpipeError):
    pass


# --- summarizer / translator providers ---

class EmptyInput(DocpipeError):
    pass


class MissingApiKey(DocpipeError):
    pass


class ProviderTimeout(DocpipeError):
    pass


class ProviderRejected(DocpipeError):
    pass


class MalformedProviderResponse(DocpipeError):
    pass


class SameLanguagePair(DocpipeError):
    pass


# --- metrics ---

class EmptyReference(DocpipeError):
    pass


class LengthMismatch(DocpipeError):
    pass


class EmptyHypothesisCorpus(DocpipeError):
    pass


# --- pipeline service ---

class ConfigInvalid(DocpipeError):
    pass


class UnknownRun(DocpipeError):
    pass


class EmptyEditedText(DocpipeError):
    pass


class CorruptRecord(DocpipeError):
    pass


class BindFailure(DocpipeError):
    pass
