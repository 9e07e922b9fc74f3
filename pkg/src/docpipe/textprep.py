"""Script-aware text preprocessing: normalization, sentence segmentation,
tokenization, stopword removal, and light suffix stemming.

All functions here are pure; stopword sets are loaded once per language and
cached. Stemming is rule-based for Latin and identity for Indic scripts —
TF-IDF over surface forms is the working feature space, so heavyweight
morphology buys nothing downstream.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources

from .languages import LanguageTag, ScriptClass

DANDA = "।"
DOUBLE_DANDA = "॥"

# Sentence terminators, shared by all scripts. The danda pair only occurs in
# Indic text anyway, so splitting on it unconditionally is safe.
_TERMINATORS = {".", "!", "?", DANDA, DOUBLE_DANDA}

_ASCII_PUNCT = set("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~")

# Unicode block ranges per script class, checked in declaration order.
_BLOCKS: list[tuple[int, int, ScriptClass]] = [
    (0x0041, 0x005A, ScriptClass.LATIN),
    (0x0061, 0x007A, ScriptClass.LATIN),
    (0x00C0, 0x024F, ScriptClass.LATIN),     # Latin-1 Supplement .. Extended-B
    (0x0900, 0x097F, ScriptClass.DEVANAGARI),
    (0x0980, 0x09FF, ScriptClass.BENGALI),
    (0x0B80, 0x0BFF, ScriptClass.TAMIL),
    (0x0C00, 0x0C7F, ScriptClass.TELUGU),
    (0x0600, 0x06FF, ScriptClass.PERSO_ARABIC),
    (0x0750, 0x077F, ScriptClass.PERSO_ARABIC),
    (0xFB50, 0xFDFF, ScriptClass.PERSO_ARABIC),
    (0xFE70, 0xFEFF, ScriptClass.PERSO_ARABIC),
]


@dataclass(frozen=True)
class Sentence:
    text: str
    start_offset: int
    end_offset: int
    script: ScriptClass


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_stopword: bool = False


@dataclass(frozen=True)
class PreprocessConfig:
    language: LanguageTag
    lowercase: bool = True          # Latin only; Indic scripts are caseless
    remove_stopwords: bool = True
    stem: bool = True
    strip_punctuation: bool = True


@dataclass(frozen=True)
class ProcessedText:
    normalized_full: str
    sentences: tuple[Sentence, ...]
    tokens_per_sentence: tuple[tuple[Token, ...], ...]
    language: LanguageTag


def normalize(text: str) -> str:
    """Canonical-compose Unicode, unify newlines, collapse space/tab runs,
    and trim each line. Idempotent; empty input stays empty."""
    if not text:
        return ""
    text = unicodedata.normalize("NFC", text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = []
    for line in text.split("\n"):
        line = re.sub(r"[ \t]+", " ", line).strip()
        lines.append(line)
    return "\n".join(lines).strip("\n")


def _script_of_char(ch: str) -> ScriptClass:
    cp = ord(ch)
    for lo, hi, script in _BLOCKS:
        if lo <= cp <= hi:
            return script
    return ScriptClass.OTHER


def detect_script(text: str) -> ScriptClass:
    """Plurality vote over characters, excluding ASCII punctuation, digits,
    and whitespace. Empty or undecidable input is OTHER; ties break by the
    ScriptClass declaration order."""
    counts: dict[ScriptClass, int] = {}
    for ch in text:
        if ch.isspace() or ch in _ASCII_PUNCT or unicodedata.category(ch) == "Nd":
            continue
        script = _script_of_char(ch)
        counts[script] = counts.get(script, 0) + 1
    if not counts:
        return ScriptClass.OTHER
    best = max(counts.values())
    for script in ScriptClass:  # declaration order breaks ties
        if counts.get(script, 0) == best:
            return script
    return ScriptClass.OTHER


def _splits_here(text: str, i: int) -> bool:
    """True when the terminator at position i ends a sentence."""
    ch = text[i]
    if ch not in _TERMINATORS:
        return False
    if ch == ".":
        # Abbreviation guard: a period followed (after optional space) by a
        # lowercase Latin letter does not end the sentence.
        j = i + 1
        if j < len(text) and text[j] == " ":
            j += 1
        if j < len(text) and "a" <= text[j] <= "z":
            return False
    return True


def segment_sentences(text: str, script: ScriptClass) -> list[Sentence]:
    """Split normalized text into sentences on {. ! ? danda double-danda}.

    Terminators attach to the preceding sentence (runs of terminators are
    consumed together, so "What?!" is one sentence). Trailing text without a
    terminator forms a final sentence; whitespace-only segments are dropped.
    """
    sentences: list[Sentence] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if _splits_here(text, i):
            # Absorb any immediately following terminators ("...", "?!").
            end = i + 1
            while end < n and text[end] in _TERMINATORS:
                end += 1
            _append_span(sentences, text, start, end, script)
            start = end
            i = end
        else:
            i += 1
    _append_span(sentences, text, start, n, script)
    return sentences


def _append_span(sentences: list[Sentence], text: str, start: int, end: int,
                 script: ScriptClass) -> None:
    # Trim whitespace off the span edges before recording offsets.
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if start < end:
        sentences.append(Sentence(text[start:end], start, end, script))


def _strip_punct(piece: str) -> str:
    start, end = 0, len(piece)
    while start < end and unicodedata.category(piece[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(piece[end - 1]).startswith("P"):
        end -= 1
    return piece[start:end]


def tokenize(sentence: str, script: ScriptClass, lowercase: bool = True,
             strip_punctuation: bool = True) -> list[Token]:
    """Whitespace-split, strip surrounding punctuation (all Unicode P*
    categories, which includes the danda), drop empties. ``normalized`` is
    the lowercased form for Latin script, the surface otherwise."""
    tokens: list[Token] = []
    for piece in sentence.split():
        if strip_punctuation:
            piece = _strip_punct(piece)
        if not piece:
            continue
        if script is ScriptClass.LATIN and lowercase:
            norm = piece.lower()
        else:
            norm = piece
        tokens.append(Token(surface=piece, normalized=norm))
    return tokens


@lru_cache(maxsize=None)
def stopword_set(code: str) -> frozenset[str]:
    """Stopwords for a language code, from the shipped data files. Languages
    without a shipped list behave as empty-list."""
    try:
        raw = resources.files("docpipe.data").joinpath("stopwords", f"{code}.txt") \
            .read_text("utf-8")
    except FileNotFoundError:
        return frozenset()
    words = set()
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(normalize(line))
    return frozenset(words)


def remove_stopwords(tokens: list[Token], language: LanguageTag) -> list[Token]:
    stops = stopword_set(language.code)
    return [t for t in tokens if t.normalized not in stops]


# Ordered suffix list; the first match that leaves a stem of >= 3 characters
# is stripped, once.
_SUFFIXES = ("ing", "edly", "ed", "ly", "es", "s")


def stem(token: Token, language: LanguageTag) -> Token:
    """Latin-only suffix stripping; identity for all other scripts."""
    if language.script is not ScriptClass.LATIN:
        return token
    norm = token.normalized
    for suffix in _SUFFIXES:
        if norm.endswith(suffix) and len(norm) - len(suffix) >= 3:
            return replace(token, normalized=norm[: -len(suffix)])
    return token


def preprocess(text: str, config: PreprocessConfig) -> ProcessedText:
    """normalize -> detect_script -> segment -> tokenize -> stopword flag /
    removal -> stemming, per the config flags."""
    normalized_full = normalize(text)
    script = detect_script(normalized_full)
    sentences = segment_sentences(normalized_full, script)
    stops = stopword_set(config.language.code)

    all_tokens: list[tuple[Token, ...]] = []
    for sentence in sentences:
        tokens = tokenize(sentence.text, script, lowercase=config.lowercase,
                          strip_punctuation=config.strip_punctuation)
        tokens = [replace(t, is_stopword=t.normalized in stops) for t in tokens]
        if config.remove_stopwords:
            tokens = [t for t in tokens if not t.is_stopword]
        if config.stem:
            tokens = [stem(t, config.language) for t in tokens]
        all_tokens.append(tuple(tokens))
    return ProcessedText(
        normalized_full=normalized_full,
        sentences=tuple(sentences),
        tokens_per_sentence=tuple(all_tokens),
        language=config.language,
    )
