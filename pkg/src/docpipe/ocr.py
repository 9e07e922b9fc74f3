"""OCR adapters and confidence-gated post-OCR correction.

Two engines sit behind one interface: an external Tesseract-compatible
executable invoked as a separate OS process (TSV word output), and a
ground-truth adapter that reads the sidecar text file next to the image —
the latter makes the whole pipeline deterministic and offline under test.

Correction is dictionary-driven: a low-confidence token not found in the
dictionary is replaced when confusion-pair substitution or a bounded
edit-distance search yields exactly one candidate.
"""

from __future__ import annotations

import shutil
import subprocess
import threading
import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path

from . import textprep
from .errors import (
    EmptyDictionary,
    EngineTimeout,
    EngineUnavailable,
    MissingImage,
    UnsupportedLanguage,
)
from .languages import LanguageTag, REGISTRY
from .metrics import levenshtein

GROUND_TRUTH_ENGINE_ID = "ground-truth/1"


class Engine(Enum):
    EXTERNAL = "external"
    GROUND_TRUTH = "ground-truth"


@dataclass(frozen=True)
class OcrConfig:
    languages: tuple[LanguageTag, ...]
    engine: Engine = Engine.GROUND_TRUTH
    engine_path: str = ""               # empty: search PATH for "tesseract"
    page_segmentation_mode: int = 3
    timeout: float = 30.0
    max_parallel: int = 4

    def __post_init__(self) -> None:
        if not self.languages:
            raise ValueError("languages must be non-empty")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be >= 1")


@dataclass(frozen=True)
class OcrToken:
    text: str
    confidence: float
    bbox: tuple[int, int, int, int] | None = None   # left, top, width, height


@dataclass(frozen=True)
class OcrResult:
    full_text: str
    tokens: tuple[OcrToken, ...]
    language_used: tuple[LanguageTag, ...]
    engine_id: str
    mean_confidence: float


@dataclass(frozen=True)
class CorrectionPolicy:
    dictionary: dict[str, frozenset[str]]           # language code -> words
    max_edit_distance: int = 2
    min_confidence_to_skip: float = 0.9
    confusion_pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if not 0 <= self.max_edit_distance <= 3:
            raise ValueError("max_edit_distance must be in [0, 3]")


# One semaphore per configured concurrency cap, shared process-wide so the
# cap holds across concurrent pipeline runs with the same config.
_SEMAPHORES: dict[int, threading.BoundedSemaphore] = {}
_SEMAPHORES_LOCK = threading.Lock()


def _engine_semaphore(max_parallel: int) -> threading.BoundedSemaphore:
    with _SEMAPHORES_LOCK:
        sem = _SEMAPHORES.get(max_parallel)
        if sem is None:
            sem = threading.BoundedSemaphore(max_parallel)
            _SEMAPHORES[max_parallel] = sem
        return sem


def _resolve_engine(config: OcrConfig) -> str:
    candidate = config.engine_path or "tesseract"
    resolved = shutil.which(candidate)
    if resolved is None:
        raise EngineUnavailable(f"OCR engine not found: {candidate!r}")
    return resolved


def _mean_confidence(tokens: list[OcrToken]) -> float:
    if not tokens:
        return 0.0
    return sum(t.confidence for t in tokens) / len(tokens)


def run_ocr(image_path: str | Path, config: OcrConfig) -> OcrResult:
    """Obtain text from a document image via the configured engine.

    The ground-truth engine returns the sidecar ``<stem>.txt`` byte-for-byte
    with every whitespace token at confidence 1.0. The external engine runs
    as a subprocess in TSV mode; word confidences arrive on a 0-100 scale
    and are normalized to [0, 1], and words with negative confidence
    (non-text blocks) are dropped.
    """
    path = Path(image_path)
    if not path.is_file():
        raise MissingImage(f"image not found or unreadable: {path}")

    if config.engine is Engine.GROUND_TRUTH:
        sidecar = path.with_suffix(".txt")
        if not sidecar.is_file():
            raise MissingImage(f"ground-truth sidecar not found: {sidecar}")
        text = sidecar.read_text(encoding="utf-8")
        tokens = tuple(OcrToken(text=w, confidence=1.0) for w in text.split())
        return OcrResult(
            full_text=text,
            tokens=tokens,
            language_used=config.languages,
            engine_id=GROUND_TRUTH_ENGINE_ID,
            mean_confidence=_mean_confidence(list(tokens)),
        )

    engine = _resolve_engine(config)
    lang_arg = "+".join(tag.code for tag in config.languages)
    cmd = [engine, str(path), "stdout", "-l", lang_arg,
           "--psm", str(config.page_segmentation_mode), "tsv"]
    sem = _engine_semaphore(config.max_parallel)
    with sem:
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True,
                                  timeout=config.timeout)
        except subprocess.TimeoutExpired as exc:
            raise EngineTimeout(f"engine exceeded {config.timeout}s") from exc
    if proc.returncode != 0:
        stderr = proc.stderr.strip()
        if "language" in stderr.lower() or "tessdata" in stderr.lower():
            raise UnsupportedLanguage(stderr or f"engine rejected languages {lang_arg!r}")
        raise EngineUnavailable(f"engine exited {proc.returncode}: {stderr}")

    tokens, lines = _parse_tsv(proc.stdout)
    full_text = "\n".join(" ".join(words) for words in lines)
    return OcrResult(
        full_text=full_text,
        tokens=tuple(tokens),
        language_used=config.languages,
        engine_id=f"{Path(engine).name}/{_engine_version(engine)}",
        mean_confidence=_mean_confidence(tokens),
    )


def _parse_tsv(output: str) -> tuple[list[OcrToken], list[list[str]]]:
    """Parse TSV word rows (level 5): conf and text columns plus the bbox.
    Words are grouped into lines by (block, paragraph, line) for the
    reconstructed full text."""
    rows = output.splitlines()
    if not rows:
        return [], []
    header = rows[0].split("\t")
    try:
        col = {name: header.index(name) for name in
               ("level", "block_num", "par_num", "line_num",
                "left", "top", "width", "height", "conf", "text")}
    except ValueError as exc:
        raise EngineUnavailable(f"engine TSV output missing columns: {exc}") from exc

    tokens: list[OcrToken] = []
    lines: list[list[str]] = []
    current_key: tuple[str, str, str] | None = None
    for row in rows[1:]:
        fields = row.split("\t")
        if len(fields) < len(header) or fields[col["level"]] != "5":
            continue
        text = fields[col["text"]]
        if not text.strip():
            continue
        conf = float(fields[col["conf"]])
        if conf < 0:
            continue  # engine convention for non-text blocks
        bbox = tuple(int(fields[col[k]]) for k in ("left", "top", "width", "height"))
        tokens.append(OcrToken(text=text, confidence=conf / 100.0, bbox=bbox))
        key = (fields[col["block_num"]], fields[col["par_num"]], fields[col["line_num"]])
        if key != current_key:
            lines.append([])
            current_key = key
        lines[-1].append(text)
    return tokens, lines


@lru_cache(maxsize=8)
def _engine_version(engine: str) -> str:
    try:
        proc = subprocess.run([engine, "--version"], capture_output=True,
                              text=True, timeout=10)
    except (OSError, subprocess.TimeoutExpired):
        return "unknown"
    first = (proc.stdout or proc.stderr).splitlines()
    if not first:
        return "unknown"
    return first[0].split()[-1] if first[0].split() else "unknown"


def list_supported_languages(config: OcrConfig) -> list[LanguageTag]:
    """Registry languages available under the configured engine: all of them
    for ground truth, the installed intersection for the external engine."""
    registry = sorted(REGISTRY.values(), key=lambda t: t.code)
    if config.engine is Engine.GROUND_TRUTH:
        return registry
    engine = _resolve_engine(config)
    try:
        proc = subprocess.run([engine, "--list-langs"], capture_output=True,
                              text=True, timeout=config.timeout)
    except subprocess.TimeoutExpired as exc:
        raise EngineTimeout("engine --list-langs timed out") from exc
    if proc.returncode != 0:
        raise EngineUnavailable(f"--list-langs exited {proc.returncode}")
    installed = {line.strip() for line in proc.stdout.splitlines()
                 if line.strip() and not line.startswith("List of")}
    return [tag for tag in registry if tag.code in installed]


def load_dictionary(path: str | Path) -> frozenset[str]:
    """One word per line, UTF-8, normalized; comment lines start with #."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(textprep.normalize(line))
    return frozenset(words)


def bundled_dictionary(code: str) -> frozenset[str]:
    """Dictionary shipped with the package, empty when none exists."""
    try:
        raw = resources.files("docpipe.data").joinpath("dictionaries", f"{code}.txt") \
            .read_text("utf-8")
    except FileNotFoundError:
        return frozenset()
    return frozenset(
        textprep.normalize(line.strip())
        for line in raw.splitlines()
        if line.strip() and not line.startswith("#")
    )


def _confusion_candidate(word: str, policy: CorrectionPolicy,
                         dictionary: frozenset[str]) -> str | None:
    for src, dst in policy.confusion_pairs:
        if src not in word:
            continue
        candidate = word.replace(src, dst)
        if candidate in dictionary and \
                levenshtein(word, candidate) <= policy.max_edit_distance:
            return candidate
    return None


def _bounded_distance(a: str, b: str, bound: int) -> int:
    """Levenshtein distance, abandoning early once it must exceed bound;
    returns bound + 1 in that case."""
    if abs(len(a) - len(b)) > bound:
        return bound + 1
    prev = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        curr = [i]
        row_min = i
        for j, ch_b in enumerate(b, start=1):
            cost = 0 if ch_a == ch_b else 1
            value = min(prev[j] + 1, curr[j - 1] + 1, prev[j - 1] + cost)
            curr.append(value)
            if value < row_min:
                row_min = value
        if row_min > bound:
            return bound + 1
        prev = curr
    return min(prev[-1], bound + 1)


def _edit_distance_candidate(word: str, policy: CorrectionPolicy,
                             dictionary: frozenset[str]) -> str | None:
    """The unique dictionary word at minimal edit distance within the bound;
    None when there is no candidate or the minimum is tied."""
    best: list[str] = []
    best_distance = policy.max_edit_distance
    for entry in dictionary:
        d = _bounded_distance(word, entry, best_distance)
        if d < best_distance:
            best_distance = d
            best = [entry]
        elif d == best_distance:
            best.append(entry)
    if len(best) == 1 and best_distance <= policy.max_edit_distance:
        return best[0]
    return None


def _split_punct(word: str) -> tuple[str, str, str]:
    start, end = 0, len(word)
    while start < end and unicodedata.category(word[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(word[end - 1]).startswith("P"):
        end -= 1
    return word[:start], word[start:end], word[end:]


def correct_token(word: str, policy: CorrectionPolicy,
                  dictionary: frozenset[str]) -> str:
    """Correction for one token text; returns the input when no unique
    in-range candidate exists. Surrounding punctuation (including sentence
    terminators the engine attaches to words) is preserved, and only the
    word core is matched against the dictionary."""
    lead, core, trail = _split_punct(textprep.normalize(word))
    if not core or core in dictionary:
        return word
    candidate = _confusion_candidate(core, policy, dictionary)
    if candidate is None:
        candidate = _edit_distance_candidate(core, policy, dictionary)
    if candidate is None:
        return word
    return f"{lead}{candidate}{trail}"


def correct_text(result: OcrResult, policy: CorrectionPolicy) -> OcrResult:
    """Dictionary-gated correction of low-confidence tokens.

    A token is replaced only if its confidence is below
    ``min_confidence_to_skip``, it is missing from the dictionary, and a
    unique candidate exists (confusion pairs first, then bounded edit
    distance; distance ties leave the token unchanged). Corrected tokens
    keep their original confidence. Idempotent.
    """
    primary = result.language_used[0] if result.language_used else None
    dictionary = policy.dictionary.get(primary.code) if primary else None
    if not dictionary:
        raise EmptyDictionary(
            f"no dictionary for language {primary.code if primary else '?'}")

    changed = False
    new_tokens: list[OcrToken] = []
    for token in result.tokens:
        if token.confidence >= policy.min_confidence_to_skip:
            new_tokens.append(token)
            continue
        corrected = correct_token(token.text, policy, dictionary)
        if corrected != token.text:
            changed = True
            new_tokens.append(replace(token, text=corrected))
        else:
            new_tokens.append(token)

    if not changed:
        return result
    # Rebuild the full text by substituting corrected words in order; the
    # surrounding whitespace layout of the original is preserved.
    full_text = _rebuild_text(result.full_text, result.tokens, new_tokens)
    return OcrResult(
        full_text=full_text,
        tokens=tuple(new_tokens),
        language_used=result.language_used,
        engine_id=result.engine_id,
        mean_confidence=result.mean_confidence,
    )


def _rebuild_text(original: str, old_tokens: tuple[OcrToken, ...],
                  new_tokens: list[OcrToken]) -> str:
    out = []
    cursor = 0
    for old, new in zip(old_tokens, new_tokens):
        found = original.find(old.text, cursor)
        if found < 0:
            # Token order no longer matches the text; fall back to a plain join.
            return " ".join(t.text for t in new_tokens)
        out.append(original[cursor:found])
        out.append(new.text)
        cursor = found + len(old.text)
    out.append(original[cursor:])
    return "".join(out)
