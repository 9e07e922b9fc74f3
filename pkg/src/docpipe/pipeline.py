"""Pipeline orchestration: OCR -> correction -> preprocessing -> classify /
summarize / translate / enrich, with a persisted stage-by-stage run record.

Run records are plain JSON files under a runs directory, written atomically
(write-then-rename) after every stage, so a crashed or failed run leaves a
readable partial record. Records embed the effective config, which is what
makes the edit-OCR-and-rerun flow reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import classifier, enrich, ocr, summarizer, textprep, translator
from .errors import (
    ConfigInvalid,
    CorruptRecord,
    DocpipeError,
    EmptyEditedText,
    IoError,
    UnknownRun,
)
from .languages import LanguageTag, get_language
from .providers import ProviderConfig, Transport
from .summarizer import DEFAULT_SUMMARY_KEY_ENV
from .translator import DEFAULT_TRANSLATE_KEY_ENV

STAGE_ORDER = ("Ocr", "Correction", "Preprocess", "Classify", "Summarize",
               "Translate", "Enrich")

_RECORD_FIELDS = {"run_id", "parent_run", "created_at", "input_image",
                  "config", "status", "stages", "error"}

OFFLINE_ENV = "DOCPIPE_OFFLINE"


@dataclass(frozen=True)
class PipelineConfig:
    """Validated pipeline configuration plus the raw dict it came from.

    The raw dict is embedded in every run record so a run can be re-executed
    later (resume_from_edited_ocr) under exactly the same settings.
    """

    raw: dict
    ocr: ocr.OcrConfig
    preprocess: textprep.PreprocessConfig
    classifier_model_path: str | None
    sentiment_model_path: str | None
    summary_mode: str                   # "extractive" | "remote"
    summary_ratio: float
    translation_target: LanguageTag | None
    translation_provider: str           # "identity" | "remote"
    correction: ocr.CorrectionPolicy | None
    offline: bool
    summary_provider: ProviderConfig
    translate_provider: ProviderConfig

    @staticmethod
    def from_dict(raw: dict | None) -> "PipelineConfig":
        return _config_from_dict(raw or {})


def _config_error(message: str) -> ConfigInvalid:
    return ConfigInvalid(message)


def _config_from_dict(raw: dict) -> PipelineConfig:
    if not isinstance(raw, dict):
        raise _config_error("config must be a JSON object")
    known = {"ocr", "preprocess", "classifier_model_path", "sentiment_model_path",
             "summary", "translation", "correction", "offline", "providers"}
    unknown = set(raw) - known
    if unknown:
        raise _config_error(f"unknown config fields: {sorted(unknown)}")

    ocr_raw = raw.get("ocr", {})
    languages = tuple(get_language(code) for code in ocr_raw.get("languages", ["eng"]))
    engine_name = ocr_raw.get("engine", "ground-truth")
    try:
        engine = ocr.Engine(engine_name)
    except ValueError:
        raise _config_error(f"unknown OCR engine {engine_name!r}") from None
    try:
        ocr_config = ocr.OcrConfig(
            languages=languages,
            engine=engine,
            engine_path=ocr_raw.get("engine_path", ""),
            page_segmentation_mode=int(ocr_raw.get("page_segmentation_mode", 3)),
            timeout=float(ocr_raw.get("timeout", 30.0)),
            max_parallel=int(ocr_raw.get("max_parallel", 4)),
        )
    except ValueError as exc:
        raise _config_error(f"bad ocr config: {exc}") from None

    prep_raw = raw.get("preprocess", {})
    prep_config = textprep.PreprocessConfig(
        language=get_language(prep_raw.get("language", languages[0].code)),
        lowercase=bool(prep_raw.get("lowercase", True)),
        remove_stopwords=bool(prep_raw.get("remove_stopwords", True)),
        stem=bool(prep_raw.get("stem", True)),
        strip_punctuation=bool(prep_raw.get("strip_punctuation", True)),
    )

    summary_raw = raw.get("summary", {})
    summary_mode = summary_raw.get("mode", "extractive")
    if summary_mode not in ("extractive", "remote"):
        raise _config_error(f"summary.mode must be extractive|remote, got {summary_mode!r}")
    summary_ratio = float(summary_raw.get("ratio", 0.3))
    if not 0 < summary_ratio <= 1:
        raise _config_error("summary.ratio must be in (0, 1]")

    translation_raw = raw.get("translation", {})
    target_code = translation_raw.get("target")
    translation_target = get_language(target_code) if target_code else None
    translation_provider = translation_raw.get("provider", "identity")
    if translation_provider not in ("identity", "remote"):
        raise _config_error(
            f"translation.provider must be identity|remote, got {translation_provider!r}")

    correction = _correction_from_dict(raw.get("correction"))

    offline = bool(raw.get("offline", False))
    if os.environ.get(OFFLINE_ENV) == "1":
        offline = True
    if offline and summary_mode == "remote":
        raise _config_error("offline mode forbids summary.mode=remote")
    if offline and translation_provider == "remote":
        raise _config_error("offline mode forbids translation.provider=remote")

    providers_raw = raw.get("providers", {})
    summary_provider = _provider_from_dict(
        providers_raw.get("summary"), DEFAULT_SUMMARY_KEY_ENV)
    translate_provider = _provider_from_dict(
        providers_raw.get("translate"), DEFAULT_TRANSLATE_KEY_ENV)

    return PipelineConfig(
        raw=raw,
        ocr=ocr_config,
        preprocess=prep_config,
        classifier_model_path=raw.get("classifier_model_path"),
        sentiment_model_path=raw.get("sentiment_model_path"),
        summary_mode=summary_mode,
        summary_ratio=summary_ratio,
        translation_target=translation_target,
        translation_provider=translation_provider,
        correction=correction,
        offline=offline,
        summary_provider=summary_provider,
        translate_provider=translate_provider,
    )


def _provider_from_dict(raw: dict | None, default_env: str) -> ProviderConfig:
    raw = raw or {}
    try:
        return ProviderConfig(
            endpoint_url=raw.get("endpoint_url", ""),
            api_key_env_var=raw.get("api_key_env_var", default_env),
            timeout=float(raw.get("timeout", 10.0)),
            max_retries=int(raw.get("max_retries", 3)),
            retry_backoff_base=float(raw.get("retry_backoff_base", 0.5)),
        )
    except ValueError as exc:
        raise _config_error(f"bad provider config: {exc}") from None


def _correction_from_dict(raw: dict | None) -> ocr.CorrectionPolicy | None:
    if raw is None:
        return None
    dictionaries: dict[str, frozenset[str]] = {}
    for code, source in raw.get("dictionaries", {}).items():
        if source is None or source == "bundled":
            words = ocr.bundled_dictionary(code)
        else:
            words = ocr.load_dictionary(source)
        dictionaries[code] = words
    try:
        return ocr.CorrectionPolicy(
            dictionary=dictionaries,
            max_edit_distance=int(raw.get("max_edit_distance", 2)),
            min_confidence_to_skip=float(raw.get("min_confidence_to_skip", 0.9)),
            confusion_pairs=tuple(
                (str(a), str(b)) for a, b in raw.get("confusion_pairs", [])),
        )
    except ValueError as exc:
        raise _config_error(f"bad correction config: {exc}") from None


def load_config_file(path: str | Path) -> PipelineConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}") from exc
    return PipelineConfig.from_dict(raw)


# --- run store ---

class RunStore:
    """One JSON file per run under the runs directory; atomic writes via
    write-then-rename; per-run-id write serialization."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, run_id: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(run_id)
            if lock is None:
                lock = threading.Lock()
                self._locks[run_id] = lock
            return lock

    def _path(self, run_id: str) -> Path:
        return self.directory / f"{run_id}.json"

    def persist(self, record: dict) -> None:
        run_id = record["run_id"]
        payload = json.dumps(record, ensure_ascii=False, sort_keys=True, indent=1)
        tmp = self._path(run_id).with_suffix(".json.tmp")
        with self._lock_for(run_id):
            try:
                tmp.write_text(payload, encoding="utf-8")
                os.replace(tmp, self._path(run_id))
            except OSError as exc:
                raise IoError(f"cannot persist run {run_id}: {exc}") from exc

    def load(self, run_id: str) -> dict:
        path = self._path(run_id)
        if not path.is_file():
            raise UnknownRun(f"no run with id {run_id}")
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise CorruptRecord(f"run {run_id} unreadable: {exc}") from exc
        if not isinstance(record, dict) or set(record) != _RECORD_FIELDS:
            raise CorruptRecord(f"run {run_id} does not match the record schema")
        return record

    def list_runs(self, limit: int = 20, offset: int = 0) -> list[dict]:
        """Newest-first run summaries."""
        summaries = []
        for path in self.directory.glob("*.json"):
            try:
                record = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError):
                continue  # skip unreadable entries rather than fail the listing
            if not isinstance(record, dict) or "run_id" not in record:
                continue
            summaries.append({
                "run_id": record.get("run_id"),
                "parent_run": record.get("parent_run"),
                "created_at": record.get("created_at"),
                "status": record.get("status"),
                "input_image": record.get("input_image"),
                "stage_count": len(record.get("stages", [])),
            })
        summaries.sort(key=lambda s: (s["created_at"] or "", s["run_id"] or ""),
                       reverse=True)
        return summaries[offset:offset + limit]


def persist_run(store: RunStore, record: dict) -> None:
    store.persist(record)


def load_run(store: RunStore, run_id: str) -> dict:
    return store.load(run_id)


def list_runs(store: RunStore, limit: int = 20, offset: int = 0) -> list[dict]:
    return store.list_runs(limit, offset)


# --- pipeline execution ---

@dataclass
class _RunContext:
    record: dict
    config: PipelineConfig
    store: RunStore | None
    transport: Transport | None

    def add_stage(self, stage: str, output: Any, duration_ms: int,
                  provider_id: str | None = None) -> None:
        self.record["stages"].append({
            "stage": stage,
            "output": output,
            "duration_ms": duration_ms,
            "provider_id": provider_id,
        })
        if self.store is not None:
            self.store.persist(self.record)


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _new_record(image_name: str, content_hash: str, config: PipelineConfig,
                parent_run: str | None = None) -> dict:
    # Records persist stage-by-stage; until a run reaches a terminal state
    # (Succeeded/Failed) its on-disk status is AwaitingReview, which is also
    # what a crashed run leaves behind for a human to look at.
    return {
        "run_id": secrets.token_hex(16),
        "parent_run": parent_run,
        "created_at": _now_iso(),
        "input_image": {"filename": image_name, "sha256": content_hash},
        "config": config.raw,
        "status": "AwaitingReview",
        "stages": [],
        "error": None,
    }


def _ocr_payload(result: ocr.OcrResult) -> dict:
    return {
        "full_text": result.full_text,
        "mean_confidence": result.mean_confidence,
        "engine_id": result.engine_id,
        "languages": [tag.code for tag in result.language_used],
        "tokens": [
            {"text": t.text, "confidence": t.confidence,
             **({"bbox": list(t.bbox)} if t.bbox is not None else {})}
            for t in result.tokens
        ],
    }


def run_pipeline(image_path: str | Path, config: PipelineConfig,
                 store: RunStore | None = None,
                 transport: Transport | None = None) -> dict:
    """Execute all stages in order and return the finished record.

    Stage errors do not raise: the run flips to Failed with the failing
    stage's error code recorded and all previously persisted stage outputs
    preserved. Config problems raise ConfigInvalid before a record exists.
    """
    path = Path(image_path)
    content_hash = hashlib.sha256(path.read_bytes()).hexdigest() \
        if path.is_file() else ""
    record = _new_record(path.name, content_hash, config)
    ctx = _RunContext(record=record, config=config, store=store,
                      transport=transport)
    if store is not None:
        store.persist(record)
    try:
        ocr_result = _timed(ctx, "Ocr", lambda: ocr.run_ocr(path, config.ocr),
                            _ocr_payload,
                            provider_id=lambda r: r.engine_id)
        _execute_downstream(ctx, ocr_result)
        record["status"] = "Succeeded"
    except DocpipeError as exc:
        record["status"] = "Failed"
        record["error"] = {
            "stage": _current_stage(record),
            "code": exc.code,
            "message": str(exc),
        }
    if store is not None:
        store.persist(record)
    return record


def resume_from_edited_ocr(store: RunStore, run_id: str, edited_text: str,
                           transport: Transport | None = None) -> dict:
    """Create a child run whose OCR output is the human-edited text and
    re-execute every downstream stage under the parent's config. The parent
    record is never touched."""
    parent = store.load(run_id)
    if not edited_text or not edited_text.strip():
        raise EmptyEditedText("edited text is empty")
    stages = {s["stage"] for s in parent["stages"]}
    if "Ocr" not in stages:
        raise ConfigInvalid(f"run {run_id} never completed its OCR stage")
    config = PipelineConfig.from_dict(parent["config"])

    record = _new_record(parent["input_image"]["filename"],
                         parent["input_image"]["sha256"], config,
                         parent_run=run_id)
    ctx = _RunContext(record=record, config=config, store=store,
                      transport=transport)
    store.persist(record)

    tokens = tuple(ocr.OcrToken(text=w, confidence=1.0)
                   for w in edited_text.split())
    edited = ocr.OcrResult(
        full_text=edited_text,
        tokens=tokens,
        language_used=config.ocr.languages,
        engine_id="human-edited",
        mean_confidence=1.0 if tokens else 0.0,
    )
    try:
        ctx.add_stage("Ocr", _ocr_payload(edited), 0, provider_id="human-edited")
        _execute_downstream(ctx, edited)
        record["status"] = "Succeeded"
    except DocpipeError as exc:
        record["status"] = "Failed"
        record["error"] = {
            "stage": _current_stage(record),
            "code": exc.code,
            "message": str(exc),
        }
    store.persist(record)
    return record


def _current_stage(record: dict) -> str:
    done = [s["stage"] for s in record["stages"]]
    for stage in STAGE_ORDER:
        if stage not in done:
            return stage
    return STAGE_ORDER[-1]


def _timed(ctx: _RunContext, stage: str, action, payload_fn,
           provider_id=None):
    started = time.perf_counter()
    result = action()
    duration_ms = int((time.perf_counter() - started) * 1000)
    pid = provider_id(result) if callable(provider_id) else provider_id
    ctx.add_stage(stage, payload_fn(result), duration_ms, pid)
    return result


def _execute_downstream(ctx: _RunContext, ocr_result: ocr.OcrResult) -> None:
    config = ctx.config

    # Correction
    if config.correction is not None:
        corrected = _timed(ctx, "Correction",
                           lambda: ocr.correct_text(ocr_result, config.correction),
                           lambda r: {
                               "full_text": r.full_text,
                               "changed_tokens": sum(
                                   1 for a, b in zip(ocr_result.tokens, r.tokens)
                                   if a.text != b.text),
                           })
        working = corrected
    else:
        ctx.add_stage("Correction", None, 0)
        working = ocr_result

    # Preprocess
    processed = _timed(
        ctx, "Preprocess",
        lambda: textprep.preprocess(working.full_text, config.preprocess),
        lambda p: {
            "normalized_full": p.normalized_full,
            "sentences": [
                {"text": s.text, "start": s.start_offset, "end": s.end_offset,
                 "script": s.script.value}
                for s in p.sentences
            ],
            "tokens_per_sentence": [
                [t.normalized for t in sent] for sent in p.tokens_per_sentence
            ],
        })

    # Classify
    if config.classifier_model_path:
        model = classifier.load_model(config.classifier_model_path)
        flat_tokens = [t.normalized for sent in processed.tokens_per_sentence
                       for t in sent]
        _timed(ctx, "Classify",
               lambda: classifier.predict(model, flat_tokens),
               lambda r: {"label": r[0], "scores": r[1]})
    else:
        ctx.add_stage("Classify", None, 0)

    # Summarize
    request = summarizer.SummaryRequest(
        sentences=processed.sentences,
        language=config.preprocess.language,
        target_ratio=config.summary_ratio,
    )
    if config.summary_mode == "remote":
        summary = _timed(
            ctx, "Summarize",
            lambda: summarizer.summarize_remote(request, config.summary_provider,
                                                ctx.transport),
            _summary_payload, provider_id=lambda s: s.provider_id)
    else:
        summary = _timed(ctx, "Summarize",
                         lambda: summarizer.summarize_extractive(request),
                         _summary_payload, provider_id=lambda s: s.provider_id)

    # Translate
    if config.translation_target is not None:
        if config.translation_provider == "identity":
            provider: Any = translator.IDENTITY
        else:
            provider = config.translate_provider
        t_request = translator.TranslationRequest(
            text=summary.text,
            source=config.preprocess.language,
            target=config.translation_target,
        )
        _timed(ctx, "Translate",
               lambda: translator.translate(t_request, provider, ctx.transport),
               lambda r: {"text": r.text, "source": r.source.code,
                          "target": r.target.code, "provider_id": r.provider_id},
               provider_id=lambda r: r.provider_id)
    else:
        ctx.add_stage("Translate", None, 0)

    # Enrich
    def run_enrich() -> dict:
        dates = enrich.extract_dates(working.full_text)
        payload: dict[str, Any] = {
            "dates": [
                {"surface": d.surface, "start": d.start, "end": d.end,
                 "pattern_id": d.pattern_id}
                for d in dates
            ],
            "sentiment": None,
        }
        if config.sentiment_model_path:
            inner = classifier.load_model(config.sentiment_model_path)
            model = enrich.SentimentModel(inner=inner)
            label, confidence = enrich.predict_sentiment(model, working.full_text)
            payload["sentiment"] = {"label": label, "confidence": confidence}
        return payload

    _timed(ctx, "Enrich", run_enrich, lambda p: p)


def _summary_payload(summary: summarizer.Summary) -> dict:
    return {
        "text": summary.text,
        "method": summary.method.value,
        "provider_id": summary.provider_id,
        "compression_ratio": summary.compression_ratio,
        "selected_indices": list(summary.selected_indices)
        if summary.selected_indices is not None else None,
    }
