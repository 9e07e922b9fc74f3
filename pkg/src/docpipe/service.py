"""HTTP API over the pipeline: upload-and-run, run inspection, and the
edit-OCR-and-rerun flow, plus optional static hosting for the web UI.

Every error response is ``{"error": {"code": ..., "message": ...}}`` where
the code is the stable domain error name.
"""

from __future__ import annotations

import errno
import json
import tempfile
import threading
from pathlib import Path

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.datastructures import UploadFile

from . import __version__, ocr, pipeline
from .errors import (
    BindFailure,
    ConfigInvalid,
    CorruptRecord,
    DocpipeError,
    EmptyEditedText,
    MissingImage,
    UnknownRun,
)

_STATUS_BY_CODE = {
    "MissingImage": 400,
    "ConfigInvalid": 400,
    "EmptyEditedText": 400,
    "SameLanguagePair": 400,
    "EmptyInput": 400,
    "UnknownRun": 404,
    "CorruptRecord": 500,
    "EngineUnavailable": 503,
    "EngineTimeout": 504,
    "ProviderTimeout": 504,
    "ProviderRejected": 502,
    "MalformedProviderResponse": 502,
    "MissingApiKey": 400,
}


def _error_response(exc: DocpipeError) -> JSONResponse:
    status = _STATUS_BY_CODE.get(exc.code, 500)
    return JSONResponse(status_code=status,
                        content={"error": {"code": exc.code, "message": str(exc)}})


def create_app(config: pipeline.PipelineConfig, store: pipeline.RunStore,
               static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="docpipe", version=__version__)

    @app.exception_handler(DocpipeError)
    async def handle_domain_error(request: Request, exc: DocpipeError):
        return _error_response(exc)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/api/languages")
    def languages() -> list[dict]:
        tags = ocr.list_supported_languages(config.ocr)
        return [{"code": t.code, "display_name": t.display_name,
                 "script": t.script.value} for t in tags]

    @app.post("/api/runs")
    async def create_run(request: Request):
        form = await request.form()
        image = form.get("image")
        if not isinstance(image, UploadFile):
            return _error_response(MissingImage("multipart field 'image' is required"))
        run_config = config
        options = form.get("options")
        if isinstance(options, str) and options.strip():
            try:
                overrides = json.loads(options)
            except json.JSONDecodeError as exc:
                return _error_response(ConfigInvalid(f"options is not JSON: {exc}"))
            merged = _merge_config(config.raw, overrides)
            run_config = pipeline.PipelineConfig.from_dict(merged)

        name = Path(image.filename or "upload.png").name or "upload.png"
        payload = await image.read()
        with tempfile.TemporaryDirectory(prefix="docpipe-upload-") as tmp:
            image_path = Path(tmp) / name
            image_path.write_bytes(payload)
            sidecar = form.get("sidecar")
            if isinstance(sidecar, str) and sidecar:
                # Ground-truth runs on uploaded images need their sidecar
                # text to travel with the upload.
                image_path.with_suffix(".txt").write_text(sidecar, encoding="utf-8")
            record = pipeline.run_pipeline(image_path, run_config, store)
        return record

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str) -> dict:
        return store.load(run_id)

    @app.get("/api/runs")
    def get_runs(limit: int = 20, offset: int = 0) -> dict:
        return {"runs": store.list_runs(limit=limit, offset=offset)}

    @app.post("/api/runs/{run_id}/ocr-text")
    async def edit_ocr_text(run_id: str, request: Request) -> dict:
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            raise EmptyEditedText(f"body is not JSON: {exc}") from exc
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise EmptyEditedText('body must be {"text": string}')
        return pipeline.resume_from_edited_ocr(store, run_id, body["text"])

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")
    return app


def _merge_config(base: dict, overrides: dict) -> dict:
    """Shallow-merge per top-level section; nested dicts merge one level."""
    if not isinstance(overrides, dict):
        raise ConfigInvalid("options must be a JSON object")
    merged = dict(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            section = dict(merged[key])
            section.update(value)
            merged[key] = section
        else:
            merged[key] = value
    return merged


def serve(config: pipeline.PipelineConfig, bind_address: str,
          store: pipeline.RunStore,
          static_dir: str | Path | None = None) -> None:
    """Run the HTTP service until interrupted; in-flight requests finish
    before shutdown (uvicorn's graceful drain on SIGINT/SIGTERM)."""
    host, _, port_text = bind_address.rpartition(":")
    if not host or not port_text.isdigit():
        raise BindFailure(f"bind address must be host:port, got {bind_address!r}")
    app = create_app(config, store, static_dir)
    server = uvicorn.Server(uvicorn.Config(app, host=host, port=int(port_text),
                                           log_level="info"))
    try:
        server.run()
    except OSError as exc:
        if exc.errno in (errno.EADDRINUSE, errno.EADDRNOTAVAIL, errno.EACCES):
            raise BindFailure(f"cannot bind {bind_address}: {exc}") from exc
        raise


class BackgroundServer:
    """Test helper: run the app in a daemon thread on an ephemeral port."""

    def __init__(self, config: pipeline.PipelineConfig, store: pipeline.RunStore,
                 host: str = "127.0.0.1", port: int = 0,
                 static_dir: str | Path | None = None):
        app = create_app(config, store, static_dir)
        self._server = uvicorn.Server(
            uvicorn.Config(app, host=host, port=port, log_level="warning"))
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> str:
        self._thread.start()
        while not self._server.started:
            if not self._thread.is_alive():
                raise BindFailure("server thread died during startup")
            threading.Event().wait(0.01)
        server = self._server.servers[0]
        sock = server.sockets[0]
        host, port = sock.getsockname()[:2]
        return f"http://{host}:{port}"

    def __exit__(self, *exc_info) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
