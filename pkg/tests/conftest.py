"""Shared fixtures: a stub OCR engine executable, a programmable stub
provider HTTP server, and ground-truth document fixtures."""

from __future__ import annotations

import json
import os
import stat
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from docpipe import ocr
from docpipe.languages import get_language

STUB_ENGINE = r'''#!/usr/bin/env python3
"""Stub OCR engine speaking the external-engine CLI contract."""
import os
import sys
import time

args = sys.argv[1:]
if "--version" in args:
    print("stub-engine 1.0.0")
    sys.exit(0)
if "--list-langs" in args:
    print("List of available languages (3):")
    for code in os.environ.get("STUB_LANGS", "eng").split("+"):
        print(code)
    sys.exit(0)

image, sink = args[0], args[1]
lang = args[args.index("-l") + 1] if "-l" in args else "eng"
if os.environ.get("STUB_SLEEP"):
    time.sleep(float(os.environ["STUB_SLEEP"]))
if os.environ.get("STUB_FAIL_LANG") and os.environ["STUB_FAIL_LANG"] in lang:
    sys.stderr.write("Error opening data file tessdata/%s.traineddata\n"
                     % os.environ["STUB_FAIL_LANG"])
    sys.exit(1)

tsv_sidecar = image + ".tsv"
if os.path.exists(tsv_sidecar):
    sys.stdout.write(open(tsv_sidecar, encoding="utf-8").read())
    sys.exit(0)

header = "level\tpage_num\tblock_num\tpar_num\tline_num\tword_num\tleft\ttop\twidth\theight\tconf\ttext"
rows = [
    header,
    "1\t1\t0\t0\t0\t0\t0\t0\t100\t50\t-1\t",
    "5\t1\t1\t1\t1\t1\t5\t5\t40\t10\t96.5\thello",
    "5\t1\t1\t1\t1\t2\t50\t5\t40\t10\t91.0\tworld",
]
sys.stdout.write("\n".join(rows) + "\n")
'''


@pytest.fixture
def stub_engine(tmp_path: Path) -> Path:
    path = tmp_path / "stub-engine"
    path.write_text(STUB_ENGINE, encoding="utf-8")
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return path


def make_ground_truth_doc(directory: Path, name: str, text: str) -> Path:
    """A tiny valid PNG plus its sidecar text file."""
    from PIL import Image

    image_path = directory / f"{name}.png"
    Image.new("RGB", (24, 24), "white").save(image_path)
    image_path.with_suffix(".txt").write_text(text, encoding="utf-8")
    return image_path


@pytest.fixture
def ground_truth_doc(tmp_path: Path):
    def factory(text: str, name: str = "doc") -> Path:
        return make_ground_truth_doc(tmp_path, name, text)
    return factory


def ground_truth_config(*codes: str) -> ocr.OcrConfig:
    codes = codes or ("eng",)
    return ocr.OcrConfig(languages=tuple(get_language(c) for c in codes),
                         engine=ocr.Engine.GROUND_TRUTH)


class StubProvider:
    """Tiny HTTP server whose behavior is a list of planned responses.

    Each plan entry is (status, body_dict_or_text); the final entry repeats
    for any further requests. Requests (path, parsed JSON body) are recorded.
    """

    def __init__(self):
        self.plan: list[tuple[int, object]] = [(200, {"summary": "S"})]
        self.requests: list[tuple[str, dict]] = []
        self._lock = threading.Lock()

        provider = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):  # noqa: N802 (http.server API)
                length = int(self.headers.get("Content-Length", 0))
                raw = self.rfile.read(length).decode("utf-8")
                try:
                    body = json.loads(raw)
                except json.JSONDecodeError:
                    body = {"_raw": raw}
                with provider._lock:
                    provider.requests.append((self.path, body))
                    index = min(len(provider.requests) - 1, len(provider.plan) - 1)
                status, payload = provider.plan[index]
                text = payload if isinstance(payload, str) else json.dumps(payload)
                data = text.encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args):  # silence test output
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}/v1"

    def __enter__(self) -> "StubProvider":
        self.thread.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def stub_provider():
    with StubProvider() as provider:
        yield provider


class RecordingTransport:
    """Injectable transport that records (and optionally forbids) calls."""

    def __init__(self, forbid: bool = False):
        self.calls: list[tuple[str, dict]] = []
        self.forbid = forbid

    def __call__(self, url: str, body: dict, api_key: str, timeout: float):
        self.calls.append((url, body))
        if self.forbid:
            raise AssertionError(f"unexpected network call to {url}")
        return 200, json.dumps({"summary": "stub", "translation": "stub"})


@pytest.fixture(autouse=True)
def _clean_offline_env(monkeypatch):
    # DOCPIPE_OFFLINE in the outer environment must not leak into tests
    # that exercise remote modes.
    monkeypatch.delenv("DOCPIPE_OFFLINE", raising=False)
