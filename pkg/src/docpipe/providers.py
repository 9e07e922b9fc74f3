"""HTTP provider plumbing shared by the summarizer and translator clients.

The wire contract is a vendor-neutral JSON POST; vendor specifics live
behind per-vendor request adapters at deployment time. The transport is an
injectable callable so tests can stub it and offline runs can prove that no
network call ever happens.
"""

from __future__ import annotations

import json
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Callable

from .errors import (
    MalformedProviderResponse,
    MissingApiKey,
    ProviderRejected,
    ProviderTimeout,
)

# transport(url, body_dict, api_key, timeout) -> (status_code, response_text)
Transport = Callable[[str, dict, str, float], tuple[int, str]]


@dataclass(frozen=True)
class ProviderConfig:
    endpoint_url: str
    api_key_env_var: str
    timeout: float = 10.0
    max_retries: int = 3
    retry_backoff_base: float = 0.5

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not 0 <= self.max_retries <= 5:
            raise ValueError("max_retries must be in [0, 5]")


def urllib_transport(url: str, body: dict, api_key: str, timeout: float
                     ) -> tuple[int, str]:
    """Default transport: a plain JSON POST over urllib."""
    data = json.dumps(body, ensure_ascii=False).encode("utf-8")
    request = urllib.request.Request(
        url, data=data,
        headers={"Content-Type": "application/json",
                 "Authorization": f"Bearer {api_key}"},
        method="POST")
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            return response.status, response.read().decode("utf-8")
    except urllib.error.HTTPError as exc:
        return exc.code, exc.read().decode("utf-8", errors="replace")
    except (urllib.error.URLError, TimeoutError, OSError) as exc:
        raise ProviderTimeout(f"request to {url} failed: {exc}") from exc


def require_api_key(config: ProviderConfig) -> str:
    key = os.environ.get(config.api_key_env_var, "")
    if not key:
        raise MissingApiKey(
            f"environment variable {config.api_key_env_var} is not set")
    return key


def post_with_retries(config: ProviderConfig, body: dict,
                      transport: Transport | None = None) -> dict:
    """POST the body, retrying timeouts and 5xx responses with exponential
    backoff (base * 2^attempt, at most max_retries retries). 4xx responses
    fail immediately with ProviderRejected."""
    api_key = require_api_key(config)
    send = transport if transport is not None else urllib_transport

    last_error: str = ""
    for attempt in range(config.max_retries + 1):
        if attempt:
            time.sleep(config.retry_backoff_base * 2 ** (attempt - 1))
        try:
            status, text = send(config.endpoint_url, body, api_key, config.timeout)
        except ProviderTimeout as exc:
            last_error = str(exc)
            continue
        if 400 <= status < 500:
            raise ProviderRejected(f"provider returned {status}: {text[:200]}")
        if status >= 500:
            last_error = f"provider returned {status}"
            continue
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedProviderResponse(
                f"provider response is not JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise MalformedProviderResponse("provider response is not an object")
        return payload
    raise ProviderTimeout(
        f"no successful response after {config.max_retries} retries: {last_error}")
