"""Chat-completion backend speaking a plain HTTP JSON protocol.

Each sample is a separate request ``{model, messages, temperature,
max_tokens}``; the reply's first choice is read from ``message.content``
(or ``text``). Requests run concurrently and each is cached under a hash of
endpoint, model, messages, sampling parameters and sample index.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

from ..cache import ResponseCache, request_key
from ..errors import BackendUnavailable, MissingCredentials
from ..prompts import PromptBundle
from .base import TextBackend

log = logging.getLogger(__name__)

DEFAULT_KEY_ENV = "TSLLM_API_KEY"
BACKOFF = (1.0, 2.0, 4.0)


def _retryable(exc: Exception) -> bool:
    if isinstance(exc, urllib.error.HTTPError):
        return exc.code == 429 or 500 <= exc.code < 600
    return isinstance(exc, (urllib.error.URLError, TimeoutError, ConnectionError, OSError))


def first_text(reply: dict) -> str:
    """Text of the first choice in a chat or plain completion reply."""
    try:
        choice = reply["choices"][0]
    except (KeyError, IndexError, TypeError):
        raise BackendUnavailable("reply has no choices") from None
    msg = choice.get("message")
    if isinstance(msg, dict) and isinstance(msg.get("content"), str):
        return msg["content"]
    if isinstance(choice.get("text"), str):
        return choice["text"]
    raise BackendUnavailable("first choice carries no text")


def default_max_tokens(bundle: PromptBundle) -> int:
    per_step = 40 if bundle.expected_form == "paraphrase" else 12
    return 16 if bundle.expected_form == "integer" else 20 + per_step * bundle.horizon


class ChatCompletionBackend(TextBackend):
    def __init__(self, endpoint: str, model: str, *, api_key_env: str = DEFAULT_KEY_ENV,
                 max_tokens: Optional[int] = None, timeout: float = 60.0,
                 max_concurrency: int = 4, cache: Optional[ResponseCache] = None,
                 sleep: Callable[[float], None] = time.sleep):
        key = os.environ.get(api_key_env)
        if not key:
            raise MissingCredentials(f"set the {api_key_env} environment variable")
        self.endpoint = endpoint
        self.model = model
        self.id = f"chat:{model}"
        self.max_tokens = max_tokens
        self.timeout = timeout
        self.max_concurrency = max(1, int(max_concurrency))
        self.cache = cache
        self.network_calls = 0
        self._key = key
        self._sleep = sleep
        self._count_lock = threading.Lock()

    def _post(self, payload: dict) -> dict:
        body = json.dumps(payload).encode("utf-8")
        headers = {"Content-Type": "application/json", "Authorization": f"Bearer {self._key}"}
        last: Optional[Exception] = None
        for attempt in range(len(BACKOFF) + 1):
            if attempt:
                self._sleep(BACKOFF[attempt - 1])
            req = urllib.request.Request(self.endpoint, data=body, headers=headers, method="POST")
            try:
                with self._count_lock:
                    self.network_calls += 1
                with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                    return json.loads(resp.read().decode("utf-8"))
            except Exception as exc:  # noqa: BLE001 - classified below
                if not _retryable(exc):
                    raise BackendUnavailable(f"request failed: {exc}") from exc
                last = exc
                log.warning("attempt %d against %s failed: %s", attempt + 1, self.endpoint, exc)
        raise BackendUnavailable(f"giving up after {len(BACKOFF) + 1} attempts: {last}") from last

    def _one(self, bundle: PromptBundle, index: int, temperature: float,
             seed: Optional[int]) -> str:
        max_tokens = self.max_tokens or default_max_tokens(bundle)
        messages = bundle.messages()
        params = {"temperature": temperature, "max_tokens": max_tokens, "seed": seed}
        key = request_key(self.endpoint, self.model, messages, params, index)
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return first_text(hit["response"])
        payload = {"model": self.model, "messages": messages, "temperature": temperature,
                   "max_tokens": max_tokens}
        reply = self._post(payload)
        text = first_text(reply)
        if self.cache is not None:
            self.cache.put(key, {"request": payload, "response": reply})
        return text

    def complete(self, bundle: PromptBundle, n: int, temperature: float = 0.7,
                 seed: Optional[int] = None) -> list[str]:
        with ThreadPoolExecutor(max_workers=min(self.max_concurrency, n)) as pool:
            futures = [pool.submit(self._one, bundle, i, temperature, seed) for i in range(n)]
            return [f.result() for f in futures]
