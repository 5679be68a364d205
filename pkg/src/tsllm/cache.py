"""On-disk cache of remote completions, one JSON file per request."""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Optional, Union

from .errors import CacheCorrupt


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def sha256_text(s: str) -> str:
    return hashlib.sha256(s.encode("utf-8")).hexdigest()


def request_key(endpoint: str, model: str, messages: list, params: dict, index: int) -> str:
    """Hash of everything that determines one sampled completion."""
    return sha256_text(canonical_json({"endpoint": endpoint, "model": model,
                                       "messages": messages, "params": params,
                                       "index": int(index)}))


class ResponseCache:
    """Content-addressed store of request/response pairs.

    Every entry records a digest of its payload; a file whose payload no
    longer matches raises :class:`CacheCorrupt` on read. Hits and misses
    are counted for the experiment record.
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        with self._lock:
            path = self._path(key)
            if not path.exists():
                self.misses += 1
                return None
            try:
                entry = json.loads(path.read_text(encoding="utf-8"))
                payload = entry["payload"]
                digest = entry["digest"]
            except (ValueError, KeyError, TypeError) as exc:
                raise CacheCorrupt(f"{path.name}: unreadable entry ({exc})") from None
            if entry.get("key") != key or sha256_text(canonical_json(payload)) != digest:
                raise CacheCorrupt(f"{path.name}: digest mismatch")
            self.hits += 1
            return payload

    def put(self, key: str, payload: dict) -> None:
        entry = {"key": key, "payload": payload, "digest": sha256_text(canonical_json(payload))}
        with self._lock:
            tmp = self._path(key).with_suffix(".tmp")
            tmp.write_text(json.dumps(entry, sort_keys=True, indent=1, ensure_ascii=False),
                           encoding="utf-8")
            os.replace(tmp, self._path(key))

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses}
