"""Append-only JSONL result cache.

Entries are keyed by (operation id, canonical input hash, params hash);
hashes are built from float.hex renderings so a hit is byte-identical to
recomputation at the same tolerance settings. Corrupt lines are skipped
and recomputed (crash-safe, no locking needed for the single-writer CLI).
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import Any

from .params import SpaceParams
from .vectors import FiniteVector

CACHE_FILENAME = "cache.jsonl"


def _hash(parts: list[str]) -> str:
    return hashlib.sha256("\x1f".join(parts).encode()).hexdigest()


def vector_hash(v: FiniteVector) -> str:
    parts = [str(p) + ":" + float(c).hex() for p, c in zip(v.positions, v.values)]
    return _hash([v.side] + parts)


def params_hash(params: SpaceParams, **settings: Any) -> str:
    parts = [float(params.p).hex(), float(params.gamma).hex()]
    for key in sorted(settings):
        val = settings[key]
        parts.append(f"{key}={float(val).hex() if isinstance(val, float) else val}")
    return _hash(parts)


def cache_key(op: str, input_hash: str, param_hash: str) -> str:
    return _hash([op, input_hash, param_hash])


class ResultCache:
    """Single-file JSONL cache under the output directory."""

    def __init__(self, directory: str):
        self.path = os.path.join(directory, CACHE_FILENAME)
        self._entries: dict[str, dict] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, "r", encoding="utf-8") as fh:
            for line in fh:
                try:
                    entry = json.loads(line)
                    self._entries[entry["key"]] = entry
                except (json.JSONDecodeError, KeyError, TypeError):
                    continue  # ignore-and-recompute

    def get(self, key: str) -> dict | None:
        return self._entries.get(key)

    def put(self, key: str, payload: dict) -> None:
        entry = dict(payload)
        entry["key"] = key
        self._entries[key] = entry
        os.makedirs(os.path.dirname(self.path) or ".", exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
