"""Transcript container with canonical event serialisation and a 64-bit hash.

Events are flat tagged dicts ({"t": "MK"|"BK"|"GH"|"GG", ...}) serialised as
compact JSON with sorted keys, one line per event. The transcript hash is an
FNV-1a 64-bit digest over those canonical lines, maintained incrementally as
events are appended, and printed as 16 hex digits.
"""

from __future__ import annotations

import json
from typing import Any

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes, h: int = _FNV_OFFSET) -> int:
    prime = _FNV_PRIME
    mask = _MASK64
    for byte in data:
        h = ((h ^ byte) * prime) & mask
    return h


def canonical_event_bytes(event: dict) -> bytes:
    return json.dumps(event, sort_keys=True, separators=(",", ":")).encode() + b"\n"


class Transcript:
    """Header + ordered event list for one game, hashable and serialisable."""

    def __init__(self, header: dict[str, Any]):
        self.header = header
        self.events: list[dict] = []
        self._hash = _FNV_OFFSET

    def append(self, event: dict) -> None:
        self.events.append(event)
        self._hash = fnv1a64(canonical_event_bytes(event), self._hash)

    @property
    def hash_hex(self) -> str:
        return f"{self._hash:016x}"

    def recompute_hash_hex(self) -> str:
        """Hash rebuilt from scratch over the stored events."""
        h = _FNV_OFFSET
        for ev in self.events:
            h = fnv1a64(canonical_event_bytes(ev), h)
        return f"{h:016x}"

    def to_dict(self) -> dict:
        return {"header": self.header, "events": self.events, "hash": self.hash_hex}

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        t = cls(dict(data.get("header", {})))
        for ev in data.get("events", []):
            t.append(ev)
        t.stored_hash = data.get("hash")
        return t

    @classmethod
    def load(cls, path: str) -> "Transcript":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
