"""Append-only JSON-lines cache of rank results.

One record per line; the last record for a key wins. Damaged lines (for
example a truncated final write) are skipped with a warning.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from .descent2 import RankResult
from .ellcurve import Curve, Point, on_curve

log = logging.getLogger(__name__)

ENV_VAR = "GEOPROG_CACHE"
DEFAULT_PATH = "cache.jsonl"
MAX_RANK = 8

BX = "Bx"
MORDELL = "Mordell"
FAMILIES = (BX, MORDELL)


def default_path() -> Path:
    return Path(os.environ.get(ENV_VAR, DEFAULT_PATH))


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass
class CacheRecord:
    family: str
    A: str
    B: str
    lower: int
    upper: Optional[int]
    status: str
    witnesses: list[list[str]] = field(default_factory=list)
    budget: str = ""
    timestamp: str = field(default_factory=_now)
    # Optional extras so a cache hit reproduces the full RankResult.
    selmer: Optional[list[int]] = None
    budget_used: int = 0

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.family, self.A, self.B)

    def curve(self) -> Curve:
        # Bx: y^2 = x^3 + A x^2 + B x.  Mordell: y^2 = x^3 + B (A unused, "0").
        if self.family == BX:
            return Curve(int(self.A), int(self.B), 0)
        return Curve(0, 0, int(self.B))

    def check(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not 0 <= self.lower <= (self.upper if self.upper is not None else MAX_RANK) <= MAX_RANK:
            raise ValueError(f"insane bounds {self.lower}, {self.upper}")
        if not self.witnesses:
            return
        c = self.curve()
        for w in self.witnesses:
            if not on_curve(c, Point.affine(w[0], w[1])):
                raise ValueError(f"witness {w} is not on {c}")

    def to_line(self) -> str:
        return json.dumps(self.__dict__, separators=(",", ":"))

    def value_fields(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != "timestamp"}

    @classmethod
    def from_obj(cls, obj: dict) -> "CacheRecord":
        rec = cls(**obj)
        rec.check()
        return rec

    @classmethod
    def from_rank(cls, family: str, A: int, B: int, res: RankResult, budget: str) -> "CacheRecord":
        return cls(
            family,
            str(A),
            str(B),
            res.lower,
            res.upper,
            res.status,
            [P.to_json() for P in res.witnesses],
            budget,
            selmer=list(res.selmer) if res.selmer else None,
            budget_used=res.budget_used,
        )

    def to_rank(self) -> RankResult:
        wit = [Point.affine(x, y) for x, y in self.witnesses]
        sel = tuple(self.selmer) if self.selmer else None
        return RankResult(self.lower, self.upper, self.status, wit, self.budget_used, sel)


class Store:
    """JSONL cache. Appends are serialized by a lock; reads load the file once."""

    def __init__(self, path: Optional[Path | str] = None):
        self.path = Path(path) if path is not None else default_path()
        self._lock = threading.Lock()
        self._index: dict[tuple[str, str, str], CacheRecord] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = CacheRecord.from_obj(json.loads(line))
                except (ValueError, TypeError, KeyError) as exc:
                    log.warning("%s:%d: skipping bad record (%s)", self.path, lineno, exc)
                    continue
                self._index[rec.key] = rec

    def put(self, rec: CacheRecord) -> None:
        rec.check()
        line = rec.to_line() + "\n"
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a+b") as fh:
                # A truncated last line would swallow the next record; start fresh.
                fh.seek(0, os.SEEK_END)
                if fh.tell() > 0:
                    fh.seek(-1, os.SEEK_END)
                    if fh.read(1) != b"\n":
                        fh.write(b"\n")
                fh.write(line.encode("utf-8"))
            self._index[rec.key] = rec

    def get(self, family: str, A, B) -> Optional[CacheRecord]:
        return self._index.get((family, str(A), str(B)))

    def scan(self, family: Optional[str] = None) -> Iterator[CacheRecord]:
        for key in sorted(self._index, key=lambda k: (k[0], int(k[1]), int(k[2]))):
            if family is None or key[0] == family:
                yield self._index[key]

    def __len__(self) -> int:
        return len(self._index)
