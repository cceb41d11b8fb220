"""Pluggable machine-translation gateway: engines, persistent cache, batching, retry.

No real MT model lives here. Engines are a one-method interface plus a set of
deterministic mocks (identity, word-table dictionary, uppercase) so the whole
pipeline runs offline. The dictionary engine passes unknown words through
untouched, which conveniently mimics the untranslated-residue problem the
script tools clean up afterwards.

The cache is a JSON Lines file keyed by (engine_id, source_lang, target_lang,
source_text); it is loaded into memory when opened and appended to on every
store, so entries survive process restarts.
"""

from __future__ import annotations

import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .errors import (
    CacheIOError,
    ConfigValidationError,
    EngineError,
    EngineUnavailableError,
    TransientEngineError,
)

CacheKey = tuple[str, str, str, str]  # engine_id, source_lang, target_lang, source_text

DEFAULT_MAX_ATTEMPTS = 3
DEFAULT_BACKOFF_BASE = 1.0  # seconds; doubles per retry
DEFAULT_BATCH_SIZE = 32
DEFAULT_MAX_WORKERS = 4


@dataclass(frozen=True)
class TranslationRequest:
    texts: tuple[str, ...]
    source_lang: str
    target_lang: str
    engine_id: str

    def __post_init__(self) -> None:
        if not self.texts:
            raise ValueError("request must carry at least one text")
        if not self.source_lang or not self.target_lang:
            raise ValueError("language codes must be non-empty")


class TranslationEngine:
    """Interface: a parallel string-list translator. Subclasses override translate()."""

    engine_id = "base"

    def translate(self, texts: Sequence[str], source_lang: str, target_lang: str) -> list[str]:
        raise NotImplementedError


class IdentityEngine(TranslationEngine):
    engine_id = "identity"

    def translate(self, texts, source_lang, target_lang):
        return list(texts)


class UppercaseEngine(TranslationEngine):
    """Uppercases input; handy for spotting what actually went through."""

    engine_id = "uppercase"

    def translate(self, texts, source_lang, target_lang):
        return [t.upper() for t in texts]


class DictionaryEngine(TranslationEngine):
    """Word-by-word translation via a lookup table; unknown words pass through.

    Tokens are whitespace-split and rejoined with single spaces, so this is a
    mock, not a segmenter.
    """

    engine_id = "dictionary"

    def __init__(self, table: Mapping[str, str]):
        self.table = dict(table)

    @classmethod
    def from_file(cls, path: str | Path) -> "DictionaryEngine":
        """Two-column tab-separated file: source term, target term."""
        table = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated columns")
            table[parts[0]] = parts[1]
        return cls(table)

    def translate(self, texts, source_lang, target_lang):
        return [" ".join(self.table.get(w, w) for w in t.split()) for t in texts]


class CountingEngine(TranslationEngine):
    """Wraps another engine and counts invocations; for cache/retry tests."""

    def __init__(self, inner: TranslationEngine):
        self.inner = inner
        self.engine_id = inner.engine_id
        self.calls = 0
        self.texts_translated = 0

    def translate(self, texts, source_lang, target_lang):
        self.calls += 1
        self.texts_translated += len(texts)
        return self.inner.translate(texts, source_lang, target_lang)


def build_engine(engine_id: str) -> TranslationEngine:
    """Resolve an engine id from configuration.

    Known ids: ``identity``, ``uppercase``, ``dictionary:<table-path>``.
    """
    if engine_id == "identity":
        return IdentityEngine()
    if engine_id == "uppercase":
        return UppercaseEngine()
    if engine_id.startswith("dictionary:"):
        return DictionaryEngine.from_file(engine_id.split(":", 1)[1])
    raise ConfigValidationError(f"unknown engine id {engine_id!r}", field="engine_id")


class TranslationCache:
    """Persistent translation store backed by an append-only JSON Lines file.

    Each line carries engine_id, source_lang, target_lang, source_text, value
    (plus a timestamp). The whole file is loaded on open; later lines win on
    duplicate keys. Safe for concurrent lookup/store; values for a key are
    deterministic per engine, so last-writer-wins is harmless.
    """

    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._entries: dict[CacheKey, str] = {}
        self._lock = threading.Lock()
        self._handle = None
        if self._path is not None and self._path.exists():
            try:
                with self._path.open("r", encoding="utf-8") as fh:
                    for line in fh:
                        if not line.strip():
                            continue
                        rec = json.loads(line)
                        key = (
                            rec["engine_id"],
                            rec["source_lang"],
                            rec["target_lang"],
                            rec["source_text"],
                        )
                        self._entries[key] = rec["value"]
            except (OSError, json.JSONDecodeError, KeyError) as exc:
                raise CacheIOError(f"cannot load cache {self._path}: {exc}") from exc

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(self, key: CacheKey) -> str | None:
        with self._lock:
            return self._entries.get(key)

    def store(self, key: CacheKey, value: str) -> None:
        with self._lock:
            self._entries[key] = value
            if self._path is None:
                return
            try:
                if self._handle is None:
                    self._handle = self._path.open("a", encoding="utf-8")
                record = {
                    "engine_id": key[0],
                    "source_lang": key[1],
                    "target_lang": key[2],
                    "source_text": key[3],
                    "value": value,
                    "timestamp": time.time(),
                }
                self._handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                self._handle.flush()
            except OSError as exc:
                raise CacheIOError(f"cannot write cache {self._path}: {exc}") from exc

    def close(self) -> None:
        with self._lock:
            if self._handle is not None:
                self._handle.close()
                self._handle = None

    def __enter__(self) -> "TranslationCache":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()


def _call_with_retry(
    engine: TranslationEngine,
    texts: list[str],
    source_lang: str,
    target_lang: str,
    max_attempts: int,
    backoff_base: float,
    sleep: Callable[[float], None],
) -> list[str]:
    last: TransientEngineError | None = None
    for attempt in range(1, max_attempts + 1):
        try:
            out = engine.translate(texts, source_lang, target_lang)
        except TransientEngineError as exc:
            last = exc
            if attempt < max_attempts:
                sleep(backoff_base * 2 ** (attempt - 1))
            continue
        if len(out) != len(texts):
            raise EngineError(
                f"engine {engine.engine_id!r} returned {len(out)} texts for {len(texts)} inputs"
            )
        return out
    raise EngineUnavailableError(
        f"engine {engine.engine_id!r} still failing after {max_attempts} attempts"
    ) from last


def translate_batch(
    request: TranslationRequest,
    engine: TranslationEngine,
    cache: TranslationCache | None = None,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    max_workers: int = DEFAULT_MAX_WORKERS,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    backoff_base: float = DEFAULT_BACKOFF_BASE,
    sleep: Callable[[float], None] = time.sleep,
) -> list[str]:
    """Translate a batch, consulting the cache per text before touching the engine.

    The output list is parallel to the input (same length, same order).
    Duplicate texts are sent to the engine once. Cache misses are chunked into
    engine calls of at most ``batch_size`` texts, with up to ``max_workers``
    in flight; the merge preserves input order, so results are independent of
    the parallelism degree. Transient engine failures are retried with
    exponential backoff.
    """
    texts = list(request.texts)
    results: list[str | None] = [None] * len(texts)
    pending: dict[str, list[int]] = {}
    for i, text in enumerate(texts):
        key = (request.engine_id, request.source_lang, request.target_lang, text)
        hit = cache.lookup(key) if cache is not None else None
        if hit is not None:
            results[i] = hit
        else:
            pending.setdefault(text, []).append(i)

    if pending:
        unique = list(pending)
        chunks = [unique[j : j + batch_size] for j in range(0, len(unique), batch_size)]

        def run(chunk: list[str]) -> list[str]:
            return _call_with_retry(
                engine,
                chunk,
                request.source_lang,
                request.target_lang,
                max_attempts,
                backoff_base,
                sleep,
            )

        if max_workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                outputs = list(pool.map(run, chunks))
        else:
            outputs = [run(chunk) for chunk in chunks]

        for chunk, out in zip(chunks, outputs):
            for source, value in zip(chunk, out):
                if cache is not None:
                    cache.store(
                        (request.engine_id, request.source_lang, request.target_lang, source),
                        value,
                    )
                for i in pending[source]:
                    results[i] = value

    return results  # type: ignore[return-value]  # every slot is filled above
