"""Pre-translation content filtering with an auditable rejection log.

Two mechanisms stand in for the source dataset's manual cleanup: a plain-text
exclusion list (one qid or article title per line, ``#`` comments) for
explicit removals, and a letter-script ratio heuristic that flags contexts
dominated by non-Latin letters (language samples, phonetics tables, ...).

Every removal, here and in later stages, lands in a RejectionLog entry so
that kept + rejected always accounts for the whole input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from ._text import is_basic_latin_letter, is_letter
from .corpus import Corpus
from .errors import ConfigError, ConfigValidationError

STAGE_PRE_FILTER = "pre-filter"
STAGE_ALIGNMENT = "alignment"
STAGE_POST_CHECK = "post-check"
STAGES = (STAGE_PRE_FILTER, STAGE_ALIGNMENT, STAGE_POST_CHECK)

REASON_MANUAL_EXCLUSION = "manual-exclusion"
REASON_NON_LATIN = "non-latin-content"
REASON_TOO_SHORT = "too-short"
REASON_ANSWER_NOT_FOUND = "answer-not-found"
REASON_EMPTY_AFTER_STRIP = "empty-after-strip"

# The documented reason catalog; RejectionEntry refuses anything else.
REASON_CATALOG = frozenset(
    {
        REASON_MANUAL_EXCLUSION,
        REASON_NON_LATIN,
        REASON_TOO_SHORT,
        REASON_ANSWER_NOT_FOUND,
        REASON_EMPTY_AFTER_STRIP,
    }
)


@dataclass(frozen=True)
class FilterConfig:
    non_latin_letter_ratio_threshold: float = 0.05
    exclusion_list_path: str | None = None
    min_context_length: int = 1

    def __post_init__(self) -> None:
        t = self.non_latin_letter_ratio_threshold
        if not 0.0 <= t <= 1.0:
            raise ConfigValidationError(
                f"non_latin_letter_ratio_threshold must be in [0, 1], got {t}",
                field="non_latin_letter_ratio_threshold",
            )
        if self.min_context_length < 0:
            raise ConfigValidationError(
                f"min_context_length must be >= 0, got {self.min_context_length}",
                field="min_context_length",
            )


@dataclass(frozen=True)
class RejectionEntry:
    qid: str
    stage: str
    reason: str
    detail: str | None = None

    def __post_init__(self) -> None:
        if self.stage not in STAGES:
            raise ValueError(f"unknown rejection stage {self.stage!r}")
        if self.reason not in REASON_CATALOG:
            raise ValueError(f"reason {self.reason!r} is not in the reason catalog")

    def to_dict(self) -> dict[str, str | None]:
        return {"qid": self.qid, "stage": self.stage, "reason": self.reason, "detail": self.detail}


@dataclass
class RejectionLog:
    entries: list[RejectionEntry] = field(default_factory=list)

    def append(self, entry: RejectionEntry) -> None:
        self.entries.append(entry)

    def extend(self, other: RejectionLog | Iterable[RejectionEntry]) -> None:
        self.entries.extend(other.entries if isinstance(other, RejectionLog) else other)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RejectionEntry]:
        return iter(self.entries)

    def counts_by_reason(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for entry in self.entries:
            counts[entry.reason] = counts.get(entry.reason, 0) + 1
        return counts

    def to_jsonl(self) -> str:
        """One JSON object per line: qid, stage, reason, detail."""
        return "".join(json.dumps(e.to_dict(), ensure_ascii=False) + "\n" for e in self.entries)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl(), encoding="utf-8")


def non_latin_letter_ratio(text: str) -> float:
    """Fraction of letters that fall outside Basic-Latin A-Z/a-z.

    Digits, punctuation and whitespace count on neither side; a text with no
    letters at all scores 0.0.
    """
    letters = 0
    non_latin = 0
    for ch in text:
        if is_letter(ch):
            letters += 1
            if not is_basic_latin_letter(ch):
                non_latin += 1
    return non_latin / letters if letters else 0.0


def load_exclusion_list(path: str | Path) -> set[str]:
    """Read one qid or title per line; blank lines and ``#`` comments ignored."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read exclusion list {path}: {exc}") from exc
    out: set[str] = set()
    for line in lines:
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.add(stripped)
    return out


def apply_exclusion_list(corpus: Corpus, qids_or_titles: set[str]) -> tuple[Corpus, RejectionLog]:
    """Drop every record whose qid or owning title is listed."""
    log = RejectionLog()
    kept = []
    for rec in corpus.records:
        if rec.qid in qids_or_titles:
            log.append(
                RejectionEntry(rec.qid, STAGE_PRE_FILTER, REASON_MANUAL_EXCLUSION, "qid listed")
            )
        elif rec.title in qids_or_titles:
            log.append(
                RejectionEntry(
                    rec.qid, STAGE_PRE_FILTER, REASON_MANUAL_EXCLUSION, f"title {rec.title!r} listed"
                )
            )
        else:
            kept.append(rec)
    return replace(corpus, records=tuple(kept)), log


def filter_corpus(corpus: Corpus, cfg: FilterConfig) -> tuple[Corpus, RejectionLog]:
    """Exclusion list first, then script-ratio and minimum-length checks.

    One rejection entry per dropped record; kept + rejected equals the input
    count. Deterministic for a fixed (corpus, config) pair.
    """
    excluded = load_exclusion_list(cfg.exclusion_list_path) if cfg.exclusion_list_path else set()
    log = RejectionLog()
    kept = []
    for rec in corpus.records:
        if rec.qid in excluded:
            log.append(
                RejectionEntry(rec.qid, STAGE_PRE_FILTER, REASON_MANUAL_EXCLUSION, "qid listed")
            )
            continue
        if rec.title in excluded:
            log.append(
                RejectionEntry(
                    rec.qid, STAGE_PRE_FILTER, REASON_MANUAL_EXCLUSION, f"title {rec.title!r} listed"
                )
            )
            continue
        ratio = non_latin_letter_ratio(rec.context)
        if ratio > cfg.non_latin_letter_ratio_threshold:
            log.append(
                RejectionEntry(
                    rec.qid,
                    STAGE_PRE_FILTER,
                    REASON_NON_LATIN,
                    f"ratio {ratio:.4f} > threshold {cfg.non_latin_letter_ratio_threshold}",
                )
            )
            continue
        if len(rec.context) < cfg.min_context_length:
            log.append(
                RejectionEntry(
                    rec.qid,
                    STAGE_PRE_FILTER,
                    REASON_TOO_SHORT,
                    f"context length {len(rec.context)} < {cfg.min_context_length}",
                )
            )
            continue
        kept.append(rec)
    return replace(corpus, records=tuple(kept)), log
