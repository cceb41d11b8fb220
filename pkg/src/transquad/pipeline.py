"""End-to-end dataset construction: parse, collapse, filter, translate, fix scripts, realign.

Stage order: parse -> collapse_answers -> filter_corpus -> translate (context,
question, and answer as three independent batches) -> transliterate_residuals
-> localize_digits -> realign -> serialize. Collapsing first means only one
answer per record is ever translated; translating the three fields
independently is what makes the answer-not-found rejection meaningful.

Outputs are written atomically (temp file + rename), so an aborted run never
leaves a truncated dataset behind. With deterministic engines a fixed config
produces byte-identical corpus/log/stats across runs, whatever the
parallelism.

Stage commands exchange intermediate state as "candidates" JSON Lines: one
object per record with qid, title, question, context, answer, and the
answer's relative position in the source context.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path
from typing import Any, Mapping

from .alignment import AlignmentCandidate, align_corpus
from .corpus import (
    Corpus,
    SPLITS,
    collapse_answers,
    compute_stats,
    parse_corpus,
    serialize_corpus,
    validate_spans,
)
from .errors import (
    ConfigParseError,
    ConfigValidationError,
    InvalidCorpusError,
    PipelineError,
    TransquadError,
)
from .filtering import FilterConfig, RejectionLog, filter_corpus
from .script_tools import (
    Transliterator,
    build_transliterator,
    localize_digits,
    transliterate_residuals,
)
from .translation import (
    TranslationCache,
    TranslationEngine,
    TranslationRequest,
    build_engine,
    translate_batch,
)

logger = logging.getLogger(__name__)

_FILTER_KEYS = {"non_latin_letter_ratio_threshold", "exclusion_list_path", "min_context_length"}


@dataclass
class PipelineConfig:
    input_path: str
    output_path: str
    rejection_log_path: str
    stats_path: str
    source_lang: str
    target_lang: str
    engine_id: str
    transliterator_id: str
    cache_path: str
    filter: FilterConfig = field(default_factory=FilterConfig)
    parallelism: int = 4
    split: str = "train"

    def __post_init__(self) -> None:
        if self.parallelism < 1:
            raise ConfigValidationError(
                f"parallelism must be >= 1, got {self.parallelism}", field="parallelism"
            )
        if self.split not in SPLITS:
            raise ConfigValidationError(
                f"split must be one of {SPLITS}, got {self.split!r}", field="split"
            )
        paths = [
            self.input_path,
            self.output_path,
            self.rejection_log_path,
            self.stats_path,
            self.cache_path,
        ]
        if self.filter.exclusion_list_path:
            paths.append(self.filter.exclusion_list_path)
        if len(set(paths)) != len(paths):
            raise ConfigValidationError("all configured paths must be distinct", field="paths")

    @property
    def summary_path(self) -> str:
        return str(Path(self.output_path).with_suffix(".summary.json"))


_REQUIRED_KEYS = {
    "input_path",
    "output_path",
    "rejection_log_path",
    "stats_path",
    "source_lang",
    "target_lang",
    "engine_id",
    "transliterator_id",
    "cache_path",
}
_CONFIG_KEYS = {f.name for f in dataclass_fields(PipelineConfig)}


def config_from_dict(raw: Mapping[str, Any]) -> PipelineConfig:
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigValidationError(f"unknown config key {key!r}", field=key)
    missing = _REQUIRED_KEYS - set(raw)
    if missing:
        key = sorted(missing)[0]
        raise ConfigValidationError(f"missing required config key {key!r}", field=key)
    kwargs = dict(raw)
    filter_raw = kwargs.pop("filter", {})
    if not isinstance(filter_raw, Mapping):
        raise ConfigValidationError("'filter' must be an object", field="filter")
    unknown_filter = set(filter_raw) - _FILTER_KEYS
    if unknown_filter:
        key = sorted(unknown_filter)[0]
        raise ConfigValidationError(f"unknown filter key {key!r}", field=f"filter.{key}")
    kwargs["filter"] = FilterConfig(**filter_raw)
    return PipelineConfig(**kwargs)


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON config file, apply defaults, and validate every key."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"config {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigParseError(f"config {path} must hold a JSON object")
    return config_from_dict(raw)


@dataclass
class PipelineRunSummary:
    input_count: int
    filtered_count: int  # records that survived pre-filtering
    translated_count: int
    aligned_count: int
    rejected_by_reason: dict[str, int]
    wall_time: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "input_count": self.input_count,
            "filtered_count": self.filtered_count,
            "translated_count": self.translated_count,
            "aligned_count": self.aligned_count,
            "rejected_by_reason": dict(sorted(self.rejected_by_reason.items())),
            "wall_time": self.wall_time,
        }

    def format_table(self) -> str:
        lines = [
            f"{'input records':<24}{self.input_count:>8}",
            f"{'after pre-filter':<24}{self.filtered_count:>8}",
            f"{'translated':<24}{self.translated_count:>8}",
            f"{'aligned (kept)':<24}{self.aligned_count:>8}",
        ]
        for reason, count in sorted(self.rejected_by_reason.items()):
            lines.append(f"{'rejected: ' + reason:<24}{count:>8}")
        lines.append(f"{'wall time (s)':<24}{self.wall_time:>8.2f}")
        return "\n".join(lines)


@dataclass
class PipelineResult:
    corpus: Corpus
    rejection_log: RejectionLog
    input_count: int
    filtered_count: int
    translated_count: int


def _postprocess(text: str, transliterator: Transliterator) -> str:
    # Transliteration first: digit localization only creates Devanagari
    # evidence, never Latin tokens, so this order is the stable one.
    return localize_digits(transliterate_residuals(text, transliterator))


def make_candidates(
    source_records,
    contexts: list[str],
    questions: list[str],
    answers: list[str],
) -> list[AlignmentCandidate]:
    """Pair translated fields with each source record's relative answer position."""
    out = []
    for rec, ctx, question, answer in zip(source_records, contexts, questions, answers):
        # Clamp: the relative position is only a tie-break hint, so a source
        # span that is itself out of bounds must not abort the run.
        relative = rec.answers[0].start / len(rec.context) if rec.context else 0.0
        out.append(
            AlignmentCandidate(
                qid=rec.qid,
                translated_context=ctx,
                translated_question=question,
                translated_answer=answer,
                original_relative_position=min(1.0, max(0.0, relative)),
                title=rec.title,
            )
        )
    return out


def run_corpus_pipeline(
    corpus: Corpus,
    engine: TranslationEngine,
    transliterator: Transliterator,
    filter_cfg: FilterConfig,
    *,
    source_lang: str,
    target_lang: str,
    cache: TranslationCache | None = None,
    parallelism: int = 4,
) -> PipelineResult:
    """The in-memory pipeline core: everything between parse and serialize."""
    input_count = len(corpus)
    collapsed = Corpus(
        split=corpus.split,
        records=tuple(collapse_answers(rec) for rec in corpus.records),
        version=corpus.version,
    )
    kept, log = filter_corpus(collapsed, filter_cfg)

    if kept.records:
        def translate(texts: list[str]) -> list[str]:
            request = TranslationRequest(
                texts=tuple(texts),
                source_lang=source_lang,
                target_lang=target_lang,
                engine_id=engine.engine_id,
            )
            return translate_batch(request, engine, cache, max_workers=parallelism)

        contexts = translate([rec.context for rec in kept.records])
        questions = translate([rec.question for rec in kept.records])
        answers = translate([rec.answers[0].text for rec in kept.records])
        contexts = [_postprocess(t, transliterator) for t in contexts]
        questions = [_postprocess(t, transliterator) for t in questions]
        answers = [_postprocess(t, transliterator) for t in answers]
        candidates = make_candidates(kept.records, contexts, questions, answers)
    else:
        candidates = []

    aligned, alignment_log = align_corpus(candidates, split=corpus.split)
    log.extend(alignment_log)
    return PipelineResult(
        corpus=aligned,
        rejection_log=log,
        input_count=input_count,
        filtered_count=len(kept),
        translated_count=len(kept),
    )


def _atomic_write(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run_pipeline(
    cfg: PipelineConfig,
    engine: TranslationEngine | None = None,
    transliterator: Transliterator | None = None,
) -> PipelineRunSummary:
    """Run the full pipeline per config and write corpus, log, stats, and summary.

    ``engine``/``transliterator`` default to whatever the config ids resolve
    to; passing instances directly is the hook for instrumented runs. Any
    stage failure raises PipelineError naming the stage; nothing is written
    until the final corpus has been validated.
    """
    started = time.perf_counter()
    stage = "setup"
    cache = None
    try:
        if engine is None:
            engine = build_engine(cfg.engine_id)
        if transliterator is None:
            transliterator = build_transliterator(cfg.transliterator_id)

        stage = "parse"
        raw = Path(cfg.input_path).read_bytes()
        corpus = parse_corpus(raw, cfg.split)

        stage = "translate"
        cache = TranslationCache(cfg.cache_path)
        result = run_corpus_pipeline(
            corpus,
            engine,
            transliterator,
            cfg.filter,
            source_lang=cfg.source_lang,
            target_lang=cfg.target_lang,
            cache=cache,
            parallelism=cfg.parallelism,
        )

        stage = "post-check"
        report = validate_spans(result.corpus)
        if not report.ok:
            raise InvalidCorpusError(
                f"pipeline produced {len(report.violations)} invalid span(s); this is a bug"
            )

        stage = "write"
        _atomic_write(cfg.output_path, serialize_corpus(result.corpus))
        result.rejection_log.write(cfg.rejection_log_path)
        stats = compute_stats(result.corpus)
        _atomic_write(
            cfg.stats_path, (json.dumps(stats.to_dict(), indent=2) + "\n").encode("utf-8")
        )
        summary = PipelineRunSummary(
            input_count=result.input_count,
            filtered_count=result.filtered_count,
            translated_count=result.translated_count,
            aligned_count=len(result.corpus),
            rejected_by_reason=result.rejection_log.counts_by_reason(),
            wall_time=time.perf_counter() - started,
        )
        _atomic_write(
            cfg.summary_path, (json.dumps(summary.to_dict(), indent=2) + "\n").encode("utf-8")
        )
        return summary
    except PipelineError:
        raise
    except (TransquadError, OSError, ValueError) as exc:
        raise PipelineError(stage, str(exc)) from exc
    finally:
        if cache is not None:
            cache.close()


# -- candidates JSONL: the interchange format between stage subcommands --


def write_candidates(candidates: list[AlignmentCandidate], path: str | Path, split: str) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for cand in candidates:
            fh.write(
                json.dumps(
                    {
                        "qid": cand.qid,
                        "title": cand.title,
                        "split": split,
                        "question": cand.translated_question,
                        "context": cand.translated_context,
                        "answer": cand.translated_answer,
                        "original_relative_position": cand.original_relative_position,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def read_candidates(path: str | Path) -> tuple[list[AlignmentCandidate], str]:
    candidates = []
    split = "train"
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            split = rec.get("split", split)
            candidates.append(
                AlignmentCandidate(
                    qid=rec["qid"],
                    translated_context=rec["context"],
                    translated_question=rec["question"],
                    translated_answer=rec["answer"],
                    original_relative_position=rec["original_relative_position"],
                    title=rec.get("title", ""),
                )
            )
    return candidates, split
