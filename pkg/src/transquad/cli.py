"""Command-line interface exposing every pipeline stage.

Subcommands: validate, stats, filter, translate, postprocess, realign,
evaluate, pipeline. Stage commands read paths from the JSON config (global
--config) and accept --input/--output overrides; their defaults chain, so

    transquad --config cfg.json translate
    transquad --config cfg.json postprocess
    transquad --config cfg.json realign

is equivalent to one ``pipeline`` run (modulo the merged rejection log).

Exit codes: 0 success, 1 data or validation failure, 2 configuration or I/O
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from .corpus import (
    Corpus,
    collapse_answers,
    compute_stats,
    load_corpus,
    save_corpus,
    validate_spans,
)
from .errors import ConfigError, ConfigValidationError, PipelineError, TransquadError
from .evaluation import TableEmbeddingProvider, evaluate_predictions, load_predictions
from .filtering import filter_corpus
from .pipeline import (
    PipelineConfig,
    load_config,
    make_candidates,
    read_candidates,
    run_pipeline,
    write_candidates,
)
from .script_tools import build_transliterator, localize_digits, transliterate_residuals
from .translation import TranslationCache, TranslationRequest, build_engine, translate_batch
from .alignment import align_corpus

logger = logging.getLogger("transquad")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transquad",
        description="Build translated SQuAD-format QA datasets and evaluate predictions.",
    )
    parser.add_argument("--config", metavar="PATH", help="pipeline config file (JSON)")
    parser.add_argument("--verbose", action="store_true", help="enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check answer spans against contexts")
    p.add_argument("input", nargs="?", help="SQuAD JSON file (default: config input_path)")
    p.add_argument("--split", default="train", choices=("train", "test"))

    p = sub.add_parser("stats", help="corpus totals and unique counts")
    p.add_argument("input", nargs="?", help="SQuAD JSON file (default: config input_path)")
    p.add_argument("--split", default="train", choices=("train", "test"))
    p.add_argument("--output", help="also write the report to this path")

    p = sub.add_parser("filter", help="apply exclusion list and content heuristics")
    p.add_argument("--input", help="override config input_path")
    p.add_argument("--output", help="filtered corpus path (default: <output_path>.filtered.json)")
    p.add_argument("--rejection-log", help="override config rejection_log_path")

    p = sub.add_parser("translate", help="collapse, filter, and translate all fields")
    p.add_argument("--input", help="override config input_path")
    p.add_argument("--output", help="candidates JSONL (default: <output_path>.candidates.jsonl)")
    p.add_argument("--rejection-log", help="override config rejection_log_path")

    p = sub.add_parser("postprocess", help="transliterate Latin residue and localize digits")
    p.add_argument("--input", help="candidates JSONL (default: <output_path>.candidates.jsonl)")
    p.add_argument(
        "--output", help="candidates JSONL (default: <output_path>.postprocessed.jsonl)"
    )

    p = sub.add_parser("realign", help="recompute answer starts and emit the final corpus")
    p.add_argument(
        "--input", help="candidates JSONL (default: <output_path>.postprocessed.jsonl)"
    )
    p.add_argument("--output", help="override config output_path")
    p.add_argument("--rejection-log", help="override config rejection_log_path")

    p = sub.add_parser("evaluate", help="score predictions with EM, F1, and BERTScore")
    p.add_argument("--gold", required=True, help="gold corpus (SQuAD JSON, collapsed answers)")
    p.add_argument("--predictions", required=True, help="JSON object mapping qid to answer")
    p.add_argument("--embeddings", help="token embedding table for BERTScore")
    p.add_argument("--split", default="test", choices=("train", "test"))
    p.add_argument("--output", help="also write the report to this path")

    sub.add_parser("pipeline", help="run every stage end to end")
    return parser


def _require_config(args: argparse.Namespace) -> PipelineConfig:
    if not args.config:
        raise ConfigValidationError("this command needs --config", field="config")
    return load_config(args.config)


def _derived(cfg: PipelineConfig, suffix: str) -> str:
    return str(Path(cfg.output_path).with_suffix(suffix))


def _cmd_validate(args) -> int:
    if args.input:
        corpus = load_corpus(args.input, args.split)
    else:
        cfg = _require_config(args)
        corpus = load_corpus(cfg.input_path, cfg.split)
    report = validate_spans(corpus)
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    return 0 if report.ok else 1


def _cmd_stats(args) -> int:
    if args.input:
        corpus = load_corpus(args.input, args.split)
    else:
        cfg = _require_config(args)
        corpus = load_corpus(cfg.input_path, cfg.split)
    payload = json.dumps(compute_stats(corpus).to_dict(), indent=2)
    print(payload)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
    return 0


def _cmd_filter(args) -> int:
    cfg = _require_config(args)
    corpus = load_corpus(args.input or cfg.input_path, cfg.split)
    kept, log = filter_corpus(corpus, cfg.filter)
    save_corpus(kept, args.output or _derived(cfg, ".filtered.json"))
    log.write(args.rejection_log or cfg.rejection_log_path)
    print(f"kept {len(kept)} of {len(corpus)} records ({len(log)} rejected)")
    return 0


def _cmd_translate(args) -> int:
    cfg = _require_config(args)
    corpus = load_corpus(args.input or cfg.input_path, cfg.split)
    collapsed = Corpus(
        split=corpus.split,
        records=tuple(collapse_answers(rec) for rec in corpus.records),
        version=corpus.version,
    )
    kept, log = filter_corpus(collapsed, cfg.filter)
    engine = build_engine(cfg.engine_id)
    with TranslationCache(cfg.cache_path) as cache:
        def translate(texts: list[str]) -> list[str]:
            request = TranslationRequest(
                texts=tuple(texts),
                source_lang=cfg.source_lang,
                target_lang=cfg.target_lang,
                engine_id=engine.engine_id,
            )
            return translate_batch(request, engine, cache, max_workers=cfg.parallelism)

        contexts = translate([r.context for r in kept.records]) if kept.records else []
        questions = translate([r.question for r in kept.records]) if kept.records else []
        answers = translate([r.answers[0].text for r in kept.records]) if kept.records else []
    candidates = make_candidates(kept.records, contexts, questions, answers)
    out = args.output or _derived(cfg, ".candidates.jsonl")
    write_candidates(candidates, out, split=cfg.split)
    log.write(args.rejection_log or cfg.rejection_log_path)
    print(f"translated {len(candidates)} records -> {out} ({len(log)} rejected pre-filter)")
    return 0


def _cmd_postprocess(args) -> int:
    cfg = _require_config(args)
    candidates, split = read_candidates(args.input or _derived(cfg, ".candidates.jsonl"))
    transliterator = build_transliterator(cfg.transliterator_id)

    def fix(text: str) -> str:
        return localize_digits(transliterate_residuals(text, transliterator))

    fixed = [
        dataclasses.replace(
            cand,
            translated_context=fix(cand.translated_context),
            translated_question=fix(cand.translated_question),
            translated_answer=fix(cand.translated_answer),
        )
        for cand in candidates
    ]
    out = args.output or _derived(cfg, ".postprocessed.jsonl")
    write_candidates(fixed, out, split=split)
    print(f"postprocessed {len(fixed)} records -> {out}")
    return 0


def _cmd_realign(args) -> int:
    cfg = _require_config(args)
    candidates, split = read_candidates(args.input or _derived(cfg, ".postprocessed.jsonl"))
    corpus, log = align_corpus(candidates, split=split)
    save_corpus(corpus, args.output or cfg.output_path)
    log.write(args.rejection_log or cfg.rejection_log_path)
    stats_payload = json.dumps(compute_stats(corpus).to_dict(), indent=2) + "\n"
    Path(cfg.stats_path).write_text(stats_payload, encoding="utf-8")
    print(f"aligned {len(corpus)} of {len(candidates)} candidates ({len(log)} rejected)")
    return 0


def _cmd_evaluate(args) -> int:
    gold = load_corpus(args.gold, args.split)
    predictions = load_predictions(args.predictions)
    embedder = TableEmbeddingProvider.from_file(args.embeddings) if args.embeddings else None
    report = evaluate_predictions(gold, predictions, embedder)
    payload = report.to_json()
    print(payload)
    if args.output:
        Path(args.output).write_text(payload + "\n", encoding="utf-8")
    return 0


def _cmd_pipeline(args) -> int:
    cfg = _require_config(args)
    summary = run_pipeline(cfg)
    print(summary.format_table())
    print(f"summary written to {cfg.summary_path}")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "stats": _cmd_stats,
    "filter": _cmd_filter,
    "translate": _cmd_translate,
    "postprocess": _cmd_postprocess,
    "realign": _cmd_realign,
    "evaluate": _cmd_evaluate,
    "pipeline": _cmd_pipeline,
}


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, PipelineError):
        cause = exc.__cause__
        if isinstance(cause, (ConfigError, OSError)):
            return 2
        return 1
    if isinstance(exc, (ConfigError, OSError)):
        return 2
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except (TransquadError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
