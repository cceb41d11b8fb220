"""QA evaluation: normalization, Exact Match, token F1, BERTScore core, reporting.

Normalization case-folds Basic-Latin letters, strips all Unicode punctuation
(including the Devanagari danda "।" and double danda "॥"), and splits on
whitespace. No stemming, no stop words, no article stripping - article
removal is an English-ism with no Devanagari counterpart. EM and F1 both
score normalized tokens; F1 uses multiset overlap, the standard SQuAD
definition.

The BERTScore core is model-free: it takes precomputed per-token embedding
vectors and does greedy max-cosine matching with uniform token weights (no
idf, no baseline rescaling). Embeddings come from any EmbeddingProvider; a
table-backed provider is included for offline use.
"""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from ._kernels import greedy_match
from ._text import ascii_casefold
from .corpus import Corpus


def normalize(text: str) -> list[str]:
    """Case-fold Basic-Latin letters, drop punctuation, split on whitespace."""
    folded = ascii_casefold(text)
    cleaned = "".join(ch for ch in folded if not unicodedata.category(ch).startswith("P"))
    return cleaned.split()


def exact_match(gold: str, pred: str) -> int:
    """1 iff the normalized token sequences are identical, else 0."""
    return int(normalize(gold) == normalize(pred))


def token_f1(gold: str, pred: str) -> float:
    """Harmonic mean of precision/recall over the normalized token multisets.

    1.0 when both token lists are empty; 0.0 when exactly one is empty or
    nothing overlaps. Symmetric in its arguments.
    """
    gold_tokens = normalize(gold)
    pred_tokens = normalize(pred)
    if not gold_tokens and not pred_tokens:
        return 1.0
    if not gold_tokens or not pred_tokens:
        return 0.0
    overlap = sum((Counter(gold_tokens) & Counter(pred_tokens)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def bert_score(
    gold_vecs: Sequence[Sequence[float]] | np.ndarray,
    pred_vecs: Sequence[Sequence[float]] | np.ndarray,
) -> tuple[float, float, float]:
    """(precision, recall, f) of greedy max-cosine matching between vector lists.

    recall averages, over gold vectors, the best cosine against any pred
    vector; precision swaps the roles; f is their harmonic mean (0 when
    P + R = 0). Token weights are uniform.
    """
    gold = np.asarray(gold_vecs, dtype=np.float64)
    pred = np.asarray(pred_vecs, dtype=np.float64)
    if gold.size == 0 or pred.size == 0:
        raise ValueError("bert_score requires non-empty vector lists on both sides")
    if gold.ndim != 2 or pred.ndim != 2:
        raise ValueError("vector lists must be rectangular (one fixed dimension per vector)")
    if gold.shape[1] != pred.shape[1]:
        raise ValueError(
            f"embedding dimension mismatch: gold {gold.shape[1]} vs pred {pred.shape[1]}"
        )
    precision, recall = greedy_match(gold, pred)
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f


class EmbeddingProvider:
    """Interface: one vector per token, parallel order, fixed dimension."""

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        raise NotImplementedError


class TableEmbeddingProvider(EmbeddingProvider):
    """Embeddings from a fixed token -> vector table (for tests and offline runs)."""

    def __init__(self, table: Mapping[str, Sequence[float]]):
        if not table:
            raise ValueError("embedding table must not be empty")
        self.table: dict[str, np.ndarray] = {}
        dim = None
        for token, vec in table.items():
            arr = np.asarray(vec, dtype=np.float64)
            if dim is None:
                dim = arr.shape[0] if arr.ndim == 1 else -1
            if arr.ndim != 1 or arr.shape[0] != dim:
                raise ValueError(f"vector for {token!r} breaks the fixed dimension {dim}")
            if not np.any(arr):
                raise ValueError(f"vector for {token!r} is all zeros")
            self.table[token] = arr
        self.dim = dim

    @classmethod
    def from_file(cls, path: str | Path) -> "TableEmbeddingProvider":
        """One line per token: the token, then its space-separated components."""
        table = {}
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected a token and at least one number")
            table[parts[0]] = [float(x) for x in parts[1:]]
        return cls(table)

    def embed(self, tokens):
        try:
            return np.stack([self.table[t] for t in tokens])
        except KeyError as exc:
            raise LookupError(f"no embedding for token {exc.args[0]!r}") from None


@dataclass(frozen=True)
class QuestionScore:
    em: int
    f1: float
    bert_f: float | None = None


@dataclass
class EvalReport:
    per_question: dict[str, QuestionScore] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)
    mean_em: float | None = None
    mean_f1: float | None = None
    mean_bert_f: float | None = None

    def to_dict(self) -> dict:
        return {
            "aggregate": {
                "scored": len(self.per_question),
                "exact_match": self.mean_em,
                "f1": self.mean_f1,
                "bert_f": self.mean_bert_f,
            },
            "per_question": {
                qid: {"em": s.em, "f1": s.f1, "bert_f": s.bert_f}
                for qid, s in self.per_question.items()
            },
            "skipped": list(self.skipped),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2)


def _bert_f_for_pair(gold: str, pred: str, embedder: EmbeddingProvider) -> float:
    gold_tokens = normalize(gold)
    pred_tokens = normalize(pred)
    # Mirror token_f1's edge policy so the report stays total.
    if not gold_tokens and not pred_tokens:
        return 1.0
    if not gold_tokens or not pred_tokens:
        return 0.0
    _, _, f = bert_score(embedder.embed(gold_tokens), embedder.embed(pred_tokens))
    return f


def evaluate_predictions(
    gold: Corpus,
    predictions: Mapping[str, str],
    embedder: EmbeddingProvider | None = None,
) -> EvalReport:
    """Score every gold question that has a prediction; list the rest as skipped.

    Gold records must carry exactly one answer (run collapse_answers first).
    Aggregates are plain means over the scored questions; skipped questions
    are excluded, not zero-filled, and reported so the choice is auditable.
    BERTScore is omitted entirely when no embedder is supplied.
    """
    report = EvalReport()
    for rec in gold.records:
        if len(rec.answers) != 1:
            raise ValueError(
                f"gold record {rec.qid!r} has {len(rec.answers)} answers; "
                "collapse answers before evaluating"
            )
        if rec.qid not in predictions:
            report.skipped.append(rec.qid)
            continue
        gold_text = rec.answers[0].text
        pred_text = predictions[rec.qid]
        bert_f = _bert_f_for_pair(gold_text, pred_text, embedder) if embedder else None
        report.per_question[rec.qid] = QuestionScore(
            em=exact_match(gold_text, pred_text),
            f1=token_f1(gold_text, pred_text),
            bert_f=bert_f,
        )
    scored = report.per_question.values()
    if scored:
        report.mean_em = sum(s.em for s in scored) / len(scored)
        report.mean_f1 = sum(s.f1 for s in scored) / len(scored)
        if embedder is not None:
            report.mean_bert_f = sum(s.bert_f for s in scored) / len(scored)
    return report


def load_predictions(path: str | Path) -> dict[str, str]:
    """Standard SQuAD prediction format: one JSON object mapping qid -> answer."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise ValueError(f"{path}: predictions must be a JSON object mapping qid to string")
    return data
