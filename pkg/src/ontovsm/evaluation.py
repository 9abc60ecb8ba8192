"""TREC-style batch runs and effectiveness measures (P@k, AP/MAP, 11-point curve)."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .kb import KBError
from .search import QueryError, search

log = logging.getLogger(__name__)

RECALL_LEVELS = tuple(i / 10 for i in range(11))


class EvalError(ValueError):
    pass


# --- file formats -------------------------------------------------------------

def parse_qrels(text: str, path=None) -> dict:
    """``qid 0 docno rel`` lines -> {qid: {docno: rel}}; rel > 0 counts as relevant."""
    qrels: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 4:
            raise EvalError(f"{path or '<qrels>'}:{lineno}: expected 'qid 0 docno rel'")
        qid, _, docno, rel = fields
        try:
            qrels.setdefault(qid, {})[docno] = 1 if int(rel) > 0 else 0
        except ValueError:
            raise EvalError(f"{path or '<qrels>'}:{lineno}: relevance must be an integer") from None
    return qrels


def load_qrels(path) -> dict:
    return parse_qrels(Path(path).read_text(encoding="utf-8"), path)


def parse_topics(text: str, path=None) -> list:
    """``qid<TAB>query text`` lines -> [(qid, text)] in file order."""
    topics = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        qid, sep, query = line.partition("\t")
        if not sep or not qid.strip():
            raise EvalError(f"{path or '<topics>'}:{lineno}: expected 'qid<TAB>query'")
        topics.append((qid.strip(), query.strip()))
    return topics


def load_topics(path) -> list:
    return parse_topics(Path(path).read_text(encoding="utf-8"), path)


def parse_run(text: str, path=None) -> dict:
    """``qid Q0 docno rank score tag`` -> {qid: [(docno, rank, score)]} sorted by rank."""
    run: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 6:
            raise EvalError(f"{path or '<run>'}:{lineno}: expected 'qid Q0 docno rank score tag'")
        qid, _, docno, rank, score, _ = fields
        try:
            run.setdefault(qid, []).append((docno, int(rank), float(score)))
        except ValueError:
            raise EvalError(f"{path or '<run>'}:{lineno}: bad rank or score") from None
    for entries in run.values():
        entries.sort(key=lambda e: e[1])
    return run


def load_run(path) -> dict:
    return parse_run(Path(path).read_text(encoding="utf-8"), path)


def format_run(run: dict, tag: str) -> str:
    lines = []
    for qid, entries in run.items():
        for docno, rank, score in entries:
            lines.append(f"{qid} Q0 {docno} {rank} {score:.6f} {tag}")
    return "".join(line + "\n" for line in lines)


# --- measures -------------------------------------------------------------------

def _ranked(run: dict, qid: str) -> list:
    return [docno for docno, _, _ in run.get(qid, [])]


def _relevant(qrels: dict, qid: str) -> set:
    if qid not in qrels:
        raise EvalError(f"query {qid!r} has no judgments")
    return {d for d, rel in qrels[qid].items() if rel > 0}


def precision_at_k(run: dict, qrels: dict, qid: str, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    rel = _relevant(qrels, qid)
    return sum(1 for d in _ranked(run, qid)[:k] if d in rel) / k


def average_precision(run: dict, qrels: dict, qid: str) -> float:
    rel = _relevant(qrels, qid)
    if not rel:
        raise EvalError(f"query {qid!r} has no relevant documents")
    hits, total = 0, 0.0
    for rank, d in enumerate(_ranked(run, qid), 1):
        if d in rel:
            hits += 1
            total += hits / rank
    return total / len(rel)


def interpolated_pr_curve(run: dict, qrels: dict, qid: str) -> list:
    """Precision at recall 0.0, 0.1, ..., 1.0 (max precision at any recall >= r)."""
    rel = _relevant(qrels, qid)
    if not rel:
        raise EvalError(f"query {qid!r} has no relevant documents")
    points = []
    hits = 0
    for rank, d in enumerate(_ranked(run, qid), 1):
        if d in rel:
            hits += 1
            points.append((hits / len(rel), hits / rank))
    curve = []
    for r in RECALL_LEVELS:
        curve.append(max((p for rec, p in points if rec >= r - 1e-12), default=0.0))
    return curve


def evaluated_queries(qrels: dict) -> tuple:
    """(qids with at least one relevant doc, number skipped)."""
    if not qrels:
        raise EvalError("no relevance judgments")
    good = sorted(q for q, docs in qrels.items() if any(r > 0 for r in docs.values()))
    return good, len(qrels) - len(good)


def mean_average_precision(run: dict, qrels: dict) -> float:
    qids, skipped = evaluated_queries(qrels)
    if skipped:
        log.warning("%d queries without relevant documents excluded from MAP", skipped)
    if not qids:
        raise EvalError("no query has a relevant document")
    return sum(average_precision(run, qrels, q) for q in qids) / len(qids)


@dataclass
class EvalReport:
    k: int
    per_query: dict = field(default_factory=dict)  # qid -> (P@k, AP)
    curve: list = field(default_factory=list)  # mean interpolated precision
    skipped: int = 0

    @property
    def map(self) -> float:
        return sum(ap for _, ap in self.per_query.values()) / len(self.per_query)

    @property
    def precision(self) -> float:
        return sum(p for p, _ in self.per_query.values()) / len(self.per_query)


def evaluate(run: dict, qrels: dict, k: int = 10) -> EvalReport:
    qids, skipped = evaluated_queries(qrels)
    if not qids:
        raise EvalError("no query has a relevant document")
    report = EvalReport(k, skipped=skipped)
    sums = [0.0] * len(RECALL_LEVELS)
    for q in qids:
        report.per_query[q] = (precision_at_k(run, qrels, q, k), average_precision(run, qrels, q))
        for i, v in enumerate(interpolated_pr_curve(run, qrels, q)):
            sums[i] += v
    report.curve = [s / len(qids) for s in sums]
    return report


# --- batch runs -------------------------------------------------------------------

@dataclass
class BatchResult:
    run: dict  # qid -> [(docno, rank, score)]
    errors: list = field(default_factory=list)  # (qid, message)
    empty: list = field(default_factory=list)  # qids whose query vector was all zero

    @property
    def ok(self) -> bool:
        return not self.errors


def run_batch(topics: list, idx, annotator, wh_map=None, mode="nek+wh", k: int = 1000,
              ) -> BatchResult:
    """One search per topic; failing topics are reported and skipped."""
    out = BatchResult({})
    for qid, text in topics:
        try:
            result = search(text, idx, annotator, wh_map, mode, k)
        except (QueryError, KBError) as exc:
            out.errors.append((qid, str(exc)))
            log.warning("topic %s skipped: %s", qid, exc)
            continue
        if result.empty_query:
            out.empty.append(qid)
            log.warning("topic %s has an empty query vector", qid)
        out.run[qid] = [(d, r, s) for r, (d, s) in enumerate(result.entries, 1)]
    return out
