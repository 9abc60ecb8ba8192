"""Command-line interface: ``ontovsm index|search|batch|eval``.

Options may also come from a JSON config file named by ``--config`` or
the ``ONTOVSM_CONFIG`` environment variable; flags override it.

Exit status: 0 success, 1 usage, 2 data/parse error, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .annotate import Annotator, load_gazetteer, load_stoplist
from .corpus import CorpusError, iter_corpus
from .evaluation import EvalError, evaluate, format_run, load_qrels, load_run, load_topics, run_batch
from .index import IndexFileError, build_index, load_index, save_index
from .kb import KBError, load_kb
from .search import QueryError, matched_terms, parse_query, score_all, target_index
from .terms import Mode, emit_query_terms, load_wh_map

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
MODES = [m.value for m in Mode]
DATA_ERRORS = (KBError, CorpusError, IndexFileError, EvalError, QueryError, OSError)

log = logging.getLogger("ontovsm")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Config:
    kb: Optional[str] = None
    gazetteer: Optional[str] = None
    stoplist: Optional[str] = None
    wh_map: Optional[str] = None
    index: Optional[str] = None
    mode: str = "nek+wh"
    k: int = 10

    @classmethod
    def resolve(cls, args) -> "Config":
        cfg = cls()
        path = getattr(args, "config", None) or os.environ.get("ONTOVSM_CONFIG")
        if path:
            try:
                data = json.loads(Path(path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError(f"cannot read config {path}: {exc}") from None
            known = {f.name for f in fields(cls)}
            unknown = set(data) - known
            if unknown:
                raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
            for key, value in data.items():
                setattr(cfg, key, value)
        for f in fields(cls):
            value = getattr(args, f.name, None)
            if value is not None:
                setattr(cfg, f.name, value)
        if cfg.mode not in MODES:
            raise UsageError(f"invalid mode {cfg.mode!r}; choose from {', '.join(MODES)}")
        if int(cfg.k) < 1:
            raise UsageError("-k must be >= 1")
        cfg.k = int(cfg.k)
        return cfg

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _annotator(cfg: Config) -> Annotator:
    kb = load_kb(cfg.kb)
    extra = load_gazetteer(cfg.gazetteer, kb) if cfg.gazetteer else ()
    stop = load_stoplist(cfg.stoplist) if cfg.stoplist else None
    return Annotator(kb, extra, stop)


def _wh_map(cfg: Config, kb):
    if cfg.wh_map:
        return load_wh_map(cfg.wh_map, kb)
    # bundled defaults name classes the deployment KB may not declare
    return load_wh_map(None, kb, strict=False)


def cmd_index(args, cfg: Config) -> int:
    cfg.require("kb", "index")
    annotator = _annotator(cfg)
    docs = (annotator.annotate(d.docno, d.text)
            for d in iter_corpus(args.corpus, strict=args.strict, warn=lambda m: log.warning("%s", m)))
    idx = build_index(docs, annotator.kb, normalize=annotator.keyword)
    save_index(idx, cfg.index)
    print(f"N={idx.N}")
    print(f"terms={len(idx.terms)}")
    for kind, count in idx.kind_counts().items():
        print(f"  {kind}={count}")
    return EXIT_OK


def cmd_search(args, cfg: Config) -> int:
    cfg.require("kb", "index")
    annotator = _annotator(cfg)
    wh_map = _wh_map(cfg, annotator.kb)
    idx = load_index(cfg.index)
    q = parse_query(args.query, annotator, wh_map)
    qvec = emit_query_terms(q, annotator.kb, cfg.mode)
    space = target_index(idx, cfg.mode)
    result = score_all(qvec, space)
    entries = result.entries[:cfg.k]
    if not entries:
        print("0 results" + (" (no query term is indexed)" if result.empty_query else ""))
        return EXIT_OK
    for rank, (docno, score) in enumerate(entries, 1):
        print(f"{rank}\t{docno}\t{score:.6f}")
        if args.explain:
            print("\t" + " ".join(t.notation() for t in matched_terms(qvec, space, docno)))
    return EXIT_OK


def _batch(cfg: Config, topics_path, mode):
    annotator = _annotator(cfg)
    wh_map = _wh_map(cfg, annotator.kb)
    idx = load_index(cfg.index)
    return run_batch(load_topics(topics_path), idx, annotator, wh_map, mode, cfg.k)


def cmd_batch(args, cfg: Config) -> int:
    cfg.require("kb", "index")
    result = _batch(cfg, args.topics, cfg.mode)
    text = format_run(result.run, f"ontovsm-{cfg.mode}")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for qid, msg in result.errors:
        print(f"topic {qid}: {msg}", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_DATA


def _print_report(label: str, report):
    print(f"{label}  P@{report.k}={report.precision:.4f}  MAP={report.map:.4f}")
    print("  11-pt: " + " ".join(f"{v:.3f}" for v in report.curve))


def cmd_eval(args, cfg: Config) -> int:
    qrels = load_qrels(args.qrels)
    if not qrels:
        raise EvalError(f"{args.qrels}: no relevance judgments")
    if args.compare:
        modes = [m.strip() for m in args.compare.split(",") if m.strip()]
        bad = [m for m in modes if m not in MODES]
        if bad or not modes:
            raise UsageError(f"--compare takes modes from {', '.join(MODES)}")
        if not args.topics:
            raise UsageError("--compare needs --topics")
        cfg.require("kb", "index")
        reports = {}
        status = EXIT_OK
        for m in modes:
            batch = _batch(cfg, args.topics, m)
            if not batch.ok:
                status = EXIT_DATA
            reports[m] = evaluate(batch.run, qrels, args.at)
        print(f"{'mode':<8}  {'P@' + str(args.at):>7}  {'MAP':>7}")
        for m, r in reports.items():
            print(f"{m:<8}  {r.precision:>7.4f}  {r.map:>7.4f}")
        for m, r in reports.items():
            print(f"{m:<8}  11-pt: " + " ".join(f"{v:.3f}" for v in r.curve))
        return status
    if not args.run:
        raise UsageError("eval needs --run or --compare")
    _print_report(Path(args.run).name, evaluate(load_run(args.run), qrels, args.at))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: $ONTOVSM_CONFIG)")
    common.add_argument("--kb", help="knowledge base file")
    common.add_argument("--gazetteer", help="name-only gazetteer file")
    common.add_argument("--stoplist", help="stopword file (default: bundled English list)")
    common.add_argument("--wh-map", dest="wh_map", help="Wh-word to class map")
    common.add_argument("--index", help="index directory")
    common.add_argument("--mode", help="keyword, nek or nek+wh")
    common.add_argument("-k", type=int, help="results per query")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="ontovsm", description="Named-entity and keyword vector space retrieval.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("index", parents=[common], help="annotate and index a TREC corpus")
    s.add_argument("corpus", nargs="+", help="corpus files or directories")
    s.add_argument("--strict", type=_bool, default=True, metavar="BOOL",
                   help="abort on a malformed corpus file (default true)")
    s.set_defaults(func=cmd_index)

    s = sub.add_parser("search", parents=[common], help="rank documents for one query")
    s.add_argument("query")
    s.add_argument("--explain", action="store_true", help="show matched generalized terms")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("batch", parents=[common], help="write a TREC run file for a topics file")
    s.add_argument("--topics", required=True)
    s.add_argument("-o", "--output", help="run file (default: stdout)")
    s.set_defaults(func=cmd_batch)

    s = sub.add_parser("eval", parents=[common], help="score a run, or compare modes")
    s.add_argument("--qrels", required=True)
    s.add_argument("--run")
    s.add_argument("--topics")
    s.add_argument("--compare", metavar="MODES", help="e.g. keyword,nek,nek+wh")
    s.add_argument("--at", type=int, default=10, help="cutoff for P@k (default 10)")
    s.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = Config.resolve(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"ontovsm: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DATA_ERRORS as exc:
        print(f"ontovsm: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001
        print(f"ontovsm: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
