"""Inverted index over generalized terms with tf.idf statistics.

Besides the generalized-term space, an index may carry a ``keyword_view``:
a plain keyword index over every token (entity names included) that serves
the keyword-only baseline.

On-disk layout: a directory holding four files, ``meta``, ``dict``,
``postings`` and ``norms``, plus a ``keyword/`` subdirectory with the same
four files for the keyword view. Every file starts with the same 22-byte header::

    magic   4s   b"OVSM"
    kind    4s   b"meta" | b"dict" | b"post" | b"norm"
    version u16  FORMAT_VERSION
    length  u64  payload size in bytes
    crc32   u32  zlib.crc32 of the payload

All integers are little-endian. Payloads:

* meta     UTF-8 JSON ``{"format_version", "N", "doc_ids", "log_base", "num_terms"}``
* dict     u32 count, then per term: u8 kind, u32 len + UTF-8 first, u32 len + UTF-8 second
* postings per term in ordinal order: u32 n, then n pairs of (u32 doc ordinal, u32 tf)
* norms    N float64 values, one per document ordinal
"""
from __future__ import annotations

import bisect
import json
import math
import struct
import zlib
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Iterable, Optional

from .kb import KnowledgeBase
from .terms import Kind, Term, emit_doc_terms, emit_keyword_terms

FORMAT_VERSION = 1
_HEADER = struct.Struct("<4s4sHQI")
_U32 = struct.Struct("<I")


class IndexFileError(Exception):
    pass


class DuplicateDocError(IndexFileError):
    def __init__(self, docno):
        self.docno = docno
        super().__init__(f"duplicate DOCNO {docno!r}")


class IndexVersionError(IndexFileError):
    pass


class IndexCorruptError(IndexFileError):
    pass


@dataclass
class Index:
    N: int
    terms: list  # ordinal -> Term, sorted
    postings: list  # ordinal -> [(doc ordinal, tf), ...]
    doc_ids: list  # doc ordinal -> DOCNO
    norms: list  # doc ordinal -> Euclidean norm of the tf.idf vector
    log_base: Optional[float] = None  # None means natural log
    keyword_view: Optional["Index"] = None
    dictionary: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.dictionary = {t: i for i, t in enumerate(self.terms)}

    def df(self, term) -> int:
        i = self.dictionary.get(term)
        return 0 if i is None else len(self.postings[i])

    def idf(self, term) -> float:
        df = self.df(term)
        return 0.0 if df == 0 else idf_value(self.N, df, self.log_base)

    def kind_counts(self) -> dict:
        counts = Counter(t.kind for t in self.terms)
        return {k.name.lower(): counts.get(k, 0) for k in Kind}


def idf_value(n: int, df: int, log_base: Optional[float]) -> float:
    value = math.log(n / df)
    if log_base is not None:
        value /= math.log(log_base)
    return value


def index_term_multisets(docs: Iterable, log_base: Optional[float] = None) -> Index:
    """Build from ``(docno, Counter[Term])`` pairs."""
    doc_ids, doc_terms, seen = [], [], set()
    for docno, counts in docs:
        if docno in seen:
            raise DuplicateDocError(docno)
        seen.add(docno)
        doc_ids.append(docno)
        doc_terms.append(counts)

    terms = sorted({t for counts in doc_terms for t in counts})
    ordinal = {t: i for i, t in enumerate(terms)}
    postings = [[] for _ in terms]
    for d, counts in enumerate(doc_terms):
        for t, tf in counts.items():
            if tf < 1:
                raise ValueError(f"non-positive tf for {t} in {doc_ids[d]}")
            postings[ordinal[t]].append((d, tf))
    # doc ordinals were appended in increasing order, so postings are sorted

    n = len(doc_ids)
    idf = [idf_value(n, len(p), log_base) for p in postings]
    # fsum is exactly rounded, so equal weight multisets give equal norms
    norms = [math.sqrt(math.fsum((tf * idf[ordinal[t]]) ** 2 for t, tf in counts.items()))
             for counts in doc_terms]
    return Index(n, terms, postings, doc_ids, norms, log_base)


def _emit_both(doc, kb, normalize):
    return emit_doc_terms(doc, kb, normalize), emit_keyword_terms(doc, normalize)


def build_index(docs: Iterable, kb: KnowledgeBase, normalize=None,
                log_base: Optional[float] = None, workers: int = 1,
                keyword_view: bool = True) -> Index:
    """Index annotated documents; ``workers > 1`` emits terms in subprocesses.

    ``normalize`` must be picklable when ``workers > 1``.
    """
    docs = list(docs)
    emit = partial(_emit_both, kb=kb, normalize=normalize)
    if workers > 1 and len(docs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(docs) // (4 * workers))
            pairs = list(pool.map(emit, docs, chunksize=chunk))
    else:
        pairs = [emit(d) for d in docs]
    ids = [d.doc_id for d in docs]
    idx = index_term_multisets(zip(ids, (p[0] for p in pairs)), log_base)
    if keyword_view:
        idx.keyword_view = index_term_multisets(zip(ids, (p[1] for p in pairs)), log_base)
    return idx


def weight_doc(idx: Index, term, doc: int) -> float:
    """tf x idf of ``term`` in document ordinal ``doc``; 0 when absent."""
    i = idx.dictionary.get(term)
    if i is None:
        return 0.0
    plist = idx.postings[i]
    j = bisect.bisect_left(plist, (doc, 0))
    if j == len(plist) or plist[j][0] != doc:
        return 0.0
    return plist[j][1] * idf_value(idx.N, len(plist), idx.log_base)


def weight_query(idx: Index, term, qtf: int) -> float:
    if qtf < 1:
        raise ValueError("query term frequency must be >= 1")
    i = idx.dictionary.get(term)
    if i is None:
        return 0.0
    return qtf * idf_value(idx.N, len(idx.postings[i]), idx.log_base)


# --- persistence ------------------------------------------------------------

def _write(path: Path, kind: bytes, payload: bytes):
    header = _HEADER.pack(b"OVSM", kind, FORMAT_VERSION, len(payload), zlib.crc32(payload))
    path.write_bytes(header + payload)


def _read(path: Path, kind: bytes) -> bytes:
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise IndexCorruptError(f"{path}: missing index file") from None
    if len(data) < _HEADER.size:
        raise IndexCorruptError(f"{path}: truncated header")
    magic, got_kind, version, length, crc = _HEADER.unpack_from(data)
    if magic != b"OVSM" or got_kind != kind:
        raise IndexCorruptError(f"{path}: not an index {kind.decode()} file")
    if version != FORMAT_VERSION:
        raise IndexVersionError(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    payload = data[_HEADER.size:]
    if len(payload) != length:
        raise IndexCorruptError(f"{path}: payload is {len(payload)} bytes, header says {length}")
    if zlib.crc32(payload) != crc:
        raise IndexCorruptError(f"{path}: checksum mismatch")
    return payload


def _pack_str(s: str) -> bytes:
    b = s.encode("utf-8")
    return _U32.pack(len(b)) + b


def save_index(idx: Index, path):
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    if idx.keyword_view is not None:
        save_index(idx.keyword_view, path / "keyword")
    meta = {
        "format_version": FORMAT_VERSION,
        "N": idx.N,
        "doc_ids": idx.doc_ids,
        "log_base": idx.log_base,
        "num_terms": len(idx.terms),
    }
    _write(path / "meta", b"meta", json.dumps(meta, ensure_ascii=False, sort_keys=True).encode("utf-8"))

    parts = [_U32.pack(len(idx.terms))]
    for t in idx.terms:
        parts.append(struct.pack("<B", int(t.kind)) + _pack_str(t.first) + _pack_str(t.second))
    _write(path / "dict", b"dict", b"".join(parts))

    parts = []
    for plist in idx.postings:
        flat = [x for pair in plist for x in pair]
        parts.append(_U32.pack(len(plist)) + struct.pack(f"<{len(flat)}I", *flat))
    _write(path / "postings", b"post", b"".join(parts))

    _write(path / "norms", b"norm", struct.pack(f"<{len(idx.norms)}d", *idx.norms))


def load_index(path) -> Index:
    path = Path(path)
    try:
        meta = json.loads(_read(path / "meta", b"meta").decode("utf-8"))
        n, doc_ids, num_terms = meta["N"], meta["doc_ids"], meta["num_terms"]

        buf = _read(path / "dict", b"dict")
        (count,), off = _U32.unpack_from(buf), _U32.size
        terms = []
        for _ in range(count):
            kind = Kind(buf[off])
            off += 1
            strs = []
            for _ in range(2):
                (size,) = _U32.unpack_from(buf, off)
                off += _U32.size
                strs.append(buf[off:off + size].decode("utf-8"))
                off += size
            terms.append(Term(kind, *strs))

        buf = _read(path / "postings", b"post")
        off = 0
        postings = []
        for _ in range(count):
            (size,) = _U32.unpack_from(buf, off)
            off += _U32.size
            flat = struct.unpack_from(f"<{2 * size}I", buf, off)
            off += 8 * size
            postings.append(list(zip(flat[::2], flat[1::2])))

        norms = list(struct.unpack(f"<{n}d", _read(path / "norms", b"norm")))
    except (struct.error, KeyError, ValueError, UnicodeDecodeError) as exc:
        raise IndexCorruptError(f"{path}: malformed index ({exc})") from None
    if count != num_terms or len(doc_ids) != n or off != len(buf):
        raise IndexCorruptError(f"{path}: inconsistent index files")
    idx = Index(n, terms, postings, doc_ids, norms, meta["log_base"])
    if (path / "keyword").is_dir():
        idx.keyword_view = load_index(path / "keyword")
    return idx
