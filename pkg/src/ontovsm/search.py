"""Query parsing and cosine ranking over the generalized-term index.

Query syntax: free text mixed with explicit NE operators::

    name:"Sài Gòn"        name only
    class:City            class only
    ne:"Paris"/City       name + class
    entity:Company_123    identifier

Free text is run through the same gazetteer as documents; a leading
interrogative (where/who/...) is resolved to an expected answer class.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .annotate import Annotator, tokenize
from .index import Index, idf_value
from .kb import KBError, normalize_name
from .terms import Mode, WhMap, emit_query_terms, match_wh

_OPERATOR = re.compile(r"(?<!\S)([A-Za-z]+):(?=\S)")
_CLASS_ID = re.compile(r"\S+")
_CAMEL = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
OPERATORS = ("name", "class", "ne", "entity")


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class NEConstraint:
    name: Optional[str] = None
    cls: Optional[str] = None
    entity_id: Optional[str] = None

    def __post_init__(self):
        if self.name is None and self.cls is None and self.entity_id is None:
            raise ValueError("empty NE constraint")
        if self.entity_id is not None and (self.name is not None or self.cls is not None):
            raise ValueError("identifier constraints carry no other field")


@dataclass
class ParsedQuery:
    raw: str
    free_text_tokens: list = field(default_factory=list)  # normalized keywords
    ne_constraints: list = field(default_factory=list)
    wh_class: Optional[str] = None
    # keyword-mode fallback: surface words of the NE constraints
    constraint_words: list = field(default_factory=list)


@dataclass
class RankedResult:
    entries: list = field(default_factory=list)  # (DOCNO, score)
    empty_query: bool = False  # every query weight was zero

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def docnos(self) -> list:
        return [d for d, _ in self.entries]


def class_words(cls: str) -> str:
    """``CommercialOrganization`` -> ``Commercial Organization``."""
    return _CAMEL.sub(" ", cls).replace("_", " ")


def _quoted(text: str, pos: int, raw: str):
    """Read a double-quoted string starting at ``pos``; returns (value, end)."""
    if pos >= len(text) or text[pos] != '"':
        raise QueryError(f"expected a quoted string at offset {pos} in {raw!r}")
    out = []
    i = pos + 1
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            out.append(text[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise QueryError(f"unterminated quote in {raw!r}")


def _class_id(text: str, pos: int, raw: str):
    m = _CLASS_ID.match(text, pos)
    if m is None:
        raise QueryError(f"missing identifier at offset {pos} in {raw!r}")
    return m.group(), m.end()


def _operators(text: str):
    """Split ``text`` into free-text fragments and explicit constraints."""
    fragments, constraints = [], []
    pos = 0
    while True:
        m = _OPERATOR.search(text, pos)
        if m is None:
            break
        op = m.group(1)
        if op not in OPERATORS:
            raise QueryError(f"unknown operator {op!r} in {text!r}")
        fragments.append(text[pos:m.start()])
        i = m.end()
        if op == "name":
            name, i = _quoted(text, i, text)
            constraints.append((NEConstraint(name=name), [name]))
        elif op == "ne":
            name, i = _quoted(text, i, text)
            if not text.startswith("/", i):
                raise QueryError(f'expected ne:"<name>"/<ClassId> in {text!r}')
            cls, i = _class_id(text, i + 1, text)
            constraints.append((NEConstraint(name=name, cls=cls), [name, class_words(cls)]))
        elif op == "class":
            cls, i = _class_id(text, i, text)
            constraints.append((NEConstraint(cls=cls), [class_words(cls)]))
        else:
            eid, i = _class_id(text, i, text)
            constraints.append((NEConstraint(entity_id=eid), None))
        pos = i
    fragments.append(text[pos:])
    return fragments, constraints


def parse_query(text: str, annotator: Annotator, wh_map: Optional[WhMap] = None) -> ParsedQuery:
    kb = annotator.kb
    fragments, explicit = _operators(text)
    q = ParsedQuery(raw=text)
    surfaces = []
    for c, words in explicit:
        if c.cls is not None and c.cls not in kb.classes:
            raise KBError(f"unknown class {c.cls!r}")
        if c.entity_id is not None:
            if c.entity_id not in kb.entities:
                raise KBError(f"unknown entity {c.entity_id!r}")
            words = [kb.entities[c.entity_id].canonical_name]
        q.ne_constraints.append(c)
        surfaces.extend(words)

    for n, frag in enumerate(fragments):
        tokens = tokenize(frag)
        # the interrogative only counts at the very start of the query
        if n == 0 and wh_map is not None and tokens:
            cls = match_wh([normalize_name(t.surface) for t in tokens], wh_map)
            if cls is not None:
                q.wh_class = cls
                tokens = tokens[1:]
        spans = annotator.find_spans(tokens)
        covered = set()
        for s in spans:
            covered.update(range(s.start, s.end))
            for a in s.candidates:
                if a.identifier is not None:
                    c = NEConstraint(entity_id=a.identifier)
                elif a.cls is not None:
                    c = NEConstraint(name=a.name, cls=a.cls)
                else:
                    c = NEConstraint(name=a.name)
                if c not in q.ne_constraints:
                    q.ne_constraints.append(c)
            surfaces.extend(t.surface for t in tokens[s.start:s.end])
        for i, t in enumerate(tokens):
            if i not in covered:
                kw = annotator.keyword(t.surface)
                if kw is not None:
                    q.free_text_tokens.append(kw)

    for s in surfaces:
        for t in tokenize(s):
            kw = annotator.keyword(t.surface)
            if kw is not None:
                q.constraint_words.append(kw)
    return q


def query_norm(weights: dict) -> float:
    return math.sqrt(math.fsum(w * w for w in weights.values()))


def query_weights(qvec: Counter, idx: Index) -> dict:
    """Nonzero query weights keyed by term ordinal."""
    out = {}
    for t in sorted(qvec):
        i = idx.dictionary.get(t)
        if i is None:
            continue
        df = len(idx.postings[i])
        w = qvec[t] * idf_value(idx.N, df, idx.log_base)
        if w > 0:
            out[i] = w
    return out


def score_all(qvec: Counter, idx: Index) -> RankedResult:
    """Cosine similarity of the query against every document sharing a term."""
    weights = query_weights(qvec, idx)
    if not weights:
        return RankedResult(empty_query=True)
    qnorm = query_norm(weights)
    parts: dict = {}
    for i, wq in weights.items():
        plist = idx.postings[i]
        idf = idf_value(idx.N, len(plist), idx.log_base)
        for doc, tf in plist:
            parts.setdefault(doc, []).append(tf * idf * wq)
    entries = []
    for doc, products in parts.items():
        dot = math.fsum(products)
        if dot <= 0.0:
            continue
        score = min(1.0, dot / (idx.norms[doc] * qnorm))
        entries.append((idx.doc_ids[doc], score))
    entries.sort(key=lambda e: (-e[1], e[0]))
    return RankedResult(entries)


def matched_terms(qvec: Counter, idx: Index, docno: str) -> list:
    """Query terms with nonzero weight that occur in ``docno``."""
    try:
        doc = idx.doc_ids.index(docno)
    except ValueError:
        return []
    weights = query_weights(qvec, idx)
    out = []
    for i in sorted(weights):
        if any(d == doc for d, _ in idx.postings[i]):
            out.append(idx.terms[i])
    return out


def target_index(idx: Index, mode) -> Index:
    """Keyword mode ranks against the plain keyword view when one exists."""
    if Mode(mode) == Mode.KEYWORD and idx.keyword_view is not None:
        return idx.keyword_view
    return idx


def search(text: str, idx: Index, annotator: Annotator, wh_map: Optional[WhMap] = None,
           mode=Mode.NEK_WH, k: int = 10) -> RankedResult:
    if k < 1:
        raise ValueError("k must be >= 1")
    q = parse_query(text, annotator, wh_map)
    result = score_all(emit_query_terms(q, annotator.kb, mode), target_index(idx, mode))
    result.entries = result.entries[:k]
    return result
