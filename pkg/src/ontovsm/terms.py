"""Generalized terms and the rules that emit them for documents and queries.

A generalized term is one dimension of the vector space: either a keyword
or one of four named-entity descriptor forms::

    (name/*/*)   (*/class/*)   (name/class/*)   (*/*/identifier)
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Optional

from .annotate import AnnotatedDoc, load_stoplist, normalize_keyword, tokenize
from .kb import KBError, KnowledgeBase, ancestors, entities_by_name, normalize_name, split_fields


class Kind(IntEnum):
    KEYWORD = 0
    NAME = 1
    CLASS = 2
    NAME_CLASS = 3
    ID = 4


class Term(NamedTuple):
    """Ordered by kind, then lexicographically within a kind."""

    kind: Kind
    first: str
    second: str = ""

    def notation(self) -> str:
        if self.kind == Kind.KEYWORD:
            return self.first
        if self.kind == Kind.NAME:
            return f"({self.first}/*/*)"
        if self.kind == Kind.CLASS:
            return f"(*/{self.first}/*)"
        if self.kind == Kind.NAME_CLASS:
            return f"({self.first}/{self.second}/*)"
        return f"(*/*/{self.first})"

    def __str__(self):
        return self.notation()


def keyword(stem: str) -> Term:
    return Term(Kind.KEYWORD, stem)


def ne_name(name: str) -> Term:
    return Term(Kind.NAME, name)


def ne_class(cls: str) -> Term:
    return Term(Kind.CLASS, cls)


def ne_name_class(name: str, cls: str) -> Term:
    return Term(Kind.NAME_CLASS, name, cls)


def ne_id(eid: str) -> Term:
    return Term(Kind.ID, eid)


class Mode(str, Enum):
    KEYWORD = "keyword"
    NEK = "nek"
    NEK_WH = "nek+wh"

    def __str__(self):
        return self.value


@lru_cache(maxsize=1)
def _default_stoplist():
    return load_stoplist()


def default_normalize(surface: str) -> Optional[str]:
    return normalize_keyword(surface, _default_stoplist())


def _class_terms(kb: KnowledgeBase, cls: str) -> list:
    return [ne_class(cls)] + [ne_class(c) for c in ancestors(kb, cls)]


def annotation_terms(a, kb: KnowledgeBase) -> list:
    """Document-side terms for one candidate annotation."""
    if a.identifier is not None:
        rec = kb.entities.get(a.identifier)
        if rec is None:
            raise KBError(f"annotation references unknown entity {a.identifier!r}")
        if a.cls != rec.cls:
            raise KBError(f"annotation class {a.cls!r} disagrees with {a.identifier!r} ({rec.cls!r})")
        # the identifier stands in for every alias, so no name terms
        return [ne_id(a.identifier)] + _class_terms(kb, rec.cls)
    if a.cls is not None:
        if a.cls not in kb.classes:
            raise KBError(f"annotation references unknown class {a.cls!r}")
        return [ne_name_class(a.name, a.cls), ne_name(a.name)] + _class_terms(kb, a.cls)
    return [ne_name(a.name)]


def emit_doc_terms(doc: AnnotatedDoc, kb: KnowledgeBase, normalize=None) -> Counter:
    if normalize is None:
        normalize = default_normalize
    counts: Counter = Counter()
    for i in doc.keyword_tokens:
        kw = normalize(doc.tokens[i].surface)
        if kw is not None:
            counts[keyword(kw)] += 1
    for span in doc.ne_spans:
        for a in span.candidates:
            counts.update(annotation_terms(a, kb))
    return counts


def emit_keyword_terms(doc: AnnotatedDoc, normalize=None) -> Counter:
    """Plain bag of keywords over every token, NE spans included."""
    if normalize is None:
        normalize = default_normalize
    counts: Counter = Counter()
    for t in doc.tokens:
        kw = normalize(t.surface)
        if kw is not None:
            counts[keyword(kw)] += 1
    return counts


# --- Wh questions ---------------------------------------------------------

@dataclass(frozen=True)
class WhMap:
    words: dict = field(default_factory=dict)  # interrogative -> ClassId
    labels: dict = field(default_factory=dict)  # tuple of tokens -> ClassId

    def classes(self) -> set:
        return set(self.words.values()) | set(self.labels.values())


def parse_wh_map(text: str, kb: Optional[KnowledgeBase] = None, path=None,
                 strict: bool = True) -> WhMap:
    """``wh <word> -> <ClassId>`` and ``label "<phrase>" -> <ClassId>`` lines.

    With ``strict=False`` entries whose class the KB lacks are dropped
    instead of raising.
    """
    words, labels = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = split_fields(line, lineno, path)
        if not fields:
            continue
        if len(fields) != 4 or fields[0] not in ("wh", "label") or fields[2] != "->":
            raise KBError('expected: wh <word> -> <ClassId> or label "<phrase>" -> <ClassId>', lineno, path)
        kind, key, cls = fields[0], fields[1], fields[3]
        if kb is not None and cls not in kb.classes:
            if strict:
                raise KBError(f"wh map references undeclared class {cls!r}", lineno, path)
            continue
        if kind == "wh":
            words[normalize_name(key)] = cls
        else:
            toks = tuple(t.surface for t in tokenize(normalize_name(key)))
            if not toks:
                raise KBError("empty label", lineno, path)
            labels[toks] = cls
    return WhMap(words, labels)


def load_wh_map(path=None, kb: Optional[KnowledgeBase] = None, strict: bool = True) -> WhMap:
    """``path=None`` loads the bundled default map."""
    if path is None:
        text = resources.files("ontovsm").joinpath("data/wh_map.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_wh_map(text, kb, path, strict)


def match_wh(words: list, wh_map: WhMap) -> Optional[str]:
    """``words`` are the query's lowercased tokens."""
    if not words:
        return None
    first = words[0]
    if first in ("what", "which") and wh_map.labels:
        longest = max(len(k) for k in wh_map.labels)
        for n in range(min(longest, len(words) - 1), 0, -1):
            cls = wh_map.labels.get(tuple(words[1:1 + n]))
            if cls is not None:
                return cls
    return wh_map.words.get(first)


def wh_class(query_text: str, wh_map: WhMap, kb: Optional[KnowledgeBase] = None) -> Optional[str]:
    cls = match_wh([normalize_name(t.surface) for t in tokenize(query_text)], wh_map)
    if cls is not None and kb is not None and cls not in kb.classes:
        raise KBError(f"wh map references undeclared class {cls!r}")
    return cls


# --- queries --------------------------------------------------------------

def constraint_terms(c, kb: KnowledgeBase) -> list:
    if c.entity_id is not None:
        if c.entity_id not in kb.entities:
            raise KBError(f"unknown entity {c.entity_id!r}")
        return [ne_id(c.entity_id)]
    if c.name is not None and c.cls is not None:
        ids = sorted(entities_by_name(kb, c.name, c.cls))
        return [ne_id(e) for e in ids] + [ne_name_class(normalize_name(c.name), c.cls)]
    if c.name is not None:
        ids = sorted(entities_by_name(kb, c.name))
        return [ne_id(e) for e in ids] + [ne_name(normalize_name(c.name))]
    if c.cls not in kb.classes:
        raise KBError(f"unknown class {c.cls!r}")
    return [ne_class(c.cls)]


def emit_query_terms(q, kb: KnowledgeBase, mode) -> Counter:
    """Query vector for a parsed query under one retrieval mode."""
    mode = Mode(mode)
    counts: Counter = Counter(keyword(w) for w in q.free_text_tokens)
    if mode == Mode.KEYWORD:
        counts.update(keyword(w) for w in q.constraint_words)
        return counts
    for c in q.ne_constraints:
        counts.update(constraint_terms(c, kb))
    if mode == Mode.NEK_WH and q.wh_class is not None:
        counts[ne_class(q.wh_class)] += 1
    return counts
