"""Gazetteer-based NE recognition and keyword normalization."""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional

from .kb import KBError, KnowledgeBase, normalize_name, split_fields

# letters and digits only; underscore is punctuation here
_TOKEN = re.compile(r"[^\W_]+")
_NUMBER = re.compile(r"^\d+$")


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


@dataclass(frozen=True)
class Annotation:
    name: str
    cls: Optional[str] = None
    identifier: Optional[str] = None

    def __post_init__(self):
        if self.identifier is not None and self.cls is None:
            raise ValueError("an identifier-bearing annotation needs a class")

    @property
    def form(self) -> int:
        """1 = name only, 2 = name + class, 3 = full triple."""
        if self.identifier is not None:
            return 3
        return 2 if self.cls is not None else 1


@dataclass(frozen=True)
class NESpan:
    start: int  # first token index
    end: int  # one past the last token index
    candidates: tuple

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("NESpan needs at least one candidate")


@dataclass
class AnnotatedDoc:
    doc_id: str
    tokens: list
    ne_spans: list = field(default_factory=list)
    keyword_tokens: list = field(default_factory=list)


def tokenize(text: str) -> list:
    """Maximal runs of Unicode letters/digits; offsets index ``text``."""
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def token_key(name: str) -> tuple:
    return tuple(t.surface for t in tokenize(normalize_name(name)))


def load_stoplist(path=None) -> frozenset:
    """One word per line; ``None`` loads the bundled English list."""
    if path is None:
        text = resources.files("ontovsm").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = (unicodedata.normalize("NFC", w.strip()).lower() for w in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


def normalize_keyword(surface: str, stoplist: Iterable = frozenset(),
                      stemmer: Optional[Callable[[str], str]] = None) -> Optional[str]:
    word = unicodedata.normalize("NFC", surface).lower()
    if not word or word in stoplist or _NUMBER.match(word):
        return None
    if stemmer is not None:
        word = stemmer(word)
    return word or None


def parse_gazetteer(text: str, kb: KnowledgeBase, path=None) -> list:
    """Name-only gazetteer: lines ``name "<surface>" class <ClassId>``."""
    entries = []
    for lineno, line in enumerate(text.splitlines(), 1):
        fields = split_fields(line, lineno, path)
        if not fields:
            continue
        if len(fields) != 4 or fields[0] != "name" or fields[2] != "class":
            raise KBError('expected: name "<surface>" class <ClassId>', lineno, path)
        if fields[3] not in kb.classes:
            raise KBError(f"unknown class {fields[3]!r}", lineno, path)
        name = normalize_name(fields[1])
        if not name:
            raise KBError("empty gazetteer name", lineno, path)
        entries.append((name, fields[3]))
    return entries


def load_gazetteer(path, kb: KnowledgeBase) -> list:
    path = Path(path)
    return parse_gazetteer(path.read_text(encoding="utf-8"), kb, path)


class Annotator:
    """Longest-match, left-to-right gazetteer over KB names.

    ``extra_names`` holds (name, class) pairs recognised without an
    identifier. Stateless after construction, so one instance may serve
    many threads.
    """

    def __init__(self, kb: KnowledgeBase, extra_names: Iterable = (),
                 stoplist: Optional[Iterable] = None, stemmer=None):
        self.kb = kb
        self.stoplist = load_stoplist() if stoplist is None else frozenset(stoplist)
        self.stemmer = stemmer
        self.extra_names = tuple(extra_names)
        by_key: dict = {}
        for name, ids in kb.name_index.items():
            key = token_key(name)
            if not key:
                continue
            for eid in ids:
                by_key.setdefault(key, {})[(name, kb.entities[eid].cls, eid)] = None
        for name, cls in self.extra_names:
            key = token_key(name)
            if not key:
                continue
            slot = by_key.setdefault(key, {})
            # a KB entity of the same class already covers this reading
            if not any(c == cls and e is not None for _, c, e in slot):
                slot[(name, cls, None)] = None
        self._entries = {k: sorted(v, key=_entry_order) for k, v in by_key.items()}
        self._max_len = max((len(k) for k in self._entries), default=0)

    def keyword(self, surface: str) -> Optional[str]:
        return normalize_keyword(surface, self.stoplist, self.stemmer)

    def find_spans(self, tokens: list) -> list:
        keys = [normalize_name(t.surface) for t in tokens]
        spans = []
        i = 0
        while i < len(tokens):
            for n in range(min(self._max_len, len(tokens) - i), 0, -1):
                entries = self._entries.get(tuple(keys[i:i + n]))
                if entries:
                    spans.append(NESpan(i, i + n, self._candidates(entries, keys[i:i + n])))
                    i += n
                    break
            else:
                i += 1
        return spans

    def _candidates(self, entries: list, window: list) -> tuple:
        surface = " ".join(window)
        names = {name for name, _, _ in entries}
        span_name = surface if surface in names else min(names)
        return tuple(Annotation(span_name, cls, eid) for _, cls, eid in entries)

    def annotate(self, doc_id: str, text: str) -> AnnotatedDoc:
        tokens = tokenize(text)
        spans = self.find_spans(tokens)
        covered = {i for s in spans for i in range(s.start, s.end)}
        rest = [i for i in range(len(tokens)) if i not in covered]
        return AnnotatedDoc(doc_id, tokens, spans, rest)

    def keywords(self, doc: AnnotatedDoc) -> list:
        out = []
        for i in doc.keyword_tokens:
            kw = self.keyword(doc.tokens[i].surface)
            if kw is not None:
                out.append(kw)
        return out


def _entry_order(entry):
    name, cls, eid = entry
    return (eid is None, eid or "", cls, name)


def annotate(doc_id: str, text: str, kb: KnowledgeBase, gazetteer: Iterable = ()) -> AnnotatedDoc:
    return Annotator(kb, gazetteer).annotate(doc_id, text)
