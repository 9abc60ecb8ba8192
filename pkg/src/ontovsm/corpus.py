"""TREC SGML-style corpus reader: ``<DOC><DOCNO>..</DOCNO><TEXT>..</TEXT></DOC>``."""
from __future__ import annotations

import html
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

_DOC = re.compile(r"<DOC>(.*?)</DOC>", re.S | re.I)
_DOCNO = re.compile(r"<DOCNO>\s*(.*?)\s*</DOCNO>", re.S | re.I)
_BODY = re.compile(r"<(TEXT|HEADLINE|TITLE)>(.*?)</\1>", re.S | re.I)
_TAG = re.compile(r"<[^>]+>")


class CorpusError(ValueError):
    def __init__(self, message, path=None, line=None):
        self.path, self.line = path, line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class RawDoc:
    docno: str
    text: str


def _line_of(text: str, offset: int) -> int:
    return text.count("\n", 0, offset) + 1


def parse_trec(text: str, path=None) -> list:
    docs = []
    pos = 0
    for m in _DOC.finditer(text):
        gap = text[pos:m.start()]
        if gap.strip():
            raise CorpusError("text outside <DOC> element", path, _line_of(text, pos + len(gap) - len(gap.lstrip())))
        pos = m.end()
        body = m.group(1)
        docno = _DOCNO.search(body)
        if docno is None or not docno.group(1):
            raise CorpusError("<DOC> without <DOCNO>", path, _line_of(text, m.start()))
        parts = [_TAG.sub(" ", b.group(2)) for b in _BODY.finditer(body)]
        docs.append(RawDoc(docno.group(1), html.unescape("\n".join(parts))))
    tail = text[pos:]
    if tail.strip():
        offset = pos + len(tail) - len(tail.lstrip())
        raise CorpusError("unterminated or stray content after last </DOC>", path, _line_of(text, offset))
    return docs


def read_trec_file(path) -> list:
    path = Path(path)
    return parse_trec(path.read_text(encoding="utf-8"), path=path)


def corpus_files(paths) -> list:
    """Expand directories (recursively, sorted) into file lists."""
    out = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(f for f in p.rglob("*") if f.is_file()))
        else:
            out.append(p)
    return out


def iter_corpus(paths, strict: bool = True, warn=None) -> Iterator[RawDoc]:
    """Yield documents from every file; in non-strict mode bad files are skipped."""
    for f in corpus_files(paths):
        try:
            docs = read_trec_file(f)
        except (CorpusError, UnicodeDecodeError) as exc:
            if strict:
                if isinstance(exc, UnicodeDecodeError):
                    raise CorpusError(f"not UTF-8: {exc.reason}", f, None) from None
                raise
            if warn is not None:
                warn(f"skipping {f}: {exc}")
            continue
        yield from docs
