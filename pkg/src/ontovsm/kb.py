"""Ontology and knowledge base: class hierarchy plus named-entity records.

KB text format (UTF-8, line oriented, ``#`` comments)::

    class <ClassId> [parent <ClassId>]
    entity <EntityId> class <ClassId> name "<canonical>" [alias "<a>"]*

Lines may appear in any order; references are validated once the whole
file has been read.
"""
from __future__ import annotations

import re
import shlex
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

_WS = re.compile(r"\s+")


class KBError(ValueError):
    """Raised for malformed KB files or lookups of undeclared ids."""

    def __init__(self, message: str, line: Optional[int] = None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


def normalize_name(name: str) -> str:
    """NFC, lowercase, whitespace runs collapsed to one space, trimmed.

    Diacritics are kept on purpose; stripping them would merge distinct
    Vietnamese names.
    """
    return _WS.sub(" ", unicodedata.normalize("NFC", name).lower()).strip()


@dataclass(frozen=True)
class EntityRecord:
    id: str
    cls: str
    canonical_name: str
    aliases: frozenset = frozenset()

    @property
    def names(self) -> frozenset:
        return self.aliases | {self.canonical_name}


@dataclass(frozen=True)
class KnowledgeBase:
    """Immutable after construction; share freely between workers."""

    classes: dict = field(default_factory=dict)  # ClassId -> parent or None
    entities: dict = field(default_factory=dict)  # EntityId -> EntityRecord
    name_index: dict = field(default_factory=dict)  # name -> frozenset[EntityId]
    _ancestors: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(cls, classes: dict, entities: Iterable[EntityRecord]) -> "KnowledgeBase":
        ents = {}
        for e in entities:
            if e.id in ents:
                raise KBError(f"duplicate entity id {e.id!r}")
            if e.cls not in classes:
                raise KBError(f"entity {e.id!r} has unknown class {e.cls!r}")
            ents[e.id] = e
        for c, parent in classes.items():
            if parent is not None and parent not in classes:
                raise KBError(f"class {c!r} has unknown parent {parent!r}")
        ancestors = _ancestor_table(classes)
        names: dict = {}
        for e in ents.values():
            for n in e.names:
                names.setdefault(n, set()).add(e.id)
        name_index = {n: frozenset(ids) for n, ids in names.items()}
        return cls(dict(classes), ents, name_index, ancestors)

    def __len__(self):
        return len(self.entities)


def _ancestor_table(classes: dict) -> dict:
    table = {}
    for c in classes:
        chain = []
        seen = {c}
        p = classes[c]
        while p is not None:
            if p in seen:
                cycle = sorted(seen & _cycle_members(classes, p))
                raise KBError("cycle in class hierarchy: " + ", ".join(cycle))
            seen.add(p)
            chain.append(p)
            p = classes[p]
        table[c] = tuple(chain)
    return table


def _cycle_members(classes: dict, start: str) -> set:
    members = {start}
    p = classes[start]
    while p != start:
        members.add(p)
        p = classes[p]
    return members


def _parse_line(tokens: list, lineno: int, path, classes: dict, entities: list, class_lines: dict):
    kind = tokens[0]
    if kind == "class":
        if len(tokens) == 2:
            cid, parent = tokens[1], None
        elif len(tokens) == 4 and tokens[2] == "parent":
            cid, parent = tokens[1], tokens[3]
        else:
            raise KBError("expected: class <ClassId> [parent <ClassId>]", lineno, path)
        if cid in classes:
            raise KBError(f"duplicate class id {cid!r}", lineno, path)
        classes[cid] = parent
        class_lines[cid] = lineno
    elif kind == "entity":
        if len(tokens) < 6 or tokens[2] != "class" or tokens[4] != "name":
            raise KBError('expected: entity <EntityId> class <ClassId> name "<name>"', lineno, path)
        eid, cls, canonical = tokens[1], tokens[3], normalize_name(tokens[5])
        rest = tokens[6:]
        if len(rest) % 2 or any(kw != "alias" for kw in rest[::2]):
            raise KBError('trailing fields must be alias "<name>" pairs', lineno, path)
        if not canonical:
            raise KBError(f"entity {eid!r} has an empty name", lineno, path)
        aliases = frozenset(normalize_name(a) for a in rest[1::2]) - {canonical}
        entities.append((lineno, EntityRecord(eid, cls, canonical, aliases)))
    else:
        raise KBError(f"unknown declaration {kind!r}", lineno, path)


def split_fields(line: str, lineno: int, path=None) -> list:
    """Shell-like field split with ``#`` comments and ``\\"`` escapes."""
    try:
        return shlex.split(line, comments=True)
    except ValueError as exc:
        raise KBError(str(exc), lineno, path) from None


def parse_kb(text: str, path=None) -> KnowledgeBase:
    classes: dict = {}
    class_lines: dict = {}
    entities: list = []
    for lineno, line in enumerate(text.splitlines(), 1):
        tokens = split_fields(line, lineno, path)
        if tokens:
            _parse_line(tokens, lineno, path, classes, entities, class_lines)

    for c, parent in classes.items():
        if parent is not None and parent not in classes:
            raise KBError(f"class {c!r} has unknown parent {parent!r}", class_lines[c], path)

    seen = {}
    for lineno, e in entities:
        if e.id in seen:
            raise KBError(f"duplicate entity id {e.id!r}", lineno, path)
        if e.cls not in classes:
            raise KBError(f"entity {e.id!r} has unknown class {e.cls!r}", lineno, path)
        seen[e.id] = e
    try:
        return KnowledgeBase.build(classes, seen.values())
    except KBError as exc:
        raise KBError(str(exc), path=path) from None


def load_kb(path) -> KnowledgeBase:
    path = Path(path)
    return parse_kb(path.read_text(encoding="utf-8"), path=path)


def _check_class(kb: KnowledgeBase, c: str):
    if c not in kb.classes:
        raise KBError(f"unknown class {c!r}")


def ancestors(kb: KnowledgeBase, c: str) -> list:
    """Strict ancestors of ``c``, nearest parent first."""
    _check_class(kb, c)
    return list(kb._ancestors[c])


def is_subclass(kb: KnowledgeBase, c1: str, c2: str) -> bool:
    _check_class(kb, c1)
    _check_class(kb, c2)
    return c1 == c2 or c2 in kb._ancestors[c1]


def entities_by_name(kb: KnowledgeBase, name: str, class_filter: Optional[str] = None) -> set:
    if class_filter is not None:
        _check_class(kb, class_filter)
    ids = kb.name_index.get(normalize_name(name), frozenset())
    if class_filter is None:
        return set(ids)
    return {e for e in ids if is_subclass(kb, kb.entities[e].cls, class_filter)}


def entity_info(kb: KnowledgeBase, eid: str) -> EntityRecord:
    try:
        return kb.entities[eid]
    except KeyError:
        raise KBError(f"unknown entity {eid!r}") from None
