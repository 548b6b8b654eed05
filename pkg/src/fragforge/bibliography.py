"""BibTeX publication details and citation-key resolution.

Only a subset of BibTeX is understood: ``@type{key, name = value, ...}`` where
a value is a balanced ``{...}`` group, a ``"..."`` string or a bare number.
``@comment`` blocks are skipped and text between entries is ignored.
``@string``, ``@preamble``, ``#`` concatenation and macros are rejected.

The custom field ``library-refs`` holds a comma-separated list of keys that a
publication refers to; it is lifted out of ``fields`` into ``refs``.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Iterable

from fragforge.errors import DuplicateKey, ParseError, UnrepresentableValue
from fragforge.model import Library, is_bibkey

REFS_FIELD = "library-refs"

_TYPE_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_FIELD_RE = re.compile(r"[A-Za-z][A-Za-z0-9_:.+-]*")
_KEY_TOKEN_RE = re.compile(r"[^\s,{}=\"#()]*")
_NUMBER_RE = re.compile(r"[0-9]+")
_WS_RE = re.compile(r"\s*")


@dataclass(frozen=True)
class Publication:
    key: str
    entry_type: str
    fields: dict[str, str] = field(default_factory=dict)
    refs: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fields", dict(self.fields))
        object.__setattr__(self, "refs", tuple(self.refs))


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def loc(self, pos: int | None = None) -> tuple[int, int]:
        if pos is None:
            pos = self.pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def fail(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, *self.loc(pos))

    def skip_ws(self) -> None:
        self.pos = _WS_RE.match(self.text, self.pos).end()

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def match(self, regex: re.Pattern) -> str:
        m = regex.match(self.text, self.pos)
        token = m.group(0) if m else ""
        self.pos += len(token)
        return token

    def delimited(self, opener_pos: int, closer: str) -> str:
        """Read up to the matching ``closer``; ``self.pos`` sits after the opener."""
        depth = 0
        start = self.pos
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch == "{":
                depth += 1
            elif ch == "}":
                if depth == 0:
                    if closer == "}":
                        value = text[start:self.pos]
                        self.pos += 1
                        return value
                    raise self.fail("unbalanced '}' in quoted value")
                depth -= 1
            elif ch == '"' and closer == '"' and depth == 0:
                value = text[start:self.pos]
                self.pos += 1
                return value
            self.pos += 1
        if closer == '"':
            raise self.fail("unterminated quoted value", opener_pos)
        raise self.fail("unbalanced braces: group is never closed", opener_pos)


def parse_bibtex(text: str) -> list[Publication]:
    """Parse ``text`` into publications in source order.

    Raises ParseError (1-based line/column) for malformed entries and
    DuplicateKey when two entries share a key.
    """
    cur = _Cursor(text)
    entries: list[Publication] = []
    seen: set[str] = set()
    while True:
        at = text.find("@", cur.pos)
        if at < 0:
            return entries
        cur.pos = at + 1
        entry_type = cur.match(_TYPE_RE).lower()
        if not entry_type:
            continue
        cur.skip_ws()
        opener = cur.peek()
        if opener == "(":
            raise cur.fail("parenthesized entries are not supported")
        if opener != "{":
            continue  # a stray '@' in inter-entry text
        open_pos = cur.pos
        cur.pos += 1
        if entry_type == "comment":
            cur.delimited(open_pos, "}")
            continue
        if entry_type in ("string", "preamble"):
            raise cur.fail(f"@{entry_type} is not supported", at)
        key_pos = cur.pos + len(_WS_RE.match(text, cur.pos).group(0))
        pub = _parse_entry(cur, entry_type, open_pos)
        if pub.key in seen:
            raise DuplicateKey(pub.key, *cur.loc(key_pos))
        seen.add(pub.key)
        entries.append(pub)


def _parse_entry(cur: _Cursor, entry_type: str, open_pos: int) -> Publication:
    cur.skip_ws()
    key_pos = cur.pos
    key = cur.match(_KEY_TOKEN_RE)
    cur.skip_ws()
    if not key or cur.peek() == "=":
        raise cur.fail("missing entry key", key_pos)
    if not is_bibkey(key):
        raise cur.fail(f"invalid entry key {key!r}", key_pos)

    fields: dict[str, str] = {}
    refs: tuple[str, ...] = ()
    names: set[str] = set()
    while True:
        ch = cur.peek()
        if ch == "}":
            cur.pos += 1
            return Publication(key, entry_type, fields, refs)
        if ch != ",":
            if not ch:
                raise cur.fail("unbalanced braces: entry is never closed", open_pos)
            raise cur.fail("expected ',' or '}'")
        cur.pos += 1
        cur.skip_ws()
        if cur.peek() == "}":
            continue
        if not cur.peek():
            raise cur.fail("unbalanced braces: entry is never closed", open_pos)

        name_pos = cur.pos
        name = cur.match(_FIELD_RE).lower()
        if not name:
            raise cur.fail("expected a field name")
        cur.skip_ws()
        if cur.peek() != "=":
            raise cur.fail(f"expected '=' after field {name!r}")
        cur.pos += 1
        cur.skip_ws()
        value = _parse_value(cur)
        if name in names:
            raise cur.fail(f"duplicate field {name!r}", name_pos)
        names.add(name)
        if name == REFS_FIELD:
            refs = tuple(r.strip() for r in value.split(",") if r.strip())
            bad = [r for r in refs if not is_bibkey(r)]
            if bad:
                raise cur.fail(f"invalid key {bad[0]!r} in {REFS_FIELD}", name_pos)
        else:
            fields[name] = value
        cur.skip_ws()
        if cur.peek() == "#":
            raise cur.fail("string concatenation is not supported")


def _parse_value(cur: _Cursor) -> str:
    ch = cur.peek()
    if ch in ("{", '"'):
        opener = cur.pos
        cur.pos += 1
        return cur.delimited(opener, "}" if ch == "{" else '"')
    number = cur.match(_NUMBER_RE)
    if number:
        return number
    if not ch:
        raise cur.fail("expected a value, found end of input")
    raise cur.fail("expected a braced, quoted or numeric value")


def _balanced(value: str) -> bool:
    depth = 0
    for ch in value:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def format_publication(pub: Publication) -> str:
    if not _TYPE_RE.fullmatch(pub.entry_type) or pub.entry_type != pub.entry_type.lower():
        raise UnrepresentableValue(f"{pub.key}: bad entry type {pub.entry_type!r}")
    if pub.entry_type in ("comment", "string", "preamble"):
        raise UnrepresentableValue(f"{pub.key}: reserved entry type {pub.entry_type!r}")
    if not is_bibkey(pub.key):
        raise UnrepresentableValue(f"bad BibTeX key {pub.key!r}")
    lines = [f"@{pub.entry_type}{{{pub.key},"]
    for name, value in pub.fields.items():
        if not _FIELD_RE.fullmatch(name) or name != name.lower() or name == REFS_FIELD:
            raise UnrepresentableValue(f"{pub.key}: bad field name {name!r}")
        if not isinstance(value, str) or not _balanced(value):
            raise UnrepresentableValue(f"{pub.key}: field {name!r} has unbalanced braces")
        lines.append(f"  {name} = {{{value}}},")
    if pub.refs:
        bad = [r for r in pub.refs if not is_bibkey(r)]
        if bad:
            raise UnrepresentableValue(f"{pub.key}: bad reference key {bad[0]!r}")
        lines.append(f"  {REFS_FIELD} = {{{', '.join(pub.refs)}}},")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_bibtex(pubs: Iterable[Publication]) -> str:
    """Serialize publications, one field per line, entries separated by a blank line."""
    return "\n".join(format_publication(p) for p in pubs)


def resolve_key(lib: Library, key: str) -> Publication | None:
    return lib.bibliography.get(key)


def citation_sites(lib: Library) -> dict[str, list[str]]:
    """Map every cited key to human-readable descriptions of where it is cited."""
    sites: dict[str, list[str]] = defaultdict(list)
    for frag in lib.fragments.values():
        for prop in frag.properties:
            for key in prop.motivation.cites:
                sites[key].append(f"fragment {frag.id} ({prop.dimension}={prop.value}, {prop.modality})")
    for dim in lib.dimensions.values():
        for key in dim.method.cites:
            sites[key].append(f"dimension {dim.id} (method)")
    for doc in lib.documents.values():
        sites[doc.bibkey].append(f"document {doc.id}")
    return {key: sorted(set(where)) for key, where in sites.items()}


def referenced_keys(lib: Library) -> list[str]:
    """Sorted, de-duplicated keys cited by motivations, dimension methods and documents."""
    return sorted(citation_sites(lib))


def add_publications(lib: Library, pubs: Iterable[Publication]) -> Library:
    """Merge ``pubs`` into the bibliography; re-importing an identical entry is a no-op."""
    merged = dict(lib.bibliography)
    for pub in pubs:
        existing = merged.get(pub.key)
        if existing is not None and existing != pub:
            raise DuplicateKey(pub.key)
        merged.setdefault(pub.key, pub)
    return replace(lib, bibliography=merged)
