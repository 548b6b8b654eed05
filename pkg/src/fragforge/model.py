"""Domain types of the work-system modeling library and the library aggregate.

All records are frozen dataclasses. Library operations never mutate their
input; each returns a new :class:`Library` sharing unchanged records with the
old one.

Structural rules (which fields a fragment kind may carry, identifier syntax)
are enforced on construction. Semantic rules that a curator may violate while
a library is being filled (missing documents, empty motivations, dangling
citations) are left to :mod:`fragforge.constraints`, which reports them as
findings instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Iterable, Mapping

from fragforge.errors import (
    DuplicateId,
    DuplicateProperty,
    InvalidId,
    KindFieldMismatch,
    MalformedDimension,
    MissingTarget,
    ModelError,
    PrecedenceCycle,
    TargetForbidden,
    UnknownDimension,
    UnknownFragment,
    UnknownKind,
    UnknownTarget,
    UnknownValue,
)

ID_MAX_LENGTH = 64
_ID_RE = re.compile(r"[a-z0-9][a-z0-9-]*\Z")
_BIBKEY_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9:_+./-]*\Z")


def check_id(value: Any, what: str = "id") -> str:
    """Return ``value`` if it is a legal slug identifier, else raise InvalidId."""
    if not isinstance(value, str) or not _ID_RE.match(value) or len(value) > ID_MAX_LENGTH:
        raise InvalidId(f"invalid {what} {value!r}: expected [a-z0-9][a-z0-9-]*, at most {ID_MAX_LENGTH} chars")
    return value


def is_id(value: Any) -> bool:
    return isinstance(value, str) and bool(_ID_RE.match(value)) and len(value) <= ID_MAX_LENGTH


def check_bibkey(value: Any) -> str:
    if not isinstance(value, str) or not _BIBKEY_RE.match(value):
        raise InvalidId(f"invalid BibTeX key {value!r}")
    return value


def is_bibkey(value: Any) -> bool:
    return isinstance(value, str) and bool(_BIBKEY_RE.match(value))


class FragmentKind(str, Enum):
    WAY_OF_THINKING = "way-of-thinking"
    VIEWING_FRAMEWORK = "viewing-framework"
    VIEWING_CELL = "viewing-cell"
    WAY_OF_WORKING = "way-of-working"
    VIEWPOINT = "viewpoint"
    MODEL_RELATION_TYPE = "model-relation-type"
    WAY_OF_MODELING = "way-of-modeling"
    WAY_OF_CONCEIVING = "way-of-conceiving"
    WAY_OF_DESCRIBING = "way-of-describing"
    MODEL = "model"
    VIEW = "view"
    MODEL_RELATION = "model-relation"

    @classmethod
    def parse(cls, text: Any) -> FragmentKind:
        """Resolve a kind name, accepting the ``approach``/``technique`` aliases."""
        if isinstance(text, cls):
            return text
        if isinstance(text, str):
            if text in KIND_ALIASES:
                return KIND_ALIASES[text]
            try:
                return cls(text)
            except ValueError:
                pass
        raise UnknownKind(str(text))

    def __str__(self) -> str:
        return self.value


KIND_ALIASES: dict[str, FragmentKind] = {
    "approach": FragmentKind.WAY_OF_WORKING,
    "technique": FragmentKind.WAY_OF_MODELING,
}

PARTIAL_KINDS = frozenset({FragmentKind.MODEL, FragmentKind.VIEW})
COMPRISING_KINDS = frozenset({FragmentKind.VIEWPOINT, FragmentKind.VIEWING_FRAMEWORK, FragmentKind.VIEW})


class Modality(str, Enum):
    INTENDED = "intended"
    SUITABLE = "suitable"

    def __str__(self) -> str:
        return self.value


class DimensionClass(str, Enum):
    WHY = "why"
    WHAT = "what"
    HOW = "how"

    def __str__(self) -> str:
        return self.value


class DocumentKind(str, Enum):
    BASE = "base"
    DESCRIPTION = "description"
    DIMENSION_DESCRIPTION = "dimension-description"

    def __str__(self) -> str:
        return self.value


def _coerce_enum(enum_cls, value, what: str):
    try:
        return enum_cls(value)
    except ValueError:
        raise ModelError(f"invalid {what} {value!r}") from None


def _check_text(value: Any, what: str) -> str:
    if not isinstance(value, str):
        raise ModelError(f"{what} must be a string, got {type(value).__name__}")
    return value


@dataclass(frozen=True)
class Motivation:
    text: str
    cites: tuple[str, ...] = ()

    def __post_init__(self):
        _check_text(self.text, "motivation text")
        object.__setattr__(self, "cites", tuple(check_bibkey(k) for k in self.cites))


@dataclass(frozen=True)
class CharacterizationProperty:
    dimension: str
    value: str
    modality: Modality
    motivation: Motivation

    def __post_init__(self):
        check_id(self.dimension, "dimension id")
        check_id(self.value, "value id")
        object.__setattr__(self, "modality", _coerce_enum(Modality, self.modality, "modality"))
        if not isinstance(self.motivation, Motivation):
            raise ModelError("property motivation must be a Motivation")

    @property
    def triple(self) -> tuple[str, str, Modality]:
        return (self.dimension, self.value, self.modality)


@dataclass(frozen=True)
class Relation:
    """Endpoints and type of a model-relation fragment (``from``/``to`` on disk)."""

    source: str
    target: str
    relation_type: str

    def __post_init__(self):
        check_id(self.source, "relation source")
        check_id(self.target, "relation target")
        check_id(self.relation_type, "relation type")


@dataclass(frozen=True)
class MethodFragment:
    id: str
    kind: FragmentKind
    name: str
    properties: tuple[CharacterizationProperty, ...] = ()
    partial: bool | None = None
    comprises: tuple[str, ...] = ()
    relation: Relation | None = None

    def __post_init__(self):
        check_id(self.id, "fragment id")
        kind = FragmentKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        _check_text(self.name, "fragment name")
        props = tuple(self.properties)
        object.__setattr__(self, "properties", props)
        object.__setattr__(self, "comprises", tuple(check_id(c, "comprised id") for c in self.comprises))

        if kind in PARTIAL_KINDS:
            if self.partial is None:
                object.__setattr__(self, "partial", False)
            elif not isinstance(self.partial, bool):
                raise KindFieldMismatch(f"{self.id}: partial must be a boolean")
        elif self.partial is not None:
            raise KindFieldMismatch(f"{self.id}: 'partial' is only allowed on model and view fragments, not {kind}")
        if self.comprises and kind not in COMPRISING_KINDS:
            raise KindFieldMismatch(f"{self.id}: 'comprises' is not allowed on {kind} fragments")
        if (self.relation is not None) != (kind is FragmentKind.MODEL_RELATION):
            if self.relation is None:
                raise KindFieldMismatch(f"{self.id}: model-relation fragments need from/to/relation_type")
            raise KindFieldMismatch(f"{self.id}: only model-relation fragments carry a relation")

        seen = set()
        for prop in props:
            if not isinstance(prop, CharacterizationProperty):
                raise ModelError(f"{self.id}: properties must be CharacterizationProperty values")
            if prop.triple in seen:
                raise DuplicateProperty(
                    f"{self.id}: property {prop.dimension}={prop.value} ({prop.modality}) attached twice"
                )
            seen.add(prop.triple)

    def values_on(self, dimension: str, modality: Modality | None = None) -> set[str]:
        """Value ids this fragment carries on ``dimension`` (either modality if None)."""
        return {
            p.value
            for p in self.properties
            if p.dimension == dimension and (modality is None or p.modality == modality)
        }


@dataclass(frozen=True)
class DimensionValue:
    id: str
    label: str
    description: str = ""

    def __post_init__(self):
        check_id(self.id, "value id")
        _check_text(self.label, "value label")
        _check_text(self.description, "value description")


@dataclass(frozen=True)
class CharacterizationMethod:
    text: str
    cites: tuple[str, ...] = ()

    def __post_init__(self):
        _check_text(self.text, "method text")
        object.__setattr__(self, "cites", tuple(check_bibkey(k) for k in self.cites))


@dataclass(frozen=True)
class CharacterizationDimension:
    id: str
    name: str
    dimension_class: DimensionClass
    values: tuple[DimensionValue, ...]
    method: CharacterizationMethod
    mandatory_for: frozenset[FragmentKind] = frozenset()
    multi_valued: bool = False

    def __post_init__(self):
        check_id(self.id, "dimension id")
        _check_text(self.name, "dimension name")
        object.__setattr__(
            self, "dimension_class", _coerce_enum(DimensionClass, self.dimension_class, "dimension class")
        )
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mandatory_for", frozenset(FragmentKind.parse(k) for k in self.mandatory_for))
        if not isinstance(self.method, CharacterizationMethod):
            raise ModelError(f"{self.id}: method must be a CharacterizationMethod")
        if not isinstance(self.multi_valued, bool):
            raise ModelError(f"{self.id}: multi_valued must be a boolean")
        ids = [v.id for v in values]
        if len(set(ids)) != len(ids):
            raise MalformedDimension(f"{self.id}: duplicate value ids")

    @property
    def value_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.values)

    def check_well_formed(self) -> None:
        if len(self.values) < 2:
            raise MalformedDimension(f"{self.id}: a dimension needs at least 2 values, got {len(self.values)}")
        if not self.method.text.strip():
            raise MalformedDimension(f"{self.id}: characterization method text is empty")


@dataclass(frozen=True)
class DocumentRecord:
    id: str
    kind: DocumentKind
    bibkey: str
    target: str | None = None
    content_path: str | None = None
    precedes: str | None = None

    def __post_init__(self):
        check_id(self.id, "document id")
        kind = _coerce_enum(DocumentKind, self.kind, "document kind")
        object.__setattr__(self, "kind", kind)
        check_bibkey(self.bibkey)
        if kind is DocumentKind.BASE and self.target is not None:
            raise TargetForbidden(f"{self.id}: base documents cannot have a target")
        if kind is not DocumentKind.BASE and self.target is None:
            raise MissingTarget(f"{self.id}: {kind} documents need a target")
        if self.target is not None:
            check_id(self.target, "document target")
        if self.precedes is not None:
            check_id(self.precedes, "preceded document id")
        if self.content_path is not None:
            _check_content_path(self.id, self.content_path)


def _check_content_path(doc_id: str, path: Any) -> None:
    if not isinstance(path, str) or not path:
        raise ModelError(f"{doc_id}: content_path must be a non-empty string")
    parts = path.split("/")
    if path.startswith("/") or "\\" in path or any(p in ("", ".", "..") for p in parts):
        raise ModelError(f"{doc_id}: content_path must be a normalized relative path, got {path!r}")


@dataclass(frozen=True)
class Library:
    """Root aggregate. Maps are keyed by each record's own identifier.

    ``extensions`` carries record fields this version does not understand,
    keyed ``"<namespace>/<id>"`` (or ``"manifest"``), so they survive a
    load/save cycle.
    """

    fragments: Mapping[str, MethodFragment] = field(default_factory=dict)
    dimensions: Mapping[str, CharacterizationDimension] = field(default_factory=dict)
    documents: Mapping[str, DocumentRecord] = field(default_factory=dict)
    bibliography: Mapping[str, Any] = field(default_factory=dict)
    extensions: Mapping[str, Any] = field(default_factory=dict)


def new_library(seed: bool = False) -> Library:
    if not seed:
        return Library()
    from fragforge.taxonomy import seed_taxonomy

    seed_set = seed_taxonomy()
    return Library(
        dimensions={d.id: d for d in seed_set.dimensions},
        documents={d.id: d for d in seed_set.documents},
        bibliography={p.key: p for p in seed_set.publications},
    )


def add_fragment(lib: Library, fragment: MethodFragment) -> Library:
    if fragment.id in lib.fragments:
        raise DuplicateId("fragment", fragment.id)
    return replace(lib, fragments={**lib.fragments, fragment.id: fragment})


def add_dimension(lib: Library, dim: CharacterizationDimension) -> Library:
    if dim.id in lib.dimensions:
        raise DuplicateId("dimension", dim.id)
    dim.check_well_formed()
    return replace(lib, dimensions={**lib.dimensions, dim.id: dim})


def attach_property(lib: Library, fragment: str, prop: CharacterizationProperty) -> Library:
    frag = lib.fragments.get(fragment)
    if frag is None:
        raise UnknownFragment(f"unknown fragment {fragment!r}")
    dim = lib.dimensions.get(prop.dimension)
    if dim is None:
        raise UnknownDimension(f"unknown dimension {prop.dimension!r}")
    if prop.value not in dim.value_ids:
        raise UnknownValue(f"{prop.value!r} is not a value of dimension {dim.id!r}")
    # DuplicateProperty is raised by the fragment constructor
    updated = replace(frag, properties=frag.properties + (prop,))
    return replace(lib, fragments={**lib.fragments, fragment: updated})


def add_document(lib: Library, doc: DocumentRecord) -> Library:
    if doc.id in lib.documents:
        raise DuplicateId("document", doc.id)
    if doc.kind is DocumentKind.DESCRIPTION and doc.target not in lib.fragments:
        raise UnknownTarget(f"{doc.id}: no fragment {doc.target!r} to describe")
    if doc.kind is DocumentKind.DIMENSION_DESCRIPTION and doc.target not in lib.dimensions:
        raise UnknownTarget(f"{doc.id}: no dimension {doc.target!r} to describe")
    if doc.precedes is not None:
        if doc.precedes == doc.id:
            raise PrecedenceCycle(f"{doc.id}: a document cannot precede itself")
        if doc.precedes not in lib.documents:
            raise UnknownTarget(f"{doc.id}: preceded document {doc.precedes!r} does not exist")
        chain = [doc.id]
        cur: str | None = doc.precedes
        while cur is not None:
            if cur in chain:
                raise PrecedenceCycle(f"{doc.id}: precedence chain loops: {' -> '.join(chain + [cur])}")
            chain.append(cur)
            nxt = lib.documents.get(cur)
            cur = nxt.precedes if nxt is not None else None
    return replace(lib, documents={**lib.documents, doc.id: doc})


def fragment_kind_of(lib: Library, id: str) -> FragmentKind:
    frag = lib.fragments.get(id)
    if frag is None:
        raise UnknownFragment(f"unknown fragment {id!r}")
    return frag.kind


def precedence_cycles(documents: Mapping[str, DocumentRecord]) -> list[list[str]]:
    """Every cycle in the ``precedes`` graph, each rotated to start at its smallest id."""
    state: dict[str, int] = {}  # 1 = on current path, 2 = done
    cycles = []
    for start in sorted(documents):
        if start in state:
            continue
        path: list[str] = []
        cur: str | None = start
        while cur is not None and cur in documents and cur not in state:
            state[cur] = 1
            path.append(cur)
            cur = documents[cur].precedes
        if cur is not None and state.get(cur) == 1:
            cycle = path[path.index(cur):]
            k = cycle.index(min(cycle))
            cycles.append(cycle[k:] + cycle[:k])
        for node in path:
            state[node] = 2
    cycles.sort()
    return cycles


def iter_kinds(kinds: Iterable[FragmentKind]) -> list[FragmentKind]:
    """``kinds`` in enumeration order."""
    wanted = set(kinds)
    return [k for k in FragmentKind if k in wanted]
