"""Hypothesis strategies for random, structurally valid libraries and queries."""

from __future__ import annotations

import operator

from hypothesis import strategies as st

from fragforge.bibliography import Publication
from fragforge.model import (
    COMPRISING_KINDS,
    CharacterizationDimension,
    CharacterizationMethod,
    CharacterizationProperty,
    DimensionClass,
    DimensionValue,
    DocumentKind,
    DocumentRecord,
    FragmentKind,
    Library,
    MethodFragment,
    Modality,
    Motivation,
    Relation,
)
from fragforge.query import DimClause, PartialClause, Query, TypeClause

_LOWER = "abcdefghijklmnopqrstuvwxyz"
_DIGITS = "0123456789"
ids = st.builds(
    operator.add,
    st.sampled_from(_LOWER + _DIGITS),
    st.text(_LOWER + _DIGITS + "-", max_size=11),
)
bibkeys = st.builds(
    "{}-{}{}-{}".format,
    st.integers(1900, 2030),
    st.sampled_from(_LOWER.upper()),
    st.text(_LOWER, min_size=1, max_size=6),
    st.text(_LOWER + _LOWER.upper(), min_size=1, max_size=8),
)
# printable text without surrogates; exercised through JSON and HTML escaping
texts = st.text(st.characters(blacklist_categories=("Cs",)), max_size=30)
labels = st.text(st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=20)
kinds = st.sampled_from(list(FragmentKind))
modalities = st.sampled_from(list(Modality))


def _bib_value():
    # braces must balance for the value to be representable
    plain = st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="{}"), max_size=20)
    return st.one_of(plain, plain.map(lambda s: "{" + s + "}"))


@st.composite
def publications(draw, key):
    names = draw(st.lists(st.builds(operator.add, st.sampled_from(_LOWER), st.text(_LOWER + _DIGITS + "_", max_size=8)),
                          unique=True, max_size=4))
    fields = {n: draw(_bib_value()) for n in names}
    refs = tuple(draw(st.lists(bibkeys, max_size=2, unique=True)))
    return Publication(key, draw(st.sampled_from(["book", "article", "misc", "techreport"])), fields, refs)


_plain = st.sampled_from(["a", "Plain text", "x y"])


@st.composite
def dimensions(draw, did, keys, labels=labels, texts=texts):
    value_ids = draw(st.lists(ids, min_size=2, max_size=4, unique=True))
    return CharacterizationDimension(
        id=did,
        name=draw(labels),
        dimension_class=draw(st.sampled_from(list(DimensionClass))),
        values=tuple(DimensionValue(v, draw(labels), draw(texts)) for v in value_ids),
        method=CharacterizationMethod(draw(labels), tuple(draw(st.lists(st.sampled_from(keys), max_size=2)))
                                      if keys else ()),
        mandatory_for=frozenset(draw(st.sets(kinds, max_size=3))),
        multi_valued=draw(st.booleans()),
    )


@st.composite
def libraries(draw, max_fragments=8, max_dimensions=4, extensions=True, plain=False):
    """A library that ``save_library`` can write and ``load_library`` read back.

    Rule violations (dangling cites, missing documents, ...) are allowed; only
    the structural invariants of the record types hold. ``plain`` swaps the
    free-text fields for fixed strings, which is much faster to generate.
    """
    labels_, texts_ = (_plain, _plain) if plain else (labels, texts)
    keys = draw(st.lists(bibkeys, max_size=4, unique=True))
    bib = {k: draw(publications(k)) for k in keys} if not plain else {k: Publication(k, "misc") for k in keys}
    cite_pool = keys + ["1990-Unknown-Ref"]

    dim_ids = draw(st.lists(ids, max_size=max_dimensions, unique=True))
    dims = {d: draw(dimensions(d, cite_pool, labels_, texts_)) for d in dim_ids}

    frag_ids = draw(st.lists(ids, max_size=max_fragments, unique=True))
    frags = {}
    for fid in frag_ids:
        kind = draw(kinds)
        props = []
        seen = set()
        for dim in draw(st.lists(st.sampled_from(list(dims.values())), max_size=4)) if dims else []:
            triple = (dim.id, draw(st.sampled_from(dim.value_ids)), draw(modalities))
            if triple in seen:
                continue
            seen.add(triple)
            cites = tuple(draw(st.lists(st.sampled_from(cite_pool), max_size=2)))
            props.append(CharacterizationProperty(*triple, Motivation(draw(texts_), cites)))
        others = frag_ids or ["x"]
        frags[fid] = MethodFragment(
            id=fid,
            kind=kind,
            name=draw(labels_),
            properties=tuple(props),
            partial=draw(st.booleans()) if kind in (FragmentKind.MODEL, FragmentKind.VIEW) else None,
            comprises=tuple(draw(st.lists(st.sampled_from(others), max_size=3)))
            if kind in COMPRISING_KINDS else (),
            relation=Relation(*(draw(st.sampled_from(others)) for _ in range(3)))
            if kind is FragmentKind.MODEL_RELATION else None,
        )

    docs: dict[str, DocumentRecord] = {}
    for did in draw(st.lists(ids, max_size=5, unique=True)):
        options = [DocumentKind.BASE]
        if frags:
            options.append(DocumentKind.DESCRIPTION)
        if dims:
            options.append(DocumentKind.DIMENSION_DESCRIPTION)
        kind = draw(st.sampled_from(options))
        target = None
        if kind is DocumentKind.DESCRIPTION:
            target = draw(st.sampled_from(sorted(frags)))
        elif kind is DocumentKind.DIMENSION_DESCRIPTION:
            target = draw(st.sampled_from(sorted(dims)))
        # precedence only points at documents created earlier, so chains stay acyclic
        precedes = draw(st.none() | st.sampled_from(sorted(docs))) if docs else None
        docs[did] = DocumentRecord(
            id=did,
            kind=kind,
            bibkey=draw(st.sampled_from(cite_pool)),
            target=target,
            content_path=draw(st.none() | st.sampled_from(["article.pdf", "scans/p1.png", "notes/2004/memo.txt"])),
            precedes=precedes,
        )

    ext = {}
    if extensions and frags and draw(st.booleans()):
        fid = draw(st.sampled_from(sorted(frags)))
        ext[f"fragments/{fid}"] = {"x-curator": draw(texts), "x-rank": draw(st.integers(0, 9))}
    if extensions and draw(st.booleans()):
        ext["manifest"] = {"x-title": draw(texts)}
    return Library(fragments=frags, dimensions=dims, documents=docs, bibliography=bib, extensions=ext)


@st.composite
def library_and_query(draw):
    """A library plus a query whose dimension clauses name existing dimension values."""
    lib = draw(libraries(max_fragments=10, max_dimensions=3, extensions=False, plain=True))
    clauses = []
    for _ in range(draw(st.integers(0, 3))):
        choice = draw(st.sampled_from(["type", "partial", "dim"] if lib.dimensions else ["type", "partial"]))
        if choice == "type":
            clauses.append(TypeClause(draw(kinds)))
        elif choice == "partial":
            clauses.append(PartialClause(draw(st.booleans())))
        else:
            dim = lib.dimensions[draw(st.sampled_from(sorted(lib.dimensions)))]
            clauses.append(DimClause(draw(st.sampled_from(["intended", "suitable", "any"])), dim.id,
                                     draw(st.sampled_from(dim.value_ids))))
    return lib, Query(tuple(clauses))


def query_text(q: Query) -> str:
    parts = []
    for c in q.clauses:
        if isinstance(c, TypeClause):
            parts.append(f"type={c.kind.value}")
        elif isinstance(c, PartialClause):
            parts.append(f"partial={'true' if c.flag else 'false'}")
        else:
            parts.append(f"{c.modality}:{c.dimension}={c.value}")
    return " ".join(parts)
