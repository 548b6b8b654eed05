"""Static HTML rendering of a library: one page per fragment and dimension."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from jinja2 import Environment, PackageLoader, StrictUndefined

from fragforge.errors import UnknownFragment
from fragforge.model import DimensionClass, DocumentKind, FragmentKind, Library, Modality, iter_kinds

STYLESHEET = "_styles/main.css"

_env = Environment(
    loader=PackageLoader("fragforge", "templates"),
    autoescape=True,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)


@dataclass(frozen=True)
class SitePage:
    path: str
    html: str


@dataclass(frozen=True)
class _Ref:
    id: str
    name: str
    exists: bool


@dataclass(frozen=True)
class _Cite:
    key: str
    resolved: bool


def _ref(lib: Library, fid: str) -> _Ref:
    frag = lib.fragments.get(fid)
    return _Ref(fid, frag.name if frag else fid, frag is not None)


def _cites(lib: Library, keys) -> list[_Cite]:
    return [_Cite(k, k in lib.bibliography) for k in keys]


def _documents(lib: Library, kind: DocumentKind, target: str) -> list[dict]:
    docs = sorted(
        (d for d in lib.documents.values() if d.kind is kind and d.target == target),
        key=lambda d: d.id,
    )
    return [
        {"id": d.id, "cite": _Cite(d.bibkey, d.bibkey in lib.bibliography),
         "content_path": d.content_path, "precedes": d.precedes}
        for d in docs
    ]


def render_fragment_page(lib: Library, id: str) -> SitePage:
    frag = lib.fragments.get(id)
    if frag is None:
        raise UnknownFragment(f"unknown fragment {id!r}")
    groups = []
    for modality, title in ((Modality.INTENDED, "Intended for"), (Modality.SUITABLE, "Suitable for")):
        items = []
        for p in frag.properties:
            if p.modality is not modality:
                continue
            dim = lib.dimensions.get(p.dimension)
            label = p.value
            if dim is not None:
                label = next((v.label for v in dim.values if v.id == p.value), p.value)
            items.append({
                "dimension": p.dimension,
                "dim_exists": dim is not None,
                "dim_name": dim.name if dim else p.dimension,
                "value_label": label,
                "motivation": p.motivation.text,
                "cites": _cites(lib, p.motivation.cites),
            })
        groups.append({"title": title, "entries": items})

    relation = []
    if frag.relation is not None:
        relation = [
            ("From", _ref(lib, frag.relation.source)),
            ("To", _ref(lib, frag.relation.target)),
            ("Relation type", _ref(lib, frag.relation.relation_type)),
        ]
    comprised_by = [
        _ref(lib, other.id)
        for other in sorted(lib.fragments.values(), key=lambda f: f.id)
        if id in other.comprises
    ]
    html = _env.get_template("fragment.html").render(
        root="../",
        frag=frag,
        groups=groups,
        documents=_documents(lib, DocumentKind.DESCRIPTION, id),
        comprises=[_ref(lib, c) for c in frag.comprises],
        relation=relation,
        comprised_by=comprised_by,
    )
    return SitePage(f"fragments/{id}.html", html)


def render_dimension_page(lib: Library, id: str) -> SitePage:
    dim = lib.dimensions[id]
    labels = {v.id: v.label for v in dim.values}
    fragments = []
    for frag in sorted(lib.fragments.values(), key=lambda f: f.id):
        values = [labels.get(v, v) for v in dim.value_ids if v in frag.values_on(id)]
        if values:
            fragments.append((_ref(lib, frag.id), ", ".join(values)))
    html = _env.get_template("dimension.html").render(
        root="../",
        dim=dim,
        method_cites=_cites(lib, dim.method.cites),
        mandatory_for=iter_kinds(dim.mandatory_for),
        documents=_documents(lib, DocumentKind.DIMENSION_DESCRIPTION, id),
        fragments=fragments,
    )
    return SitePage(f"dimensions/{id}.html", html)


def render_index(lib: Library) -> SitePage:
    fragment_groups = []
    for kind in FragmentKind:
        refs = sorted((_ref(lib, f.id) for f in lib.fragments.values() if f.kind is kind), key=lambda r: r.id)
        if refs:
            fragment_groups.append((kind, refs))
    dimension_groups = []
    for klass in DimensionClass:
        dims = sorted((d for d in lib.dimensions.values() if d.dimension_class is klass), key=lambda d: d.id)
        if dims:
            dimension_groups.append((klass.value, dims))
    html = _env.get_template("index.html").render(
        root="", fragment_groups=fragment_groups, dimension_groups=dimension_groups
    )
    return SitePage("index.html", html)


def render_bibliography(lib: Library) -> SitePage:
    pubs = sorted(lib.bibliography.values(), key=lambda p: p.key)
    html = _env.get_template("bib.html").render(root="", pubs=pubs, keys=set(lib.bibliography))
    return SitePage("bib.html", html)


def render_site(lib: Library) -> list[SitePage]:
    css = _env.loader.get_source(_env, "main.css")[0]
    pages = [SitePage(STYLESHEET, css), render_index(lib), render_bibliography(lib)]
    pages += [render_fragment_page(lib, fid) for fid in lib.fragments]
    pages += [render_dimension_page(lib, did) for did in lib.dimensions]
    pages.sort(key=lambda p: p.path)
    return pages


def publish_site(lib: Library, out: str | os.PathLike) -> list[str]:
    """Write the site under ``out`` and return the emitted relative paths, sorted.

    Stale ``.html`` pages left in ``fragments/`` and ``dimensions/`` by an
    earlier publish are removed; other files in ``out`` are left alone.
    """
    out = Path(out)
    pages = render_site(lib)
    emitted = {p.path for p in pages}
    for sub in ("fragments", "dimensions"):
        d = out / sub
        if d.is_dir():
            for old in d.glob("*.html"):
                if f"{sub}/{old.name}" not in emitted:
                    old.unlink()
    for page in pages:
        target = out / page.path
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(page.html)
    return [p.path for p in pages]
