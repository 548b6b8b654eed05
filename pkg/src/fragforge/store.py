"""File-backed persistence: one canonical JSON record per library entry.

Layout of a library root::

    library-manifest            {"format": "wsml/1"}
    fragments/<id>.wsml.json
    dimensions/<id>.wsml.json
    documents/<id>.wsml.json
    bibliography.bib
    content/                    opaque attachments, never interpreted

Records are written with sorted keys, 2-space indent, ``\\n`` line endings and
a trailing newline, UTF-8 without BOM. Record fields this version does not
know are kept in ``Library.extensions`` and written back unchanged.
"""

from __future__ import annotations

import json
import os
import shutil
import tempfile
from pathlib import Path
from typing import Any

import jsonschema

from fragforge.bibliography import Publication, dump_bibtex, parse_bibtex
from fragforge.errors import DuplicateKey, FormatError, ModelError, ParseError, UnrepresentableValue
from fragforge.model import (
    CharacterizationDimension,
    CharacterizationMethod,
    CharacterizationProperty,
    DimensionValue,
    DocumentKind,
    DocumentRecord,
    Library,
    MethodFragment,
    Motivation,
    Relation,
    iter_kinds,
)

FORMAT_VERSION = "wsml/1"
MANIFEST = "library-manifest"
BIBLIOGRAPHY = "bibliography.bib"
CONTENT = "content"
SUFFIX = ".wsml.json"
NAMESPACES = ("fragments", "dimensions", "documents")

_STR = {"type": "string"}
_STR_LIST = {"type": "array", "items": _STR}
_CITED_TEXT = {
    "type": "object",
    "required": ["text"],
    "properties": {"text": _STR, "cites": _STR_LIST},
    "additionalProperties": False,
}

SCHEMAS: dict[str, dict] = {
    "fragments": {
        "type": "object",
        "required": ["id", "kind", "name"],
        "properties": {
            "id": _STR,
            "kind": _STR,
            "name": _STR,
            "partial": {"type": "boolean"},
            "comprises": _STR_LIST,
            "properties": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["dimension", "value", "modality", "motivation"],
                    "properties": {
                        "dimension": _STR,
                        "value": _STR,
                        "modality": {"enum": ["intended", "suitable"]},
                        "motivation": _CITED_TEXT,
                    },
                    "additionalProperties": False,
                },
            },
            "relation": {
                "type": "object",
                "required": ["from", "to", "relation_type"],
                "properties": {"from": _STR, "to": _STR, "relation_type": _STR},
                "additionalProperties": False,
            },
        },
    },
    "dimensions": {
        "type": "object",
        "required": ["id", "name", "class", "values", "method"],
        "properties": {
            "id": _STR,
            "name": _STR,
            "class": {"enum": ["why", "what", "how"]},
            "values": {
                "type": "array",
                "minItems": 2,
                "items": {
                    "type": "object",
                    "required": ["id", "label"],
                    "properties": {"id": _STR, "label": _STR, "description": _STR},
                    "additionalProperties": False,
                },
            },
            "method": _CITED_TEXT,
            "mandatory_for": _STR_LIST,
            "multi_valued": {"type": "boolean"},
        },
    },
    "documents": {
        "type": "object",
        "required": ["id", "kind", "bibkey"],
        "properties": {
            "id": _STR,
            "kind": {"enum": ["base", "description", "dimension-description"]},
            "bibkey": _STR,
            "target": _STR,
            "content_path": _STR,
            "precedes": _STR,
        },
    },
    "manifest": {
        "type": "object",
        "required": ["format"],
        "properties": {"format": _STR},
    },
}
_KNOWN_FIELDS = {ns: set(schema["properties"]) for ns, schema in SCHEMAS.items()}
_VALIDATORS = {ns: jsonschema.Draft202012Validator(schema) for ns, schema in SCHEMAS.items()}


def canonical_json(obj: Any) -> str:
    try:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    except (TypeError, ValueError) as exc:
        raise UnrepresentableValue(str(exc)) from exc


# -- record <-> JSON ---------------------------------------------------------


def _cited(obj) -> dict:
    return {"text": obj.text, "cites": list(obj.cites)}


def fragment_to_json(frag: MethodFragment) -> dict:
    out: dict[str, Any] = {
        "id": frag.id,
        "kind": frag.kind.value,
        "name": frag.name,
        "properties": [
            {
                "dimension": p.dimension,
                "value": p.value,
                "modality": p.modality.value,
                "motivation": _cited(p.motivation),
            }
            for p in frag.properties
        ],
        "comprises": list(frag.comprises),
    }
    if frag.partial is not None:
        out["partial"] = frag.partial
    if frag.relation is not None:
        out["relation"] = {
            "from": frag.relation.source,
            "to": frag.relation.target,
            "relation_type": frag.relation.relation_type,
        }
    return out


def fragment_from_json(data: dict) -> MethodFragment:
    rel = data.get("relation")
    return MethodFragment(
        id=data["id"],
        kind=data["kind"],
        name=data["name"],
        properties=tuple(
            CharacterizationProperty(
                dimension=p["dimension"],
                value=p["value"],
                modality=p["modality"],
                motivation=Motivation(p["motivation"]["text"], tuple(p["motivation"].get("cites", ()))),
            )
            for p in data.get("properties", ())
        ),
        partial=data.get("partial"),
        comprises=tuple(data.get("comprises", ())),
        relation=Relation(rel["from"], rel["to"], rel["relation_type"]) if rel is not None else None,
    )


def dimension_to_json(dim: CharacterizationDimension) -> dict:
    return {
        "id": dim.id,
        "name": dim.name,
        "class": dim.dimension_class.value,
        "values": [{"id": v.id, "label": v.label, "description": v.description} for v in dim.values],
        "method": _cited(dim.method),
        "mandatory_for": [k.value for k in iter_kinds(dim.mandatory_for)],
        "multi_valued": dim.multi_valued,
    }


def dimension_from_json(data: dict) -> CharacterizationDimension:
    return CharacterizationDimension(
        id=data["id"],
        name=data["name"],
        dimension_class=data["class"],
        values=tuple(DimensionValue(v["id"], v["label"], v.get("description", "")) for v in data["values"]),
        method=CharacterizationMethod(data["method"]["text"], tuple(data["method"].get("cites", ()))),
        mandatory_for=frozenset(data.get("mandatory_for", ())),
        multi_valued=data.get("multi_valued", False),
    )


def document_to_json(doc: DocumentRecord) -> dict:
    out = {"id": doc.id, "kind": doc.kind.value, "bibkey": doc.bibkey}
    for name in ("target", "content_path", "precedes"):
        value = getattr(doc, name)
        if value is not None:
            out[name] = value
    return out


def document_from_json(data: dict) -> DocumentRecord:
    return DocumentRecord(
        id=data["id"],
        kind=data["kind"],
        bibkey=data["bibkey"],
        target=data.get("target"),
        content_path=data.get("content_path"),
        precedes=data.get("precedes"),
    )


_TO_JSON = {"fragments": fragment_to_json, "dimensions": dimension_to_json, "documents": document_to_json}
_FROM_JSON = {"fragments": fragment_from_json, "dimensions": dimension_from_json, "documents": document_from_json}


# -- save --------------------------------------------------------------------


def _merge_extension(lib: Library, ext_key: str, record: dict, namespace: str) -> dict:
    extra = lib.extensions.get(ext_key)
    if not extra:
        return record
    if not isinstance(extra, dict):
        raise UnrepresentableValue(f"extension {ext_key!r} must be a mapping of field names")
    clash = sorted(set(extra) & _KNOWN_FIELDS[namespace])
    if clash:
        raise UnrepresentableValue(f"extension {ext_key!r} shadows known field(s) {clash}")
    return {**record, **extra}


def render_tree(lib: Library) -> dict[str, str]:
    """Relative path -> file text for every file ``save_library`` writes."""
    files: dict[str, str] = {}
    valid_ext = {"manifest"}
    for ns in NAMESPACES:
        records = getattr(lib, ns)
        for ident, record in records.items():
            if ident != record.id:
                raise UnrepresentableValue(f"{ns} entry keyed {ident!r} has id {record.id!r}")
            ext_key = f"{ns}/{ident}"
            valid_ext.add(ext_key)
            body = _merge_extension(lib, ext_key, _TO_JSON[ns](record), ns)
            files[f"{ns}/{ident}{SUFFIX}"] = canonical_json(body)
    orphans = sorted(set(lib.extensions) - valid_ext)
    if orphans:
        raise UnrepresentableValue(f"extensions without a matching record: {orphans}")
    for key, pub in lib.bibliography.items():
        if not isinstance(pub, Publication) or key != pub.key:
            raise UnrepresentableValue(f"bibliography entry {key!r} is not a Publication keyed by its own key")
    files[BIBLIOGRAPHY] = dump_bibtex(lib.bibliography.values())
    files[MANIFEST] = canonical_json(_merge_extension(lib, "manifest", {"format": FORMAT_VERSION}, "manifest"))
    return files


def save_library(lib: Library, root: str | os.PathLike) -> None:
    """Write ``lib`` under ``root``, replacing any previous library there.

    The tree is assembled in a temporary sibling directory and swapped in by
    rename, so an interrupted save leaves the old library intact. The
    ``content/`` directory of an existing library is carried over.
    """
    root = Path(root)
    files = render_tree(lib)  # fails before anything touches the disk
    if root.exists() and not root.is_dir():
        raise NotADirectoryError(f"{root} is not a directory")
    if root.is_dir() and any(root.iterdir()) and not (root / MANIFEST).is_file():
        raise FileExistsError(f"{root} is a non-empty directory without a {MANIFEST}; refusing to replace it")

    parent = root.absolute().parent
    parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(prefix=f".{root.name}.new-", dir=parent))
    try:
        for ns in NAMESPACES:
            (tmp / ns).mkdir()
        if (root / CONTENT).is_dir():
            shutil.copytree(root / CONTENT, tmp / CONTENT, symlinks=True)
        else:
            (tmp / CONTENT).mkdir()
        for rel, text in files.items():
            with open(tmp / rel, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise

    if root.exists():
        old = Path(tempfile.mkdtemp(prefix=f".{root.name}.old-", dir=parent))
        os.rmdir(old)
        os.rename(root, old)
        try:
            os.rename(tmp, root)
        except BaseException:
            os.rename(old, root)
            shutil.rmtree(tmp, ignore_errors=True)
            raise
        shutil.rmtree(old, ignore_errors=True)
    else:
        os.rename(tmp, root)


# -- load --------------------------------------------------------------------


def _record_files(directory: Path) -> list[Path]:
    return sorted(directory.iterdir())


def _read_json(path: Path, namespace: str) -> dict:
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(path, f"not valid UTF-8: {exc.reason}", f"byte {exc.start}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(path, exc.msg, f"line {exc.lineno}, column {exc.colno}") from exc
    error = jsonschema.exceptions.best_match(_VALIDATORS[namespace].iter_errors(data))
    if error is not None:
        location = "/".join(str(p) for p in error.absolute_path) or "<root>"
        raise FormatError(path, error.message, location)
    return data


def load_library(root: str | os.PathLike) -> Library:
    """Read a library tree written by :func:`save_library` (or edited by hand).

    Raises FormatError naming the offending file for a bad manifest version,
    an id that does not match its filename, or any record that violates the
    schema or the structural rules of its type.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"no library directory at {root}")
    manifest_path = root / MANIFEST
    if not manifest_path.is_file():
        raise FormatError(manifest_path, "missing library manifest")
    manifest = _read_json(manifest_path, "manifest")
    if manifest["format"] != FORMAT_VERSION:
        raise FormatError(manifest_path, f"unsupported format {manifest['format']!r}, expected {FORMAT_VERSION!r}")

    extensions: dict[str, Any] = {}
    extra = {k: v for k, v in manifest.items() if k not in _KNOWN_FIELDS["manifest"]}
    if extra:
        extensions["manifest"] = extra

    tables: dict[str, dict] = {}
    for ns in NAMESPACES:
        directory = root / ns
        if not directory.is_dir():
            raise FormatError(directory, f"missing {ns}/ directory")
        table: dict[str, Any] = {}
        for path in _record_files(directory):
            if path.name.startswith("."):
                continue
            if not path.is_file() or not path.name.endswith(SUFFIX):
                raise FormatError(path, f"unexpected entry; records must be named <id>{SUFFIX}")
            ident = path.name[: -len(SUFFIX)]
            data = _read_json(path, ns)
            if data["id"] != ident:
                raise FormatError(path, f"record declares id {data['id']!r} but the file is named for {ident!r}", "id")
            try:
                table[ident] = _FROM_JSON[ns](data)
            except ModelError as exc:
                raise FormatError(path, str(exc)) from exc
            extra = {k: v for k, v in data.items() if k not in _KNOWN_FIELDS[ns]}
            if extra:
                extensions[f"{ns}/{ident}"] = extra
        tables[ns] = table

    for doc in tables["documents"].values():
        path = root / "documents" / f"{doc.id}{SUFFIX}"
        if doc.target is not None:
            pool = tables["fragments"] if doc.kind is DocumentKind.DESCRIPTION else tables["dimensions"]
            if doc.target not in pool:
                raise FormatError(path, f"target {doc.target!r} does not exist", "target")
        if doc.precedes is not None and doc.precedes not in tables["documents"]:
            raise FormatError(path, f"preceded document {doc.precedes!r} does not exist", "precedes")

    bib_path = root / BIBLIOGRAPHY
    if not bib_path.is_file():
        raise FormatError(bib_path, "missing bibliography file")
    try:
        pubs = parse_bibtex(bib_path.read_bytes().decode("utf-8"))
    except ParseError as exc:
        raise FormatError(bib_path, exc.reason, f"line {exc.line}, column {exc.column}") from exc
    except DuplicateKey as exc:
        raise FormatError(bib_path, str(exc)) from exc
    except UnicodeDecodeError as exc:
        raise FormatError(bib_path, f"not valid UTF-8: {exc.reason}", f"byte {exc.start}") from exc

    return Library(
        fragments=tables["fragments"],
        dimensions=tables["dimensions"],
        documents=tables["documents"],
        bibliography={p.key: p for p in pubs},
        extensions=extensions,
    )
