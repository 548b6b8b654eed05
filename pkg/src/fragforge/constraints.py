"""Integrity rules over a library snapshot.

Each rule is a pure function yielding ``(code, subject, message)`` triples.
:func:`validate` runs all of them, applies the severity profile and returns
findings in canonical order, so the result never depends on insertion order.
Violations are always reported, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterator

from fragforge.bibliography import citation_sites
from fragforge.model import (
    DocumentKind,
    FragmentKind,
    Library,
    Modality,
    precedence_cycles,
)


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class ValidationFinding:
    code: str
    severity: Severity
    subject: str
    message: str

    def as_dict(self) -> dict[str, str]:
        return {"code": self.code, "severity": str(self.severity), "subject": self.subject, "message": self.message}


@dataclass(frozen=True)
class Profile:
    name: str
    downgrades: frozenset[str] = frozenset()


STRICT = Profile("strict")
BOOTSTRAP = Profile("bootstrap", frozenset({"E001", "E008", "E011"}))
PROFILES = {p.name: p for p in (STRICT, BOOTSTRAP)}


def get_profile(name: str) -> Profile:
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; expected one of {sorted(PROFILES)}") from None


Hit = Iterator[tuple[str, str]]  # (subject, message)


def _e001(lib: Library) -> Hit:
    described = {d.target for d in lib.documents.values() if d.kind is DocumentKind.DESCRIPTION}
    for fid in lib.fragments:
        if fid not in described:
            yield fid, f"fragment {fid} has no description document"


def _e002(lib: Library) -> Hit:
    described = {d.target for d in lib.documents.values() if d.kind is DocumentKind.DIMENSION_DESCRIPTION}
    for did in lib.dimensions:
        if did not in described:
            yield did, f"dimension {did} has no dimension-description document"


def _e003(lib: Library) -> Hit:
    for cycle in precedence_cycles(lib.documents):
        yield cycle[0], "document precedence cycle: " + " -> ".join(cycle + [cycle[0]])


def _e004(lib: Library) -> Hit:
    for frag in lib.fragments.values():
        for p in frag.properties:
            if not p.motivation.text.strip():
                yield frag.id, f"property {p.dimension}={p.value} ({p.modality}) has an empty motivation"


def _e005(lib: Library) -> Hit:
    for key, where in citation_sites(lib).items():
        if key not in lib.bibliography:
            yield key, f"unresolved BibTeX key cited by {', '.join(where)}"


def _e006(lib: Library) -> Hit:
    for frag in lib.fragments.values():
        for p in frag.properties:
            dim = lib.dimensions.get(p.dimension)
            if dim is None:
                yield frag.id, f"property uses unknown dimension {p.dimension}"
            elif p.value not in dim.value_ids:
                yield frag.id, f"value {p.value} does not belong to dimension {p.dimension}"


def _e007(lib: Library) -> Hit:
    for dim in lib.dimensions.values():
        if not dim.mandatory_for:
            yield dim.id, f"dimension {dim.id} is not mandatory for any fragment kind"


def missing_mandatory(lib: Library) -> Iterator[tuple[str, str]]:
    """Yield ``(fragment id, dimension id)`` for every uncovered mandatory dimension."""
    for frag in lib.fragments.values():
        covered = {p.dimension for p in frag.properties}
        for dim in lib.dimensions.values():
            if frag.kind in dim.mandatory_for and dim.id not in covered:
                yield frag.id, dim.id


def _e008(lib: Library) -> Hit:
    for fid, did in missing_mandatory(lib):
        kind = lib.fragments[fid].kind
        yield fid, f"missing mandatory dimension {did} (required for kind {kind})"


def _e009(lib: Library) -> Hit:
    for view in lib.fragments.values():
        if view.kind is not FragmentKind.VIEW or view.partial:
            continue
        partial_models = sorted(
            mid
            for mid in set(view.comprises)
            if (m := lib.fragments.get(mid)) is not None and m.kind is FragmentKind.MODEL and m.partial
        )
        if partial_models:
            yield view.id, f"view {view.id} contains partial model(s) {', '.join(partial_models)} but is not partial"


def _e010(lib: Library) -> Hit:
    for frag in lib.fragments.values():
        if frag.kind is not FragmentKind.MODEL_RELATION or frag.relation is None:
            continue
        rel = frag.relation
        for end, mid in (("from", rel.source), ("to", rel.target)):
            other = lib.fragments.get(mid)
            if other is None:
                yield frag.id, f"relation {end} endpoint {mid} does not exist"
            elif other.kind is not FragmentKind.MODEL:
                yield frag.id, f"relation {end} endpoint {mid} is a {other.kind}, not a model"
        rtype = lib.fragments.get(rel.relation_type)
        if rtype is None:
            yield frag.id, f"relation type {rel.relation_type} does not exist"
        elif rtype.kind is not FragmentKind.MODEL_RELATION_TYPE:
            yield frag.id, f"relation type {rel.relation_type} is a {rtype.kind}, not a model-relation-type"


def _e011(lib: Library) -> Hit:
    for frag in lib.fragments.values():
        if not frag.properties:
            yield frag.id, f"fragment {frag.id} has no characterization properties"


def _e012(lib: Library) -> Hit:
    for vp in lib.fragments.values():
        if vp.kind is not FragmentKind.VIEWPOINT:
            continue
        techniques = [
            t for t in vp.comprises
            if (f := lib.fragments.get(t)) is not None and f.kind is FragmentKind.WAY_OF_MODELING
        ]
        if not techniques:
            yield vp.id, f"viewpoint {vp.id} comprises no technique"


def _e013(lib: Library) -> Hit:
    for dim in lib.dimensions.values():
        if not dim.method.text.strip():
            yield dim.id, f"dimension {dim.id} has no characterization method text"


def _w101(lib: Library) -> Hit:
    for frag in lib.fragments.values():
        for did in sorted({p.dimension for p in frag.properties if p.modality is Modality.INTENDED}):
            extra = frag.values_on(did, Modality.INTENDED) - frag.values_on(did, Modality.SUITABLE)
            if extra:
                yield frag.id, f"intended value(s) {', '.join(sorted(extra))} on {did} not marked suitable"


@dataclass(frozen=True)
class Rule:
    code: str
    severity: Severity
    description: str
    check: Callable[[Library], Hit]


RULES: tuple[Rule, ...] = (
    Rule("E001", Severity.ERROR, "every method fragment has at least one description document", _e001),
    Rule("E002", Severity.ERROR, "every dimension has at least one dimension-description document", _e002),
    Rule("E003", Severity.ERROR, "document precedence chains are acyclic", _e003),
    Rule("E004", Severity.ERROR, "every characterization property has a non-empty motivation", _e004),
    Rule("E005", Severity.ERROR, "every cited BibTeX key resolves to a publication", _e005),
    Rule("E006", Severity.ERROR, "every property value belongs to its dimension", _e006),
    Rule("E007", Severity.ERROR, "every dimension is mandatory for at least one fragment kind", _e007),
    Rule("E008", Severity.ERROR, "every fragment carries each dimension mandatory for its kind", _e008),
    Rule("E009", Severity.ERROR, "a view containing a partial model is itself partial", _e009),
    Rule("E010", Severity.ERROR, "model relations join existing models via a registered relation type", _e010),
    Rule("E011", Severity.ERROR, "every method fragment has at least one characterization property", _e011),
    Rule("E012", Severity.ERROR, "every viewpoint comprises at least one technique", _e012),
    Rule("E013", Severity.ERROR, "every dimension has a characterization method text", _e013),
    Rule("W101", Severity.WARNING, "intended values are a subset of suitable values per dimension", _w101),
)
_RULES_BY_CODE = {r.code: r for r in RULES}


def rule_catalog() -> list[tuple[str, Severity, str]]:
    return [(r.code, r.severity, r.description) for r in RULES]


def _run(lib: Library, rules, profile: Profile) -> list[ValidationFinding]:
    findings = []
    for rule in rules:
        severity = Severity.WARNING if rule.code in profile.downgrades else rule.severity
        for subject, message in rule.check(lib):
            findings.append(ValidationFinding(rule.code, severity, subject, message))
    findings.sort(key=lambda f: (f.code, f.subject, f.message))
    return findings


def validate(lib: Library, profile: Profile = STRICT) -> list[ValidationFinding]:
    return _run(lib, RULES, profile)


def check_partiality(lib: Library, profile: Profile = STRICT) -> list[ValidationFinding]:
    return _run(lib, [_RULES_BY_CODE["E009"]], profile)


def has_errors(findings) -> bool:
    return any(f.severity is Severity.ERROR for f in findings)

