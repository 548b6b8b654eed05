"""Conjunctive fragment queries and curation reports.

Query grammar (clauses separated by whitespace, all must hold)::

    type=<kind>                      kind or alias (approach, technique)
    <modality>:<dimension>=<value>   modality is intended, suitable or any
    partial=true|false               only model and view fragments match

Reports: per-fragment coverage of mandatory dimensions, and pairwise
Cramér's V between dimensions to spot dimensions that are not orthogonal.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence, Union

from fragforge.errors import DegenerateTable, QuerySyntaxError, UnknownDimension, UnknownKind, UnknownValue
from fragforge.model import FragmentKind, Library, MethodFragment, Modality, is_id

DEFAULT_THRESHOLD = 0.8
QUERY_MODALITIES = ("intended", "suitable", "any")

_TOKEN_RE = re.compile(r"\S+")
_DIM_CLAUSE_RE = re.compile(r"(?P<modality>[^:=]*):(?P<dimension>[^=]*)=(?P<value>.*)\Z")


@dataclass(frozen=True)
class TypeClause:
    kind: FragmentKind

    def matches(self, frag: MethodFragment) -> bool:
        return frag.kind is self.kind


@dataclass(frozen=True)
class DimClause:
    modality: str
    dimension: str
    value: str

    def matches(self, frag: MethodFragment) -> bool:
        modality = None if self.modality == "any" else Modality(self.modality)
        return self.value in frag.values_on(self.dimension, modality)


@dataclass(frozen=True)
class PartialClause:
    flag: bool

    def matches(self, frag: MethodFragment) -> bool:
        return frag.partial is self.flag


Clause = Union[TypeClause, DimClause, PartialClause]


@dataclass(frozen=True)
class Query:
    clauses: tuple[Clause, ...] = ()


def parse_query(text: str) -> Query:
    clauses: list[Clause] = []
    for m in _TOKEN_RE.finditer(text):
        token, col = m.group(0), m.start() + 1
        if token.startswith("type="):
            kind = token[5:]
            if not kind:
                raise QuerySyntaxError("missing kind after 'type='", col + 5)
            try:
                clauses.append(TypeClause(FragmentKind.parse(kind)))
            except UnknownKind:
                raise UnknownKind(kind, col + 5) from None
        elif token.startswith("partial="):
            flag = token[8:]
            if flag not in ("true", "false"):
                raise QuerySyntaxError(f"partial= expects true or false, got {flag!r}", col + 8)
            clauses.append(PartialClause(flag == "true"))
        elif (dm := _DIM_CLAUSE_RE.match(token)) is not None:
            modality = dm.group("modality")
            if modality not in QUERY_MODALITIES:
                raise QuerySyntaxError(f"unknown modality {modality!r}; expected intended, suitable or any", col)
            for part in ("dimension", "value"):
                if not is_id(dm.group(part)):
                    raise QuerySyntaxError(f"invalid {part} id {dm.group(part)!r}", col + dm.start(part))
            clauses.append(DimClause(modality, dm.group("dimension"), dm.group("value")))
        else:
            raise QuerySyntaxError(
                f"cannot parse clause {token!r}; expected type=K, partial=B or MODALITY:DIM=VALUE", col
            )
    return Query(tuple(clauses))


def eval_query(lib: Library, q: Query) -> list[str]:
    for clause in q.clauses:
        if isinstance(clause, DimClause):
            dim = lib.dimensions.get(clause.dimension)
            if dim is None:
                raise UnknownDimension(f"unknown dimension {clause.dimension!r}")
            if clause.value not in dim.value_ids:
                raise UnknownValue(f"{clause.value!r} is not a value of dimension {dim.id!r}")
    return sorted(fid for fid, frag in lib.fragments.items() if all(c.matches(frag) for c in q.clauses))


def coverage_report(lib: Library) -> list[tuple[str, list[str]]]:
    """Fragments lacking properties on dimensions mandatory for their kind."""
    report = []
    for fid in sorted(lib.fragments):
        frag = lib.fragments[fid]
        carried = {p.dimension for p in frag.properties}
        missing = sorted(
            did for did, dim in lib.dimensions.items() if frag.kind in dim.mandatory_for and did not in carried
        )
        if missing:
            report.append((fid, missing))
    return report


@dataclass(frozen=True)
class ContingencyTable:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        counts = tuple(tuple(int(c) for c in row) for row in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != len(self.rows) or any(len(r) != len(self.cols) for r in counts):
            raise ValueError("counts shape does not match row and column labels")
        if any(c < 0 for r in counts for c in r):
            raise ValueError("counts must be non-negative")

    @property
    def n(self) -> int:
        return sum(map(sum, self.counts))

    @classmethod
    def from_counts(cls, counts: Sequence[Sequence[int]]) -> ContingencyTable:
        counts = [list(r) for r in counts]
        ncols = len(counts[0]) if counts else 0
        return cls(tuple(f"r{i}" for i in range(len(counts))), tuple(f"c{j}" for j in range(ncols)), counts)


def cramers_v(t: ContingencyTable | Sequence[Sequence[int]]) -> float:
    """Cramér's V of a contingency table, without bias correction.

    All-zero rows and columns are dropped first; fewer than two remaining
    rows or columns raises DegenerateTable. The Pearson statistic is
    accumulated exactly in rationals so the result is symmetric under
    transposition and exact for exact cases.
    """
    if not isinstance(t, ContingencyTable):
        t = ContingencyTable.from_counts(t)
    rows = [r for r in t.counts if any(r)]
    col_keep = [j for j in range(len(t.cols)) if any(r[j] for r in rows)]
    table = [[r[j] for j in col_keep] for r in rows]
    if len(table) < 2 or len(col_keep) < 2:
        raise DegenerateTable(
            f"need at least 2 non-empty rows and columns, got {len(table)}x{len(col_keep)}"
        )
    row_sums = [sum(r) for r in table]
    col_sums = [sum(c) for c in zip(*table)]
    n = sum(row_sums)
    chi2 = Fraction(0)
    for i, r in enumerate(table):
        for j, observed in enumerate(r):
            expected = Fraction(row_sums[i] * col_sums[j], n)
            chi2 += (observed - expected) ** 2 / expected
    k = min(len(table), len(col_keep)) - 1
    return math.sqrt(chi2 / n / k)


def contingency_table(lib: Library, dim_a: str, dim_b: str) -> ContingencyTable:
    """Cross-tabulate value co-occurrence over fragments characterized on both dimensions.

    Modality is ignored; a fragment with several values on either dimension
    contributes one count per value pair.
    """
    a, b = lib.dimensions[dim_a], lib.dimensions[dim_b]
    a_ids, b_ids = a.value_ids, b.value_ids
    cells: Counter = Counter()
    for frag in lib.fragments.values():
        va = frag.values_on(dim_a) & set(a_ids)
        vb = frag.values_on(dim_b) & set(b_ids)
        cells.update(product(va, vb))
    return ContingencyTable(a_ids, b_ids, [[cells[(x, y)] for y in b_ids] for x in a_ids])


def orthogonality_report(lib: Library, threshold: float = DEFAULT_THRESHOLD) -> list[tuple[str, str, float]]:
    """Dimension pairs whose Cramér's V reaches ``threshold``, strongest first."""
    if not 0 <= threshold <= 1:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    report = []
    for dim_a, dim_b in combinations(sorted(lib.dimensions), 2):
        try:
            v = cramers_v(contingency_table(lib, dim_a, dim_b))
        except DegenerateTable:
            continue
        if v >= threshold:
            report.append((dim_a, dim_b, v))
    report.sort(key=lambda r: (-r[2], r[0], r[1]))
    return report


def stats_report(lib: Library) -> list[tuple[str, int]]:
    """Record counts by category, in a fixed order."""
    rows = [("fragments", len(lib.fragments))]
    kinds = Counter(f.kind for f in lib.fragments.values())
    rows += [(f"fragments.{k.value}", kinds[k]) for k in FragmentKind if kinds[k]]
    rows.append(("dimensions", len(lib.dimensions)))
    classes = Counter(d.dimension_class.value for d in lib.dimensions.values())
    rows += [(f"dimensions.{c}", classes[c]) for c in ("why", "what", "how") if classes[c]]
    rows.append(("properties", sum(len(f.properties) for f in lib.fragments.values())))
    rows.append(("documents", len(lib.documents)))
    doc_kinds = Counter(d.kind.value for d in lib.documents.values())
    rows += [(f"documents.{k}", doc_kinds[k]) for k in ("base", "description", "dimension-description") if doc_kinds[k]]
    rows.append(("publications", len(lib.bibliography)))
    return rows
