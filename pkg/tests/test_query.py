from collections import defaultdict
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats.contingency import association

from conftest import FIXTURES
from fragforge.constraints import validate
from fragforge.errors import DegenerateTable, QuerySyntaxError, UnknownDimension, UnknownKind, UnknownValue
from fragforge.model import FragmentKind, Library, MethodFragment, add_fragment, new_library
from fragforge.query import (
    ContingencyTable,
    DimClause,
    PartialClause,
    Query,
    TypeClause,
    contingency_table,
    coverage_report,
    cramers_v,
    eval_query,
    orthogonality_report,
    parse_query,
    stats_report,
)
from fragforge.store import load_library
from strategies import libraries


@pytest.fixture(scope="module")
def corpus():
    return load_library(FIXTURES / "corpus")


class TestParse:
    def test_two_clauses(self):
        q = parse_query("type=viewpoint suitable:modeling-purpose=informing")
        assert q.clauses == (TypeClause(FragmentKind.VIEWPOINT), DimClause("suitable", "modeling-purpose", "informing"))

    @pytest.mark.parametrize("text", ["", "   ", "\t\n"])
    def test_empty(self, text):
        assert parse_query(text) == Query(())

    def test_aliases(self):
        assert parse_query("type=technique type=approach").clauses == (
            TypeClause(FragmentKind.WAY_OF_MODELING), TypeClause(FragmentKind.WAY_OF_WORKING),
        )

    def test_partial(self):
        assert parse_query("partial=false").clauses == (PartialClause(False),)

    def test_unknown_kind(self):
        with pytest.raises(UnknownKind) as info:
            parse_query("partial=true type=recipe")
        assert info.value.column == 19

    @pytest.mark.parametrize("text,column", [
        ("required:semantic-force=mixed", 1),
        ("type=model  partial=yes", 21),
        ("any:Semantic=mixed", 5),
        ("any:semantic-force=", 20),
        ("semantic-force=mixed", 1),
        ("type=", 6),
        ("type=model bogus", 12),
    ])
    def test_syntax_errors(self, text, column):
        with pytest.raises(QuerySyntaxError) as info:
            parse_query(text)
        assert info.value.column == column


class TestEval:
    def test_empty_query_returns_all(self):
        lib = Library()
        for fid in ("c", "a", "b"):
            lib = add_fragment(lib, MethodFragment(fid, "technique", fid))
        assert eval_query(lib, Query()) == ["a", "b", "c"]

    def test_suitable_mixed(self, corpus):
        assert eval_query(corpus, parse_query("suitable:semantic-force=mixed")) == ["orm", "uml"]

    def test_modalities(self, corpus):
        assert eval_query(corpus, parse_query("intended:semantic-force=prescriptive")) == ["uml"]
        assert eval_query(corpus, parse_query("suitable:semantic-force=prescriptive")) == []
        assert eval_query(corpus, parse_query("any:semantic-force=prescriptive")) == ["uml"]

    def test_partial_views(self, corpus):
        assert eval_query(corpus, parse_query("partial=true type=view")) == ["claims-view"]
        assert eval_query(corpus, parse_query("partial=true")) == ["claims-view", "insurance-reference-model"]
        assert eval_query(corpus, parse_query("partial=false")) == ["claims-case-model"]

    def test_unknown_dimension_and_value(self, corpus):
        with pytest.raises(UnknownDimension):
            eval_query(corpus, parse_query("any:colour=red"))
        with pytest.raises(UnknownValue):
            eval_query(corpus, parse_query("any:semantic-force=loud"))


class TestCoverage:
    def test_bare_fragments(self):
        lib = add_fragment(new_library(seed=True), MethodFragment("orm", "technique", "ORM"))
        lib = add_fragment(lib, MethodFragment("m", "model", "M"))
        report = dict(coverage_report(lib))
        assert len(report["orm"]) == 20
        assert report["m"] == ["modeling-purpose", "semantic-force", "type-of-information"]

    def test_fully_characterized_is_omitted(self, corpus):
        fids = [fid for fid, _ in coverage_report(corpus)]
        assert "zachman" not in fids
        assert fids == sorted(fids)

    @settings(max_examples=80, deadline=None)
    @given(libraries(plain=True))
    def test_matches_e008(self, lib):
        grouped = defaultdict(list)
        for f in validate(lib):
            if f.code == "E008":
                grouped[f.subject].append(f.message.split()[3])
        assert coverage_report(lib) == sorted((fid, sorted(dims)) for fid, dims in grouped.items())


def _scipy_v(table):
    arr = np.array(table)
    arr = arr[arr.sum(axis=1) > 0][:, arr.sum(axis=0) > 0]
    return association(arr, method="cramer", correction=False)


class TestCramersV:
    def test_anchors(self):
        assert cramers_v(ContingencyTable(("a", "b"), ("x", "y"), ((5, 0), (0, 5)))) == 1.0
        assert cramers_v([[2, 2], [2, 2]]) == 0.0
        assert cramers_v([[3, 1], [1, 3]]) == pytest.approx(0.5, abs=1e-12)

    def test_zero_rows_and_columns_dropped(self):
        assert cramers_v([[3, 0, 1], [0, 0, 0], [1, 0, 3]]) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("table", [[[1, 2]], [[1], [2]], [[0, 0], [0, 0]], [[4, 0], [0, 0]], [[3, 0], [5, 0]]])
    def test_degenerate(self, table):
        with pytest.raises(DegenerateTable):
            cramers_v(table)

    def test_bad_table(self):
        with pytest.raises(ValueError):
            ContingencyTable(("a",), ("x", "y"), ((1,),))
        with pytest.raises(ValueError):
            ContingencyTable(("a",), ("x",), ((-1,),))

    def test_n(self):
        assert ContingencyTable.from_counts([[1, 2], [3, 4]]).n == 10

    @settings(max_examples=300, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda c: st.lists(st.lists(st.integers(0, 40), min_size=c, max_size=c),
                                                        min_size=2, max_size=5)))
    def test_against_scipy_and_bounds(self, table):
        try:
            v = cramers_v(table)
        except DegenerateTable:
            return
        assert 0.0 <= v <= 1.0
        assert v == pytest.approx(_scipy_v(table), abs=1e-9)


class TestOrthogonality:
    def test_correlated_fixture(self):
        lib = load_library(FIXTURES / "correlated")
        assert orthogonality_report(lib, 0.8) == [("paradigm", "tooling", 1.0)]

    def test_single_dimension(self):
        lib = load_library(FIXTURES / "rules" / "E001" / "repaired")
        assert len(lib.dimensions) == 1
        assert orthogonality_report(lib, 0.0) == []

    def test_threshold_range(self, corpus):
        with pytest.raises(ValueError):
            orthogonality_report(corpus, 1.5)

    def test_corpus_against_independent_tables(self, corpus):
        # rebuild every table straight from the properties and score it with scipy
        expected = []
        for a, b in combinations(sorted(corpus.dimensions), 2):
            va, vb = corpus.dimensions[a].value_ids, corpus.dimensions[b].value_ids
            counts = np.zeros((len(va), len(vb)), dtype=int)
            for frag in corpus.fragments.values():
                xs = {p.value for p in frag.properties if p.dimension == a}
                ys = {p.value for p in frag.properties if p.dimension == b}
                for x in xs:
                    for y in ys:
                        counts[va.index(x), vb.index(y)] += 1
            nz = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
            if nz.shape[0] >= 2 and nz.shape[1] >= 2:
                expected.append((a, b, _scipy_v(nz)))
        got = orthogonality_report(corpus, 0.0)
        assert [(a, b) for a, b, _ in got] == [
            (a, b) for a, b, _ in sorted(expected, key=lambda r: (-round(r[2], 9), r[0], r[1]))
        ]
        by_pair = {(a, b): v for a, b, v in expected}
        for a, b, v in got:
            assert v == pytest.approx(by_pair[(a, b)], abs=1e-9)
        assert got  # the corpus has at least one scoreable pair

    def test_multi_valued_cross_product(self, corpus):
        t = contingency_table(corpus, "cognitive-approach", "formality")
        assert t.counts[t.rows.index("analytical")][t.cols.index("high")] == 1
        assert t.counts[t.rows.index("experimental")][t.cols.index("high")] == 1
        assert t.n == 2


def test_stats(corpus):
    stats = dict(stats_report(corpus))
    assert stats["fragments"] == len(corpus.fragments) == 12
    assert stats["dimensions"] == 20
    assert stats["dimensions.why"] == 3
    assert stats["publications"] == 19
    assert stats["fragments.way-of-modeling"] == 2
