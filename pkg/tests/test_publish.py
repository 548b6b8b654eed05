import html
from html.parser import HTMLParser
from pathlib import Path
from urllib.parse import unquote, urldefrag

import pytest
from hypothesis import HealthCheck, given, settings

from conftest import FIXTURES
from fragforge.errors import UnknownFragment
from fragforge.model import Library, MethodFragment, add_fragment, new_library
from fragforge.publish import publish_site, render_dimension_page, render_fragment_page, render_site
from fragforge.store import load_library
from strategies import libraries

VOID = {"meta", "link", "br", "hr", "img", "input"}


class _Balance(HTMLParser):
    def __init__(self):
        super().__init__()
        self.stack, self.errors, self.hrefs, self.ids = [], [], [], set()

    def handle_starttag(self, tag, attrs):
        attrs = dict(attrs)
        if "href" in attrs:
            self.hrefs.append(attrs["href"])
        if "id" in attrs:
            self.ids.add(attrs["id"])
        if tag not in VOID:
            self.stack.append(tag)

    def handle_endtag(self, tag):
        if not self.stack or self.stack[-1] != tag:
            self.errors.append(f"unexpected </{tag}> with open {self.stack}")
        else:
            self.stack.pop()


def check(page_html: str) -> _Balance:
    p = _Balance()
    p.feed(page_html)
    p.close()
    assert p.errors == [] and p.stack == [], (p.errors, p.stack)
    return p


@pytest.fixture(scope="module")
def corpus():
    return load_library(FIXTURES / "corpus")


def test_zachman_page(corpus):
    page = render_fragment_page(corpus, "zachman")
    assert page.path == "fragments/zachman.html"
    assert "<h1>Zachman framework</h1>" in page.html
    assert 'href="../_styles/main.css"' in page.html
    assert 'href="../bib.html#1987-Zachman-ISA"' in page.html
    assert 'href="../fragments/zachman-data-what.html"' in page.html
    assert 'href="../dimensions/modeling-purpose.html"' in page.html
    check(page.html)


def test_zero_properties():
    lib = add_fragment(Library(), MethodFragment("bare", "way-of-thinking", "Bare"))
    page = render_fragment_page(lib, "bare")
    assert "<h1>Bare</h1>" in page.html
    assert page.html.count("None recorded.") == 3
    check(page.html)


def test_unknown_fragment(corpus):
    with pytest.raises(UnknownFragment):
        render_fragment_page(corpus, "nope")


def test_escaping(corpus):
    page = render_fragment_page(corpus, "systems-thinking")
    assert "<h1>Systems &lt;thinking&gt; &amp; &#34;work&#34; systems</h1>" in page.html
    assert "<thinking>" not in page.html
    index = render_site(corpus)
    assert all("<thinking>" not in p.html for p in index)


def test_dangling_references_are_not_links():
    lib = Library(fragments={
        "vp": MethodFragment("vp", "viewpoint", "VP", comprises=("ghost",)),
    })
    page = render_fragment_page(lib, "vp")
    assert "ghost.html" not in page.html
    assert '<span class="dangling">ghost (missing)</span>' in page.html


def test_relation_and_part_of(corpus):
    rel = render_fragment_page(corpus, "claims-specializes-insurance").html
    assert 'href="../fragments/claims-case-model.html"' in rel
    assert 'href="../fragments/specialization.html"' in rel
    part = render_fragment_page(corpus, "orm").html
    assert 'href="../fragments/information-viewpoint.html"' in part


def test_dimension_page(corpus):
    page = render_dimension_page(corpus, "semantic-force")
    parsed = check(page.html)
    assert {"value-prescriptive", "value-descriptive", "value-mixed"} <= parsed.ids
    assert 'href="../fragments/uml.html"' in page.html


def test_empty_site(tmp_path):
    assert publish_site(new_library(), tmp_path) == ["_styles/main.css", "bib.html", "index.html"]


def test_seeded_site(tmp_path):
    paths = publish_site(new_library(seed=True), tmp_path)
    assert len(paths) == 3 + 20
    assert paths == sorted(paths)


def test_stale_pages_removed(tmp_path, corpus):
    publish_site(corpus, tmp_path)
    (tmp_path / "notes.txt").write_text("keep")
    publish_site(new_library(), tmp_path)
    assert list((tmp_path / "fragments").glob("*.html")) == []
    assert (tmp_path / "notes.txt").exists()


def crawl(root: Path, paths):
    for rel in paths:
        if not rel.endswith(".html"):
            continue
        parsed = check((root / rel).read_text(encoding="utf-8"))
        for href in parsed.hrefs:
            target, anchor = urldefrag(href)
            dest = ((root / rel).parent / unquote(target)).resolve() if target else (root / rel).resolve()
            assert dest.is_file(), f"{rel} -> {href}"
            if anchor:
                assert html.unescape(unquote(anchor)) in check(dest.read_text(encoding="utf-8")).ids


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(libraries())
def test_random_libraries_publish_crawlable(tmp_path_factory, lib):
    out = tmp_path_factory.mktemp("site")
    paths = publish_site(lib, out)
    assert len(paths) == 3 + len(lib.fragments) + len(lib.dimensions)
    crawl(out, paths)
