"""Shared fixtures, hypothesis strategies, and the acceptance summary hook."""

from __future__ import annotations

import pytest
from hypothesis import settings, strategies as st

from mrmbench.terms import HyperFact, Iri, Literal

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


# -- strategies -------------------------------------------------------------

_ENTITIES = [Iri(f"e{i}") for i in range(24)]
_BASE_RELS = [Iri(f"r{i}") for i in range(5)]
_QUAL_RELS = [Iri(f"q{i}") for i in range(5)]


@st.composite
def hyperfacts(draw, min_quals: int = 0, max_quals: int = 3):
    s = draw(st.sampled_from(_ENTITIES))
    p = draw(st.sampled_from(_BASE_RELS))
    o = draw(st.sampled_from(_ENTITIES))
    n_q = draw(st.integers(min_quals, max_quals))
    pairs = draw(
        st.lists(
            st.tuples(st.sampled_from(_QUAL_RELS), st.sampled_from(_ENTITIES)),
            min_size=n_q,
            max_size=n_q,
            unique=True,
        )
    )
    return HyperFact(s, p, o, tuple(pairs))


@st.composite
def hyperfact_lists(draw, min_size: int = 1, max_size: int = 12, min_quals: int = 0):
    """Fact lists with pairwise-distinct (s, p, o); base and qualifier relation
    pools are disjoint (matches the datasets this task targets)."""
    facts = draw(st.lists(hyperfacts(min_quals=min_quals), min_size=min_size, max_size=max_size))
    seen = set()
    unique = []
    for f in facts:
        key = (f.s, f.p, f.o)
        if key not in seen:
            seen.add(key)
            unique.append(f)
    return unique


_LITERALS = [
    Literal("plain"),
    Literal("two words"),
    Literal("quote \" inside"),
    Literal("tab\tand\nnewline"),
    Literal("hello", "en"),
    Literal("105"),
]


@st.composite
def rich_hyperfact_lists(draw, min_size: int = 1, max_size: int = 8):
    """Like hyperfact_lists but qualifier values may be literals."""
    base = draw(hyperfact_lists(min_size=min_size, max_size=max_size))
    out = []
    for f in base:
        quals = []
        for qr, qv in f.qualifiers:
            if draw(st.booleans()):
                quals.append((qr, draw(st.sampled_from(_LITERALS))))
            else:
                quals.append((qr, qv))
        out.append(HyperFact(f.s, f.p, f.o, tuple(quals)))
    return out


# -- shared documents --------------------------------------------------------

WD_QUALIFIER_ROW = "Q1968853,P166,Q3703462,P1346,Q55245"

WD_QUALIFIER_DOC = "<< <Q1968853> <P166> <Q3703462> >> <P1346> <Q55245> .\n"

STORY_PREFIXES = """\
@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix d: <http://example.org/story/> .
@prefix p: <http://example.org/predicate/> .
"""

# three chained scenes: 105 cares, 106 says (about 107), 107 has-property
STORY_REF_DOC = STORY_PREFIXES + """\
d:105 kgc:source "The young man was caring for an elderly man"@en ;
  rdf:type kgc:Situation ;
  kgc:hasPredicate p:care ;
  kgc:subject d:Young_man ;
  kgc:then d:106 ;
  kgc:what d:Elderly_man .
d:106 rdf:type kgc:Situation ;
  kgc:hasPredicate p:say ;
  kgc:subject d:Young_man ;
  kgc:what d:107 .
d:107 rdf:type kgc:Situation ;
  kgc:hasPredicate p:hasProperty ;
  kgc:subject d:Elderly_man ;
  kgc:what p:equalTo .
"""

NESTED_STAR_DOC = """\
@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix d: <http://example.org/story/> .
@prefix p: <http://example.org/predicate/> .
<< << d:Young_man p:care d:Elderly_man >> rdf:value "http://example.org/story/105" >>
  rdf:type kgc:Situation ;
  kgc:source "The young man was caring for an elderly man"@en ;
  kgc:then << << d:Young_man p:say << << d:Elderly_man p:hasProperty p:equalTo >> rdf:value "http://example.org/story/107" >> >> rdf:value "http://example.org/story/106" >> .
"""


@pytest.fixture
def wd_fact():
    from mrmbench.rdfio.wd50k import parse_wd50k_row

    return parse_wd50k_row(WD_QUALIFIER_ROW)


# -- acceptance summary -------------------------------------------------------

_acceptance_results: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criterion check")
    config.addinivalue_line("markers", "slow: long-running end-to-end check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and (rep.when == "call" or (rep.when == "setup" and rep.outcome == "skipped")):
        label = marker.kwargs.get("label", item.name)
        _acceptance_results[label] = rep.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label in sorted(_acceptance_results):
        outcome = _acceptance_results[label]
        word = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome)
        terminalreporter.write_line(f"{label}: {word}")
