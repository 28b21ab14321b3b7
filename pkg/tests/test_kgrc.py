import pytest

from mrmbench.errors import UnresolvedReferenceError
from mrmbench.graph import Graph
from mrmbench.kgrc import KGC_THEN, ObjectPriority, kgrc_to_rdr, kgrc_to_sgp
from mrmbench.rdfio import parse_turtle_star
from mrmbench.terms import Iri, Literal, QtRef, Triple
from mrmbench.vocab import (
    KGC_HAS_PREDICATE,
    KGC_NS,
    KGC_SUBJECT,
    RDF_TYPE,
    RDF_VALUE,
    SINGLETON_PROPERTY_OF,
)

from conftest import STORY_PREFIXES, STORY_REF_DOC

D = "http://example.org/story/"
P = "http://example.org/predicate/"
SITUATION = Iri(KGC_NS + "Situation")
WHAT = Iri(KGC_NS + "what")
WHERE = Iri(KGC_NS + "where")
FROM = Iri(KGC_NS + "from")
SOURCE = Iri(KGC_NS + "source")


@pytest.fixture
def story_graph():
    return parse_turtle_star(STORY_REF_DOC)


def test_sgp_conversion_structure(story_graph):
    out, skipped = kgrc_to_sgp(story_graph)
    assert skipped == []
    care1 = Iri(P + "care-1")
    assert Triple(Iri(D + "Young_man"), care1, Iri(D + "Elderly_man")) in out
    assert Triple(care1, SINGLETON_PROPERTY_OF, Iri(P + "care")) in out
    assert Triple(care1, RDF_TYPE, SITUATION) in out
    # the chain target is rewritten to the successor's singleton property
    assert Triple(care1, KGC_THEN, Iri(P + "say-1")) in out
    # consumed role triples are gone; structural relations are gone
    assert all(t.predicate not in (WHAT, KGC_SUBJECT, KGC_HAS_PREDICATE) for t in out.triples)
    # statement-valued role: say-1's object is 107's singleton property
    say1 = Iri(P + "say-1")
    core = [t for t in out.triples if t.predicate == say1]
    assert core == [Triple(Iri(D + "Young_man"), say1, Iri(P + "hasProperty-1"))]


def test_object_priority_prefers_what_over_where():
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:move ; kgc:subject d:A ; "
        "kgc:where d:Yard ; kgc:what d:Ball .\n"
    )
    out, _ = kgrc_to_sgp(parse_turtle_star(doc))
    move1 = Iri(P + "move-1")
    assert Triple(Iri(D + "A"), move1, Iri(D + "Ball")) in out
    # the unused role is retained as metadata on the triple entity
    assert Triple(move1, WHERE, Iri(D + "Yard")) in out


def test_object_priority_single_candidate():
    doc = STORY_PREFIXES + "d:1 kgc:hasPredicate p:move ; kgc:subject d:A ; kgc:from d:Home .\n"
    out, _ = kgrc_to_sgp(parse_turtle_star(doc))
    assert Triple(Iri(D + "A"), Iri(P + "move-1"), Iri(D + "Home")) in out


def test_custom_priority_order():
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:move ; kgc:subject d:A ; "
        "kgc:where d:Yard ; kgc:what d:Ball .\n"
    )
    priority = ObjectPriority((WHERE, WHAT))
    out, _ = kgrc_to_sgp(parse_turtle_star(doc), priority)
    assert Triple(Iri(D + "A"), Iri(P + "move-1"), Iri(D + "Yard")) in out


def test_skip_list_passes_statement_through():
    doc = STORY_PREFIXES + "d:1 kgc:subject d:A ; kgc:what d:B .\n"
    graph = parse_turtle_star(doc)
    out, skipped = kgrc_to_sgp(graph)
    assert [reason for _, reason in skipped] == ["missing kgc:hasPredicate"]
    assert set(out.triples) == set(graph.triples)


def test_skip_list_when_no_role_present():
    doc = STORY_PREFIXES + "d:1 kgc:subject d:A ; kgc:hasPredicate p:move .\n"
    _out, skipped = kgrc_to_sgp(parse_turtle_star(doc))
    assert [reason for _, reason in skipped] == ["no priority role present"]


def test_rdr_wraps_with_identifier_literal(story_graph):
    out, skipped = kgrc_to_rdr(story_graph)
    assert skipped == []
    inner_id = out.lookup_qt(Iri(D + "Young_man"), Iri(P + "care"), Iri(D + "Elderly_man"))
    assert inner_id is not None
    wrapper_id = out.lookup_qt(QtRef(inner_id), RDF_VALUE, Literal(D + "105"))
    assert wrapper_id is not None
    wrapper = QtRef(wrapper_id)
    assert Triple(wrapper, RDF_TYPE, SITUATION) in out
    source = [t for t in out.triples if t.subject == wrapper and t.predicate == SOURCE]
    assert source and source[0].object.lang == "en"


def test_rdr_then_targets_wrapped_successor(story_graph):
    out, _ = kgrc_to_rdr(story_graph)
    then = [t for t in out.triples if t.predicate == KGC_THEN]
    assert len(then) == 1
    successor = out.resolve(then[0].object)
    assert successor is not None and successor.predicate == RDF_VALUE
    assert successor.object == Literal(D + "106")
    # statement-valued role nests: 106's inner object is 107's wrapper
    inner_106 = out.resolve(successor.subject)
    w107 = inner_106.object
    assert out.resolve(w107).object == Literal(D + "107")


def test_rdr_nesting_depth_at_least_two(story_graph):
    out, _ = kgrc_to_rdr(story_graph)

    def depth(term):
        qt = out.resolve(term)
        if qt is None:
            return 0
        return 1 + max(depth(qt.subject), depth(qt.object))

    assert max(depth(QtRef(i)) for i in out.qt_table) >= 2


def test_rdr_on_collision_no_wrappers_when_distinct(story_graph):
    out, _ = kgrc_to_rdr(story_graph, wrap="on-collision")
    assert all(qt.predicate != RDF_VALUE for qt in out.qt_table.values())


def test_rdr_on_collision_wraps_colliding_statements():
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B ; kgc:source \"x\" .\n"
        "d:2 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B ; kgc:source \"y\" .\n"
        "d:3 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:C ; kgc:source \"z\" .\n"
    )
    out, _ = kgrc_to_rdr(parse_turtle_star(doc), wrap="on-collision")
    wrappers = [qt for qt in out.qt_table.values() if qt.predicate == RDF_VALUE]
    assert {qt.object for qt in wrappers} == {Literal(D + "1"), Literal(D + "2")}
    # the non-colliding statement stays unwrapped
    unwrapped = out.lookup_qt(Iri(D + "A"), Iri(P + "care"), Iri(D + "C"))
    assert unwrapped is not None


def test_rdr_dangling_then_error():
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B ; kgc:then d:404 .\n"
    )
    with pytest.raises(UnresolvedReferenceError) as err:
        kgrc_to_rdr(parse_turtle_star(doc))
    assert D + "404" in err.value.identifiers


def test_sgp_keeps_plain_then_target_untouched():
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B ; kgc:then d:404 .\n"
    )
    out, _ = kgrc_to_sgp(parse_turtle_star(doc))
    assert Triple(Iri(P + "care-1"), KGC_THEN, Iri(D + "404")) in out


def test_passthrough_objects_rewritten_to_statement_identity():
    doc = STORY_REF_DOC + "d:Clue p:mentionedIn d:105 .\n"
    sgp, _ = kgrc_to_sgp(parse_turtle_star(doc))
    assert Triple(Iri(D + "Clue"), Iri(P + "mentionedIn"), Iri(P + "care-1")) in sgp
    rdr, _ = kgrc_to_rdr(parse_turtle_star(doc))
    mention = [t for t in rdr.triples if t.predicate == Iri(P + "mentionedIn")]
    assert len(mention) == 1 and isinstance(mention[0].object, QtRef)


def test_multiple_role_values_take_first(story_graph, caplog):
    doc = STORY_PREFIXES + (
        "d:1 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B ; kgc:what d:C .\n"
    )
    with caplog.at_level("WARNING"):
        out, _ = kgrc_to_sgp(parse_turtle_star(doc))
    assert Triple(Iri(D + "A"), Iri(P + "care-1"), Iri(D + "B")) in out
    assert any("values for" in rec.message for rec in caplog.records)


def test_statement_without_metadata_asserts_content():
    doc = STORY_PREFIXES + "d:1 kgc:hasPredicate p:care ; kgc:subject d:A ; kgc:what d:B .\n"
    out, _ = kgrc_to_rdr(parse_turtle_star(doc), wrap="on-collision")
    assert Triple(Iri(D + "A"), Iri(P + "care"), Iri(D + "B")) in out


def test_cycle_detection():
    g = Graph()
    a, b = Iri(D + "1"), Iri(D + "2")
    for node, other in ((a, b), (b, a)):
        g.add(Triple(node, KGC_HAS_PREDICATE, Iri(P + "see")))
        g.add(Triple(node, KGC_SUBJECT, Iri(D + "X")))
        g.add(Triple(node, WHAT, other))
    from mrmbench.errors import ConversionError

    with pytest.raises(ConversionError, match="cyclic"):
        kgrc_to_rdr(g)
