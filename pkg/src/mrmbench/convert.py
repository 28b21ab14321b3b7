"""Hyper-fact conversions into the three metadata representation models.

REF reifies each fact as a statement node carrying rdf:subject/predicate/
object plus its qualifiers (3 + n triples, +1 with an explicit type). SGP
mints a per-fact singleton property p#k that carries the qualifiers
(2 + n triples). RDR quotes the base triple and attaches qualifiers to the
quoted triple (n triples, or the plain triple when there are none).
`extract_hyperfacts` inverts each conversion.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import ConversionError, ExtractionError
from .graph import Graph
from .terms import BlankNode, HyperFact, Iri, Literal, QtRef, Term, Triple
from .vocab import (
    RDF_OBJECT,
    RDF_PREDICATE,
    RDF_STATEMENT,
    RDF_SUBJECT,
    RDF_TYPE,
    REF_RESERVED,
    SINGLETON_PROPERTY_OF,
)

MRMS = ("REF", "SGP", "RDR")


def _term_fingerprint(term: Term) -> str:
    if isinstance(term, Iri):
        return f"i:{term.text}"
    if isinstance(term, BlankNode):
        return f"b:{term.label}"
    if isinstance(term, Literal):
        return f"l:{term.lexical}@{term.lang or ''}"
    raise ConversionError(f"cannot fingerprint term {term!r}")


def fact_fingerprint(fact: HyperFact) -> str:
    parts = [_term_fingerprint(fact.s), _term_fingerprint(fact.p), _term_fingerprint(fact.o)]
    for qr, qv in fact.qualifiers:
        parts.append(_term_fingerprint(qr))
        parts.append(_term_fingerprint(qv))
    return "\x1f".join(parts)


@dataclass(frozen=True)
class RefStatementId:
    """Skolem label from the fact content hash plus per-content occurrence index."""

    label: str

    @classmethod
    def for_fact(cls, fact: HyperFact, occurrence: int) -> "RefStatementId":
        digest = hashlib.sha256(
            f"{fact_fingerprint(fact)}\x1e{occurrence}".encode("utf-8")
        ).hexdigest()
        return cls("B" + digest[:32])

    @property
    def node(self) -> BlankNode:
        return BlankNode(self.label)


@dataclass(frozen=True)
class SingletonPropertyId:
    """Base predicate specialized by a 1-based per-predicate counter."""

    base: Iri
    k: int
    separator: str = "#"

    @property
    def iri(self) -> Iri:
        return Iri(f"{self.base.text}{self.separator}{self.k}")


def _check_fact_vocab(fact: HyperFact, mrm: str) -> None:
    if mrm == "REF":
        bad = [qr for qr, _ in fact.qualifiers if qr in REF_RESERVED]
        if fact.p in REF_RESERVED:
            bad.append(fact.p)
        if bad:
            raise ConversionError(
                f"qualifier/base relations collide with reification vocabulary: {bad!r}"
            )
        for qr, qv in fact.qualifiers:
            if qr == RDF_TYPE and qv == RDF_STATEMENT:
                raise ConversionError("qualifier (rdf:type, rdf:Statement) is ambiguous in REF")
    if mrm == "SGP":
        if fact.p == SINGLETON_PROPERTY_OF or any(
            qr == SINGLETON_PROPERTY_OF for qr, _ in fact.qualifiers
        ):
            raise ConversionError("singletonPropertyOf cannot be used as a data relation")


def to_ref(fact: HyperFact, statement: RefStatementId, emit_type: bool = False) -> list[Triple]:
    """Reify one fact; triple count is 3 + |qualifiers| (+1 with emit_type)."""
    _check_fact_vocab(fact, "REF")
    st = statement.node
    triples = []
    if emit_type:
        triples.append(Triple(st, RDF_TYPE, RDF_STATEMENT))
    triples.append(Triple(st, RDF_SUBJECT, fact.s))
    triples.append(Triple(st, RDF_PREDICATE, fact.p))
    triples.append(Triple(st, RDF_OBJECT, fact.o))
    triples.extend(Triple(st, qr, qv) for qr, qv in fact.qualifiers)
    return triples


def to_sgp(fact: HyperFact, sp: SingletonPropertyId) -> list[Triple]:
    """Singleton-property form; triple count is 2 + |qualifiers|."""
    _check_fact_vocab(fact, "SGP")
    sp_iri = sp.iri
    triples = [
        Triple(fact.s, sp_iri, fact.o),
        Triple(sp_iri, SINGLETON_PROPERTY_OF, fact.p),
    ]
    triples.extend(Triple(sp_iri, qr, qv) for qr, qv in fact.qualifiers)
    return triples


def to_rdr(fact: HyperFact, graph: Graph) -> list[Triple]:
    """Quote the base triple and attach qualifiers to it (shared via interning).

    Facts without qualifiers are asserted as plain triples.
    """
    if not fact.qualifiers:
        return [Triple(fact.s, fact.p, fact.o)]
    ref = QtRef(graph.intern_qt(fact.s, fact.p, fact.o))
    return [Triple(ref, qr, qv) for qr, qv in fact.qualifiers]


def facts_to_graph(
    facts: list[HyperFact],
    mrm: str,
    emit_type: bool = False,
    sp_separator: str = "#",
) -> Graph:
    """Convert a fact list into a fresh graph of the requested model."""
    if mrm not in MRMS:
        raise ConversionError(f"unknown metadata representation model {mrm!r}")
    graph = Graph(mrm=mrm)
    occurrences: dict[str, int] = {}
    sp_counters: dict[str, int] = {}
    for fact in facts:
        if mrm == "REF":
            fp = fact_fingerprint(fact)
            occ = occurrences.get(fp, 0)
            occurrences[fp] = occ + 1
            triples = to_ref(fact, RefStatementId.for_fact(fact, occ), emit_type)
        elif mrm == "SGP":
            k = sp_counters.get(fact.p.text, 0) + 1
            sp_counters[fact.p.text] = k
            triples = to_sgp(fact, SingletonPropertyId(fact.p, k, sp_separator))
        else:
            triples = to_rdr(fact, graph)
        for t in triples:
            graph.add(t)
    return graph


# -- inverse ---------------------------------------------------------------


def _single_value(graph: Graph, node: Term, predicate: Iri, node_id: str) -> Term:
    values = [t.object for t in graph.by_subject(node) if t.predicate == predicate]
    if len(values) != 1:
        raise ExtractionError(
            f"statement node {node_id} has {len(values)} values for {predicate.text}"
        )
    return values[0]


def _extract_ref(graph: Graph) -> list[HyperFact]:
    structural = {RDF_SUBJECT, RDF_PREDICATE, RDF_OBJECT}
    nodes: list[Term] = []
    seen: set[Term] = set()
    for t in graph.triples:
        if t.predicate in structural and t.subject not in seen:
            seen.add(t.subject)
            nodes.append(t.subject)
    facts = []
    consumed = 0
    for node in nodes:
        node_id = repr(node)
        s = _single_value(graph, node, RDF_SUBJECT, node_id)
        p = _single_value(graph, node, RDF_PREDICATE, node_id)
        o = _single_value(graph, node, RDF_OBJECT, node_id)
        if not isinstance(p, Iri):
            raise ExtractionError(f"statement node {node_id} has non-IRI rdf:predicate")
        quals = []
        for t in graph.by_subject(node):
            consumed += 1
            if t.predicate in structural:
                continue
            if t.predicate == RDF_TYPE and t.object == RDF_STATEMENT:
                continue
            quals.append((t.predicate, t.object))
        facts.append(HyperFact(s, p, o, tuple(quals)))
    if consumed != len(graph.triples):
        raise ExtractionError("graph holds triples not attached to any statement node")
    return facts


def _extract_sgp(graph: Graph) -> list[HyperFact]:
    sp_nodes: list[Iri] = []
    seen: set[Term] = set()
    for t in graph.triples:
        if t.predicate == SINGLETON_PROPERTY_OF and t.subject not in seen:
            if not isinstance(t.subject, Iri):
                raise ExtractionError(f"singleton property is not an IRI: {t.subject!r}")
            seen.add(t.subject)
            sp_nodes.append(t.subject)
    facts = []
    consumed = 0
    for sp in sp_nodes:
        base = _single_value(graph, sp, SINGLETON_PROPERTY_OF, sp.text)
        if not isinstance(base, Iri):
            raise ExtractionError(f"base predicate of {sp.text} is not an IRI")
        core = graph.by_predicate(sp)
        if len(core) != 1:
            raise ExtractionError(f"singleton property {sp.text} asserts {len(core)} core triples")
        consumed += 1
        quals = []
        for t in graph.by_subject(sp):
            consumed += 1
            if t.predicate == SINGLETON_PROPERTY_OF:
                continue
            quals.append((t.predicate, t.object))
        facts.append(HyperFact(core[0].subject, base, core[0].object, tuple(quals)))
    if consumed != len(graph.triples):
        raise ExtractionError("graph holds triples not attached to any singleton property")
    return facts


def _extract_rdr(graph: Graph) -> list[HyperFact]:
    order: list[tuple[str, object]] = []
    groups: dict[int, list[tuple[Iri, Term]]] = {}
    for t in graph.triples:
        if isinstance(t.subject, QtRef):
            qt_id = t.subject.qt_id
            if qt_id not in groups:
                groups[qt_id] = []
                order.append(("qt", qt_id))
            groups[qt_id].append((t.predicate, t.object))
        else:
            order.append(("plain", t))
    facts = []
    for kind, item in order:
        if kind == "plain":
            t = item
            facts.append(HyperFact(t.subject, t.predicate, t.object))
        else:
            qt = graph.qt(item)
            facts.append(HyperFact(qt.subject, qt.predicate, qt.object, tuple(groups[item])))
    return facts


def extract_hyperfacts(graph: Graph, mrm: str) -> list[HyperFact]:
    """Invert the forward conversion; facts come back in document order."""
    if mrm == "REF":
        return _extract_ref(graph)
    if mrm == "SGP":
        return _extract_sgp(graph)
    if mrm == "RDR":
        return _extract_rdr(graph)
    raise ExtractionError(f"unknown metadata representation model {mrm!r}")
