"""Conversions for KGRC-style event graphs (statement nodes with 5W1H roles).

Input graphs are reification-style: statement nodes carrying kgc:subject,
kgc:hasPredicate, role properties (what/whom/where/on/to/from) and free
metadata. The SGP conversion mints `<pred>-k` singleton properties; the RDR
conversion builds quoted triples, wrapping each in an identifier-bearing
quoted triple (`rdf:value "<statement iri>"`) so that statements sharing one
(s, p, o) stay distinguishable. References to other statement nodes (e.g.
kgc:then chains, statement-valued roles) are rewritten to the referenced
statement's new identity, which produces the nested structures.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ConversionError, UnresolvedReferenceError
from .graph import Graph
from .terms import BlankNode, Iri, Literal, QtRef, Term, Triple
from .vocab import (
    DEFAULT_OBJECT_PRIORITY,
    KGC_HAS_PREDICATE,
    KGC_NS,
    KGC_SUBJECT,
    RDF_VALUE,
    SINGLETON_PROPERTY_OF,
)

log = logging.getLogger(__name__)

KGC_THEN = Iri(KGC_NS + "then")


@dataclass(frozen=True)
class ObjectPriority:
    """Role relations ordered from highest to lowest selection priority."""

    roles: tuple[Iri, ...] = DEFAULT_OBJECT_PRIORITY

    def __post_init__(self):
        if not self.roles:
            raise ConversionError("object priority must name at least one role")


@dataclass
class _Statement:
    node: Term
    subject_value: Term
    predicate_value: Iri
    object_value: Term
    # remaining (relation, value) pairs in document order
    metadata: list[tuple[Iri, Term]] = field(default_factory=list)


@dataclass
class _Collected:
    statements: list[_Statement]
    by_node: dict[Term, _Statement]
    skipped: list[tuple[Term, str]]
    passthrough: list[Triple]  # ordinary triples, eligible for reference rewriting
    verbatim: list[Triple]  # skip-listed statements' triples, emitted unchanged


def _first_value(
    triples: list[Triple], predicate: Iri, node: Term
) -> tuple[Term | None, Triple | None]:
    values = [t for t in triples if t.predicate == predicate]
    if not values:
        return None, None
    if len(values) > 1:
        log.warning(
            "statement %r has %d values for %s; taking the first",
            node,
            len(values),
            predicate.text,
        )
    return values[0].object, values[0]


def collect_statements(graph: Graph, priority: ObjectPriority) -> _Collected:
    candidates: list[Term] = []
    seen: set[Term] = set()
    for t in graph.triples:
        if t.predicate in (KGC_SUBJECT, KGC_HAS_PREDICATE) and t.subject not in seen:
            seen.add(t.subject)
            candidates.append(t.subject)

    statements: list[_Statement] = []
    by_node: dict[Term, _Statement] = {}
    skipped: list[tuple[Term, str]] = []
    verbatim: list[Triple] = []
    for node in candidates:
        own = graph.by_subject(node)
        subj, subj_triple = _first_value(own, KGC_SUBJECT, node)
        pred, pred_triple = _first_value(own, KGC_HAS_PREDICATE, node)
        role_value, role_triple = None, None
        for role in priority.roles:
            role_value, role_triple = _first_value(own, role, node)
            if role_triple is not None:
                break
        reason = None
        if subj_triple is None:
            reason = "missing kgc:subject"
        elif pred_triple is None:
            reason = "missing kgc:hasPredicate"
        elif not isinstance(pred, Iri):
            reason = "kgc:hasPredicate value is not an IRI"
        elif role_triple is None:
            reason = "no priority role present"
        if reason is not None:
            skipped.append((node, reason))
            verbatim.extend(own)
            continue
        consumed = {id(subj_triple), id(pred_triple), id(role_triple)}
        metadata = [(t.predicate, t.object) for t in own if id(t) not in consumed]
        st = _Statement(node, subj, pred, role_value, metadata)
        statements.append(st)
        by_node[node] = st

    statement_nodes = set(by_node) | {node for node, _ in skipped}
    passthrough = [t for t in graph.triples if t.subject not in statement_nodes]
    return _Collected(statements, by_node, skipped, passthrough, verbatim)


def _node_identifier_text(node: Term) -> str:
    if isinstance(node, Iri):
        return node.text
    if isinstance(node, BlankNode):
        return "_:" + node.label
    raise ConversionError(f"statement node has no usable identifier: {node!r}")


def kgrc_to_sgp(
    ref_graph: Graph,
    priority: ObjectPriority | None = None,
    separator: str = "-",
) -> tuple[Graph, list[tuple[Term, str]]]:
    """Convert to singleton properties; returns the graph and the skip list."""
    collected = collect_statements(ref_graph, priority or ObjectPriority())
    counters: dict[str, int] = {}
    identity: dict[Term, Iri] = {}
    for st in collected.statements:
        k = counters.get(st.predicate_value.text, 0) + 1
        counters[st.predicate_value.text] = k
        identity[st.node] = Iri(f"{st.predicate_value.text}{separator}{k}")

    def rewrite(term: Term) -> Term:
        return identity.get(term, term)

    out = Graph(mrm="SGP")
    for st in collected.statements:
        sp = identity[st.node]
        out.add(Triple(rewrite(st.subject_value), sp, rewrite(st.object_value)))
        out.add(Triple(sp, SINGLETON_PROPERTY_OF, st.predicate_value))
        for qr, qv in st.metadata:
            out.add(Triple(sp, qr, rewrite(qv)))
    for t in collected.passthrough:
        out.add(Triple(t.subject, t.predicate, rewrite(t.object)))
    for t in collected.verbatim:
        out.add(t)
    return out, collected.skipped


def kgrc_to_rdr(
    ref_graph: Graph,
    priority: ObjectPriority | None = None,
    wrap: str = "always",
) -> tuple[Graph, list[tuple[Term, str]]]:
    """Convert to quoted triples with identifier wrappers per the wrap policy.

    `wrap="always"` wraps every statement; `wrap="on-collision"` wraps only
    statements whose raw (subject, predicate, object) role triple occurs more
    than once (detected before reference rewriting).
    """
    if wrap not in ("always", "on-collision"):
        raise ConversionError(f"unknown wrap policy {wrap!r}")
    collected = collect_statements(ref_graph, priority or ObjectPriority())
    out = Graph(mrm="RDR")

    raw_counts: dict[tuple[Term, Iri, Term], int] = {}
    for st in collected.statements:
        key = (st.subject_value, st.predicate_value, st.object_value)
        raw_counts[key] = raw_counts.get(key, 0) + 1

    identity: dict[Term, QtRef] = {}
    in_progress: set[Term] = set()

    def resolve_identity(node: Term) -> QtRef:
        if node in identity:
            return identity[node]
        if node in in_progress:
            raise ConversionError(f"cyclic statement references involving {node!r}")
        in_progress.add(node)
        st = collected.by_node[node]
        s = rewrite(st.subject_value)
        o = rewrite(st.object_value)
        inner = QtRef(out.intern_qt(s, st.predicate_value, o))
        wrapped = wrap == "always" or raw_counts[
            (st.subject_value, st.predicate_value, st.object_value)
        ] > 1
        if wrapped:
            ident = Literal(_node_identifier_text(node))
            ref = QtRef(out.intern_qt(inner, RDF_VALUE, ident))
        else:
            ref = inner
        in_progress.remove(node)
        identity[node] = ref
        return ref

    def rewrite(term: Term) -> Term:
        if term in collected.by_node:
            return resolve_identity(term)
        return term

    dangling: list[str] = []
    for st in collected.statements:
        ref = resolve_identity(st.node)
        if not st.metadata:
            # no metadata to hang off the QT: assert its content directly so
            # the statement is not silently dropped
            qt = out.qt(ref.qt_id)
            out.add(Triple(qt.subject, qt.predicate, qt.object))
            continue
        for qr, qv in st.metadata:
            if qr == KGC_THEN and qv not in collected.by_node:
                dangling.append(_node_identifier_text(qv) if isinstance(qv, (Iri, BlankNode)) else repr(qv))
                continue
            out.add(Triple(ref, qr, rewrite(qv)))
    if dangling:
        raise UnresolvedReferenceError("dangling kgc:then targets", sorted(set(dangling)))
    for t in collected.passthrough:
        out.add(Triple(t.subject, t.predicate, rewrite(t.object)))
    for t in collected.verbatim:
        out.add(t)
    return out, collected.skipped
