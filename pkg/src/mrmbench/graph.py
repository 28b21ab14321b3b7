"""In-memory graph with quoted-triple interning and entity/relation indices.

Entity membership: every non-literal term occurring in subject or object
position of an asserted triple or of any interned quoted triple. Relation
membership: every term in predicate position, asserted or quoted. Literals
never enter the entity set.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import FrozenGraphError, MrmBenchError
from .terms import Iri, Literal, QtRef, QuotedTriple, Term, Triple, is_entity_term


class GraphStats(NamedTuple):
    entities: int
    relations: int
    triples: int


class Graph:
    """Ordered triple set plus a quoted-triple interning table.

    Mutation is single-threaded; `freeze()` makes the graph immutable and
    safe to share. Entity/relation iteration follows first-occurrence order,
    which downstream seeding relies on.
    """

    def __init__(self, mrm: str | None = None):
        self.mrm = mrm
        self._frozen = False
        self._triples: list[Triple] = []
        self._triple_set: set[Triple] = set()
        self._qt_table: dict[int, QuotedTriple] = {}
        self._qt_ids: dict[tuple[Term, Iri, Term], int] = {}
        self._by_subject: dict[Term, list[Triple]] = {}
        self._by_object: dict[Term, list[Triple]] = {}
        self._by_predicate: dict[Iri, list[Triple]] = {}
        # occurrence counters back entity/relation membership so that
        # removal restores stats exactly
        self._entity_counts: dict[Term, int] = {}
        self._relation_counts: dict[Term, int] = {}
        # QTs whose subject/object is a given term (for walk transitions)
        self._qts_by_subject: dict[Term, list[int]] = {}
        self._qts_by_object: dict[Term, list[int]] = {}

    # -- mutation ---------------------------------------------------------

    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraphError("graph is frozen")

    def _count_entity(self, term: Term, delta: int) -> None:
        if not is_entity_term(term):
            return
        new = self._entity_counts.get(term, 0) + delta
        if new < 0:
            raise MrmBenchError(f"entity count underflow for {term!r}")
        if new == 0 and delta < 0:
            del self._entity_counts[term]
        else:
            self._entity_counts[term] = new

    def _count_relation(self, term: Term, delta: int) -> None:
        new = self._relation_counts.get(term, 0) + delta
        if new < 0:
            raise MrmBenchError(f"relation count underflow for {term!r}")
        if new == 0 and delta < 0:
            del self._relation_counts[term]
        else:
            self._relation_counts[term] = new

    def intern_qt(self, subject: Term, predicate: Iri, obj: Term, *, force_new: bool = False) -> int:
        """Return the qt-id for (s, p, o), interning a new entry if needed.

        `force_new` bypasses interning; the KGRC identifier wrapper uses it
        to keep deliberately distinct copies of one (s, p, o).
        """
        self._check_mutable()
        key = (subject, predicate, obj)
        if not force_new and key in self._qt_ids:
            return self._qt_ids[key]
        qt_id = len(self._qt_table) + 1
        qt = QuotedTriple(qt_id, subject, predicate, obj)
        self._qt_table[qt_id] = qt
        if key not in self._qt_ids:
            self._qt_ids[key] = qt_id
        # quoted-position occurrences are permanent: the interning table
        # only grows, so no removal path exists for them
        self._count_entity(subject, +1)
        self._count_entity(obj, +1)
        self._count_relation(predicate, +1)
        self._qts_by_subject.setdefault(subject, []).append(qt_id)
        self._qts_by_object.setdefault(obj, []).append(qt_id)
        return qt_id

    def add(self, triple: Triple) -> bool:
        """Assert a triple; returns False if it was already present."""
        self._check_mutable()
        self._validate_refs(triple)
        if triple in self._triple_set:
            return False
        self._triples.append(triple)
        self._triple_set.add(triple)
        self._by_subject.setdefault(triple.subject, []).append(triple)
        self._by_object.setdefault(triple.object, []).append(triple)
        self._by_predicate.setdefault(triple.predicate, []).append(triple)
        self._count_entity(triple.subject, +1)
        self._count_entity(triple.object, +1)
        self._count_relation(triple.predicate, +1)
        return True

    def remove(self, triple: Triple) -> bool:
        self._check_mutable()
        if triple not in self._triple_set:
            return False
        self._triples.remove(triple)
        self._triple_set.remove(triple)
        self._by_subject[triple.subject].remove(triple)
        self._by_object[triple.object].remove(triple)
        self._by_predicate[triple.predicate].remove(triple)
        self._count_entity(triple.subject, -1)
        self._count_entity(triple.object, -1)
        self._count_relation(triple.predicate, -1)
        return True

    def _validate_refs(self, triple: Triple) -> None:
        for term in (triple.subject, triple.object):
            if isinstance(term, QtRef) and term.qt_id not in self._qt_table:
                raise MrmBenchError(f"dangling quoted-triple reference: {term.qt_id}")

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- access -----------------------------------------------------------

    @property
    def triples(self) -> list[Triple]:
        return list(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triple_set

    @property
    def qt_table(self) -> dict[int, QuotedTriple]:
        return dict(self._qt_table)

    def qt(self, qt_id: int) -> QuotedTriple:
        return self._qt_table[qt_id]

    def resolve(self, term: Term) -> QuotedTriple | None:
        if isinstance(term, QtRef):
            return self._qt_table.get(term.qt_id)
        return None

    def lookup_qt(self, subject: Term, predicate: Iri, obj: Term) -> int | None:
        return self._qt_ids.get((subject, predicate, obj))

    def by_subject(self, term: Term) -> list[Triple]:
        return list(self._by_subject.get(term, ()))

    def by_object(self, term: Term) -> list[Triple]:
        return list(self._by_object.get(term, ()))

    def by_predicate(self, term: Iri) -> list[Triple]:
        return list(self._by_predicate.get(term, ()))

    def qt_ids_with_subject(self, term: Term) -> list[int]:
        return list(self._qts_by_subject.get(term, ()))

    def qt_ids_with_object(self, term: Term) -> list[int]:
        return list(self._qts_by_object.get(term, ()))

    @property
    def entities(self) -> list[Term]:
        """Entity set in first-occurrence order."""
        return list(self._entity_counts)

    @property
    def relations(self) -> list[Term]:
        return list(self._relation_counts)

    def is_entity(self, term: Term) -> bool:
        return term in self._entity_counts

    def stats(self) -> GraphStats:
        return GraphStats(
            entities=len(self._entity_counts),
            relations=len(self._relation_counts),
            triples=len(self._triples),
        )

    # -- consistency ------------------------------------------------------

    def verify(self) -> None:
        """Recompute all indices from scratch and compare; raises on drift."""
        ent: dict[Term, int] = {}
        rel: dict[Term, int] = {}

        def count(term: Term, table: dict):
            if table is ent and not is_entity_term(term):
                return
            table[term] = table.get(term, 0) + 1

        for t in self._triples:
            count(t.subject, ent)
            count(t.object, ent)
            count(t.predicate, rel)
        for qt in self._qt_table.values():
            count(qt.subject, ent)
            count(qt.object, ent)
            count(qt.predicate, rel)
        if ent != self._entity_counts or rel != self._relation_counts:
            raise MrmBenchError("graph indices inconsistent with triple set")
        for t in self._triples:
            if (
                t not in self._by_subject.get(t.subject, ())
                or t not in self._by_object.get(t.object, ())
                or t not in self._by_predicate.get(t.predicate, ())
            ):
                raise MrmBenchError(f"triple missing from positional index: {t!r}")


def resolve_deep(graph: Graph, term: Term):
    """Expand QtRefs into nested (s, p, o) tuples for graph-independent comparison."""
    qt = graph.resolve(term)
    if qt is None:
        return term
    return (
        resolve_deep(graph, qt.subject),
        qt.predicate,
        resolve_deep(graph, qt.object),
    )


def _canonical_triples(graph: Graph) -> list[tuple]:
    """Triples with QtRefs resolved and blank nodes renamed canonically."""
    from .terms import BlankNode

    resolved = [
        (resolve_deep(graph, t.subject), t.predicate, resolve_deep(graph, t.object))
        for t in graph.triples
    ]

    def strip(term):
        if isinstance(term, BlankNode):
            return ("_b",)
        if isinstance(term, tuple):
            return tuple(strip(x) for x in term)
        return term

    # signature of each blank node: the multiset of triples it appears in,
    # with blank labels stripped
    signatures: dict[str, list] = {}
    for s, p, o in resolved:
        stripped = (strip(s), strip(p), strip(o))
        for side in (s, o):
            if isinstance(side, BlankNode):
                signatures.setdefault(side.label, []).append(stripped)
    order = sorted(signatures, key=lambda lab: sorted(map(repr, signatures[lab])))
    rename = {lab: BlankNode(f"c{i}") for i, lab in enumerate(order)}

    def apply(term):
        if isinstance(term, BlankNode):
            return rename[term.label]
        if isinstance(term, tuple):
            return tuple(apply(x) for x in term)
        return term

    return sorted(
        ((apply(s), apply(p), apply(o)) for s, p, o in resolved), key=repr
    )


def isomorphic(a: Graph, b: Graph) -> bool:
    """Structural equality over asserted triples and reachable quoted triples.

    Blank nodes are matched by their triple-neighbourhood signature, which is
    exact for the shapes this toolkit produces (statement nodes always have
    distinguishing content).
    """
    return _canonical_triples(a) == _canonical_triples(b)
