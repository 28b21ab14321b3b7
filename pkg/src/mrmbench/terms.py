"""Term and triple data model shared by every metadata representation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import MalformedTermError


@dataclass(frozen=True)
class Iri:
    """An IRI node, stored verbatim (relative IRIs and bare tokens allowed)."""

    text: str

    def __post_init__(self):
        if not self.text:
            raise MalformedTermError("IRI text must be non-empty")
        if any(c.isspace() for c in self.text):
            raise MalformedTermError(f"IRI text contains whitespace: {self.text!r}")


@dataclass(frozen=True)
class BlankNode:
    """A blank node; the label is preserved verbatim."""

    label: str

    def __post_init__(self):
        if not self.label:
            raise MalformedTermError("blank node label must be non-empty")


@dataclass(frozen=True)
class Literal:
    """A literal compared by (lexical form, language tag); no datatypes."""

    lexical: str
    lang: str | None = None


@dataclass(frozen=True)
class QtRef:
    """Reference to a quoted triple interned in the owning graph."""

    qt_id: int


Term = Union[Iri, BlankNode, Literal, QtRef]


def is_entity_term(term: Term) -> bool:
    """Literals never count as entities; everything else can."""
    return not isinstance(term, Literal)


def _check_triple_positions(subject: Term, predicate: Term, obj: Term) -> None:
    if isinstance(subject, Literal):
        raise MalformedTermError(f"literal in subject position: {subject!r}")
    if not isinstance(predicate, Iri):
        raise MalformedTermError(f"predicate must be an IRI, got {predicate!r}")
    if not isinstance(obj, (Iri, BlankNode, Literal, QtRef)):
        raise MalformedTermError(f"invalid object term: {obj!r}")


@dataclass(frozen=True)
class Triple:
    """An asserted triple; the subject is never a literal."""

    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        _check_triple_positions(self.subject, self.predicate, self.object)


@dataclass(frozen=True)
class QuotedTriple:
    """A quoted triple held in a graph's interning table."""

    qt_id: int
    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        _check_triple_positions(self.subject, self.predicate, self.object)

    @property
    def key(self) -> tuple[Term, Iri, Term]:
        return (self.subject, self.predicate, self.object)


@dataclass(frozen=True)
class HyperFact:
    """One hyper-relational statement: (s, p, o) plus ordered qualifier pairs."""

    s: Term
    p: Iri
    o: Term
    qualifiers: tuple[tuple[Iri, Term], ...] = field(default_factory=tuple)

    def __post_init__(self):
        _check_triple_positions(self.s, self.p, self.o)
        for qr, qv in self.qualifiers:
            if not isinstance(qr, Iri):
                raise MalformedTermError(f"qualifier relation must be an IRI, got {qr!r}")
