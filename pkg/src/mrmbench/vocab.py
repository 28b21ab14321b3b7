"""Fixed vocabulary used by the converters and task filters."""

from __future__ import annotations

from .terms import Iri

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
KGC_NS = "http://kgc.knowledge-graph.jp/ontology/kgc.owl#"

RDF_SUBJECT = Iri(RDF_NS + "subject")
RDF_PREDICATE = Iri(RDF_NS + "predicate")
RDF_OBJECT = Iri(RDF_NS + "object")
RDF_TYPE = Iri(RDF_NS + "type")
RDF_STATEMENT = Iri(RDF_NS + "Statement")
RDF_VALUE = Iri(RDF_NS + "value")

# the original singleton-property proposal placed this term in the RDF
# namespace; the toolkit follows it so the relation is a single fixed IRI
SINGLETON_PROPERTY_OF = Iri(RDF_NS + "singletonPropertyOf")

KGC_SUBJECT = Iri(KGC_NS + "subject")
KGC_HAS_PREDICATE = Iri(KGC_NS + "hasPredicate")

# reified-statement machinery; facts may not use these as qualifier relations
REF_RESERVED = frozenset({RDF_SUBJECT, RDF_PREDICATE, RDF_OBJECT})

# object-selection roles in priority order
DEFAULT_OBJECT_PRIORITY = tuple(
    Iri(KGC_NS + role) for role in ("what", "whom", "where", "on", "to", "from")
)

DEFAULT_PREFIXES = {
    "rdf": RDF_NS,
    "kgc": KGC_NS,
}
