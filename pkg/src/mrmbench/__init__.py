"""Benchmarking toolkit for link prediction over hyper-relational knowledge
graphs expressed in three metadata representation models (reification,
singleton properties, quoted triples)."""

from .graph import Graph, GraphStats, isomorphic
from .terms import BlankNode, HyperFact, Iri, Literal, QtRef, QuotedTriple, Term, Triple

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphStats",
    "isomorphic",
    "Iri",
    "BlankNode",
    "Literal",
    "QtRef",
    "QuotedTriple",
    "Term",
    "Triple",
    "HyperFact",
    "__version__",
]
