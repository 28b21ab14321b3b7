"""Fair link-prediction task construction: per-model relation filters,
TE-balanced train/valid/test splits, and dataset diagnostics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import EmptyTaskError, MrmBenchError, WrongMrmError
from .graph import Graph
from .terms import Iri, QtRef, Term, Triple
from .vocab import RDF_OBJECT, RDF_PREDICATE, RDF_SUBJECT, SINGLETON_PROPERTY_OF


@dataclass(frozen=True)
class EvalFilter:
    """Relations excluded from the prediction task for one model.

    REF excludes the three reification relations. SGP excludes
    singletonPropertyOf plus every singleton property (R_SGP). RDR excludes
    every predicate quoted inside a metadata-carrying quoted triple (R_QT).
    """

    mrm: str
    excluded: frozenset[Term]
    triple_entities: frozenset[Term]


def _sgp_singleton_properties(graph: Graph) -> set[Term]:
    singles: set[Term] = set()
    asserted_preds = {t.predicate for t in graph.triples}
    for t in graph.triples:
        if t.predicate == SINGLETON_PROPERTY_OF and t.subject in asserted_preds:
            singles.add(t.subject)
    return singles


def _rdr_quoted_predicates(graph: Graph) -> set[Term]:
    quoted: set[Term] = set()
    for t in graph.triples:
        if isinstance(t.subject, QtRef):
            qt = graph.resolve(t.subject)
            quoted.add(qt.predicate)
    return quoted


def build_filter(graph: Graph, mrm: str) -> EvalFilter:
    if mrm == "REF":
        excluded = {RDF_SUBJECT, RDF_PREDICATE, RDF_OBJECT}
        tes = {t.subject for t in graph.triples if t.predicate == RDF_SUBJECT}
    elif mrm == "SGP":
        singles = _sgp_singleton_properties(graph)
        excluded = {SINGLETON_PROPERTY_OF} | singles
        tes = set(singles)
    elif mrm == "RDR":
        excluded = _rdr_quoted_predicates(graph)
        tes = {t.subject for t in graph.triples if isinstance(t.subject, QtRef)}
    else:
        raise MrmBenchError(f"unknown metadata representation model {mrm!r}")
    return EvalFilter(mrm, frozenset(excluded), frozenset(tes))


def eligible_triples(graph: Graph, ev_filter: EvalFilter) -> list[Triple]:
    """Prediction targets: predicate not excluded and object in the entity set."""
    return [
        t
        for t in graph.triples
        if t.predicate not in ev_filter.excluded and graph.is_entity(t.object)
    ]


@dataclass
class Split:
    train: list[Triple]
    valid: list[Triple]
    test: list[Triple]
    seed: int = 0
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)

    def parts(self) -> dict[str, list[Triple]]:
        return {"train": self.train, "valid": self.valid, "test": self.test}


def split_dataset(
    graph: Graph,
    ev_filter: EvalFilter,
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> Split:
    """Seeded split over the eligible triples with TE balancing.

    Triples are grouped by TE subject. Groups of size >= 2 place one triple
    in train and one in test (one in valid too when the group has >= 3 and
    the valid ratio is positive); the remainder follows the ratios. Singleton
    groups go to train; non-TE triples follow the ratios alone.
    """
    if abs(sum(ratios) - 1.0) > 1e-9 or any(r < 0 for r in ratios):
        raise MrmBenchError(f"ratios must be non-negative and sum to 1, got {ratios}")
    eligible = eligible_triples(graph, ev_filter)
    if not eligible:
        raise EmptyTaskError(f"no eligible triples for {ev_filter.mrm}")

    rng = random.Random(f"split:{seed}")
    groups: dict[Term, list[Triple]] = {}
    loose: list[Triple] = []
    group_order: list[Term] = []
    for t in eligible:
        if t.subject in ev_filter.triple_entities:
            if t.subject not in groups:
                groups[t.subject] = []
                group_order.append(t.subject)
            groups[t.subject].append(t)
        else:
            loose.append(t)

    train: list[Triple] = []
    valid: list[Triple] = []
    test: list[Triple] = []

    def by_ratio(t: Triple) -> None:
        r = rng.random()
        if r < ratios[0]:
            train.append(t)
        elif r < ratios[0] + ratios[1]:
            valid.append(t)
        else:
            test.append(t)

    for te in group_order:
        members = list(groups[te])
        rng.shuffle(members)
        if len(members) == 1:
            train.append(members[0])
            continue
        train.append(members[0])
        test.append(members[1])
        rest = members[2:]
        if rest and ratios[1] > 0:
            valid.append(rest.pop(0))
        for t in rest:
            by_ratio(t)
    for t in loose:
        by_ratio(t)
    return Split(train, valid, test, seed=seed, ratios=tuple(ratios))


@dataclass(frozen=True)
class QtProfile:
    """Percentages of asserted triples by quoted-triple participation."""

    qt_to_qt: float
    qt_to_at: float
    at_to_qt: float
    at_to_at: float

    def as_dict(self) -> dict[str, float]:
        return {
            "QT->QT": self.qt_to_qt,
            "QT->AT": self.qt_to_at,
            "AT->QT": self.at_to_qt,
            "AT->AT": self.at_to_at,
        }


def qt_triple_profile(graph: Graph, triples: list[Triple] | None = None) -> QtProfile:
    """Classify asserted triples by whether subject/object is a quoted triple."""
    if graph.mrm is not None and graph.mrm != "RDR":
        raise WrongMrmError(f"QT profile requires an RDR graph, got {graph.mrm}")
    pool = graph.triples if triples is None else triples
    if not pool:
        raise EmptyTaskError("cannot profile an empty triple set")
    counts = {"qq": 0, "qa": 0, "aq": 0, "aa": 0}
    for t in pool:
        s_qt = isinstance(t.subject, QtRef)
        o_qt = isinstance(t.object, QtRef)
        key = ("q" if s_qt else "a") + ("q" if o_qt else "a")
        counts[key] += 1
    total = len(pool)
    return QtProfile(
        qt_to_qt=100.0 * counts["qq"] / total,
        qt_to_at=100.0 * counts["qa"] / total,
        at_to_qt=100.0 * counts["aq"] / total,
        at_to_at=100.0 * counts["aa"] / total,
    )
