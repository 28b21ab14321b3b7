"""Seeded synthetic datasets: plain hyper-fact batches for property tests,
a community-structured hyper-relational KG for end-to-end runs, and a
KGRC-shaped event graph exercising nesting and statement references."""

from __future__ import annotations

import random

from .graph import Graph
from .terms import HyperFact, Iri, Literal, Term, Triple
from .vocab import KGC_HAS_PREDICATE, KGC_NS, KGC_SUBJECT, RDF_TYPE

KGC_THEN = Iri(KGC_NS + "then")
KGC_SOURCE = Iri(KGC_NS + "source")
KGC_SITUATION = Iri(KGC_NS + "Situation")


def random_hyperfacts(
    n_facts: int,
    seed: int = 0,
    n_entities: int = 60,
    n_base_relations: int = 6,
    n_qual_relations: int = 6,
    min_quals: int = 0,
    max_quals: int = 3,
) -> list[HyperFact]:
    """Random facts with distinct (s, p, o) per fact and distinct qualifier
    pairs within a fact; base and qualifier relation pools are disjoint."""
    rng = random.Random(f"facts:{seed}")
    entities = [Iri(f"e{i}") for i in range(n_entities)]
    base_rels = [Iri(f"r{i}") for i in range(n_base_relations)]
    qual_rels = [Iri(f"q{i}") for i in range(n_qual_relations)]
    facts: list[HyperFact] = []
    used: set[tuple] = set()
    attempts = 0
    while len(facts) < n_facts and attempts < n_facts * 50:
        attempts += 1
        s = rng.choice(entities)
        p = rng.choice(base_rels)
        o = rng.choice(entities)
        if (s, p, o) in used:
            continue
        used.add((s, p, o))
        n_q = rng.randint(min_quals, max_quals)
        pairs: list[tuple[Iri, Term]] = []
        pair_set: set[tuple] = set()
        while len(pairs) < n_q:
            qr = rng.choice(qual_rels)
            qv = rng.choice(entities)
            if (qr, qv) not in pair_set:
                pair_set.add((qr, qv))
                pairs.append((qr, qv))
        facts.append(HyperFact(s, p, o, tuple(pairs)))
    return facts


def community_hyperfacts(
    n_communities: int = 8,
    community_size: int = 22,
    n_facts: int = 320,
    n_qual_relations: int = 3,
    seed: int = 7,
) -> list[HyperFact]:
    """Learnable hyper-relational KG: entities live in communities and each
    qualifier value is a per-community landmark, so (statement, qr) -> qv is
    predictable from graph structure."""
    rng = random.Random(f"community:{seed}")
    members = {
        c: [Iri(f"e{c}_{i}") for i in range(community_size)] for c in range(n_communities)
    }
    qual_rels = [Iri(f"q{i}") for i in range(n_qual_relations)]
    landmarks = {
        (c, q.text): Iri(f"v{c}_{q.text}") for c in range(n_communities) for q in qual_rels
    }
    facts: list[HyperFact] = []
    used: set[tuple] = set()
    attempts = 0
    while len(facts) < n_facts and attempts < n_facts * 50:
        attempts += 1
        c_from = rng.randrange(n_communities)
        c_to = rng.randrange(n_communities)
        s = rng.choice(members[c_from])
        o = rng.choice(members[c_to])
        p = Iri(f"r{c_from}to{c_to}")
        if (s, p, o) in used:
            continue
        used.add((s, p, o))
        n_q = rng.randint(1, len(qual_rels))
        chosen = rng.sample(qual_rels, n_q)
        pairs = tuple((qr, landmarks[(c_to, qr.text)]) for qr in chosen)
        facts.append(HyperFact(s, p, o, pairs))
    return facts


def synthetic_kgrc_graph(
    n_statements: int = 24,
    n_entities: int = 16,
    seed: int = 3,
) -> Graph:
    """Reification-style event graph with roles, then-chains, statement-valued
    roles, and plain triples (some pointing at statements)."""
    rng = random.Random(f"kgrc:{seed}")
    ns = "http://example.org/story/"
    pred_ns = "http://example.org/predicate/"
    entities = [Iri(f"{ns}Actor{i}") for i in range(n_entities)]
    predicates = [Iri(f"{pred_ns}{name}") for name in ("care", "say", "move", "see")]
    roles = [Iri(KGC_NS + r) for r in ("what", "whom", "where")]
    graph = Graph()
    nodes = [Iri(f"{ns}{100 + i}") for i in range(n_statements)]
    for i, node in enumerate(nodes):
        graph.add(Triple(node, RDF_TYPE, KGC_SITUATION))
        graph.add(Triple(node, KGC_SOURCE, Literal(f"scene {100 + i}", "en")))
        graph.add(Triple(node, KGC_SUBJECT, rng.choice(entities)))
        graph.add(Triple(node, KGC_HAS_PREDICATE, rng.choice(predicates)))
        role = rng.choice(roles)
        # statement-valued objects create nested quoted triples downstream
        if i >= 2 and rng.random() < 0.3:
            graph.add(Triple(node, role, nodes[rng.randrange(i)]))
        else:
            graph.add(Triple(node, role, rng.choice(entities)))
        if i + 1 < n_statements and rng.random() < 0.7:
            graph.add(Triple(node, KGC_THEN, nodes[i + 1]))
    link = Iri(pred_ns + "knows")
    mentions = Iri(pred_ns + "mentionedIn")
    for _ in range(n_statements):
        graph.add(Triple(rng.choice(entities), link, rng.choice(entities)))
    for _ in range(max(2, n_statements // 4)):
        graph.add(Triple(rng.choice(entities), mentions, rng.choice(nodes)))
    return graph
