import math
import random

import numpy as np
import pytest

from mrmbench.embed import EmbeddingTable
from mrmbench.errors import UnknownTokenError
from mrmbench.graph import Graph
from mrmbench.linkpred import (
    LPConfig,
    LPModel,
    RankingMetrics,
    evaluate,
    init_from_pretrained,
    margin_loss_and_gradient,
    score,
    train_lp,
)
from mrmbench.terms import Iri, Triple


def toy_model(n_entities=5, dim=4, seed=0, norm="l2"):
    rng = np.random.default_rng(seed)
    ents = [f"e{i}" for i in range(n_entities)]
    rels = ["r0", "r1"]
    vectors = rng.normal(size=(n_entities + len(rels), dim))
    return LPModel(
        vectors=vectors,
        entity_slots={e: i for i, e in enumerate(ents)},
        relation_slots={r: n_entities + i for i, r in enumerate(rels)},
        entity_tokens=ents,
        norm=norm,
    )


# -- scoring ------------------------------------------------------------------


def test_exact_translation_scores_zero():
    m = toy_model()
    m.vectors[m.entity_slots["e1"]] = m.vectors[m.entity_slots["e0"]] + m.vectors[m.relation_slots["r0"]]
    assert score(m, "e0", "r0", "e1") == pytest.approx(0.0)
    assert all(score(m, "e0", "r0", o) <= 0 for o in m.entity_tokens)


def test_l1_score_arithmetic():
    m = toy_model(dim=2)
    m.vectors[m.entity_slots["e0"]] = np.array([0.0, 0.0])
    m.vectors[m.relation_slots["r0"]] = np.array([1.0, 0.0])
    m.vectors[m.entity_slots["e1"]] = np.array([0.0, 1.0])
    assert score(m, "e0", "r0", "e1", norm="l1") == pytest.approx(-2.0)


def test_score_orders_by_distance():
    m = toy_model(seed=3)
    q = m.vectors[m.entity_slots["e0"]] + m.vectors[m.relation_slots["r0"]]
    for o1 in m.entity_tokens:
        for o2 in m.entity_tokens:
            d1 = np.linalg.norm(q - m.vectors[m.entity_slots[o1]])
            d2 = np.linalg.norm(q - m.vectors[m.entity_slots[o2]])
            assert (score(m, "e0", "r0", o1) >= score(m, "e0", "r0", o2)) == (d1 <= d2)


def test_unknown_token_error():
    m = toy_model()
    with pytest.raises(UnknownTokenError):
        score(m, "e0", "nope", "e1")


def test_translation_invariance():
    m = toy_model(seed=9)
    shifted = toy_model(seed=9)
    c = np.full(m.dim, 0.37)
    for slot in m.entity_slots.values():
        shifted.vectors[slot] = m.vectors[slot] + c
    for o in m.entity_tokens:
        assert score(shifted, "e0", "r0", o) == pytest.approx(score(m, "e0", "r0", o))


# -- sharing policies -----------------------------------------------------------


def dual_role_graph():
    g = Graph(mrm="SGP")
    g.add(Triple(Iri("a"), Iri("p#1"), Iri("b")))
    g.add(Triple(Iri("p#1"), Iri("singletonPropertyOf"), Iri("p")))
    g.add(Triple(Iri("p#1"), Iri("q"), Iri("c")))
    return g.freeze()


def table_for(graph, dim=4, seed=0):
    from mrmbench.rdfio import term_token

    tokens = sorted({term_token(graph, t) for t in list(graph.entities) + list(graph.relations)})
    rng = np.random.default_rng(seed)
    return EmbeddingTable(tokens, rng.normal(size=(len(tokens), dim)), counts={})


def test_unified_sharing_single_vector():
    g = dual_role_graph()
    model, _ = init_from_pretrained(table_for(g), g, sharing="unified")
    assert model.entity_slots["p#1"] == model.relation_slots["p#1"]
    assert np.shares_memory(model.entity_vector("p#1"), model.relation_vector("p#1"))


def test_separate_sharing_independent_vectors():
    g = dual_role_graph()
    model, _ = init_from_pretrained(table_for(g), g, sharing="separate")
    assert model.entity_slots["p#1"] != model.relation_slots["p#1"]
    model.vectors[model.entity_slots["p#1"]] += 1.0
    assert not np.allclose(model.entity_vector("p#1"), model.relation_vector("p#1"))


def test_unified_invariant_survives_training():
    g = dual_role_graph()
    model, _ = init_from_pretrained(table_for(g), g, sharing="unified")
    train = [("a", "p#1", "b"), ("p#1", "q", "c")]
    train_lp(model, train, LPConfig(epochs=30, lr=0.05, seed=1, sharing="unified"))
    assert model.entity_slots["p#1"] == model.relation_slots["p#1"]
    assert np.shares_memory(model.entity_vector("p#1"), model.relation_vector("p#1"))


def test_disjoint_vocabulary_sharing_equivalence():
    g = Graph()
    g.add(Triple(Iri("a"), Iri("r"), Iri("b")))
    g.add(Triple(Iri("b"), Iri("s"), Iri("c")))
    g.freeze()
    table = table_for(g)
    cfgs = [LPConfig(epochs=20, seed=4, sharing=s) for s in ("separate", "unified")]
    reports = []
    for cfg in cfgs:
        model, _ = init_from_pretrained(table, g, sharing=cfg.sharing, seed=0)
        train_lp(model, [("a", "r", "b"), ("b", "s", "c")], cfg)
        reports.append(evaluate(model, [("a", "r", "b")], {("a", "r", "b")}))
    assert reports[0] == reports[1]


def test_missing_tokens_counted_in_coverage():
    g = dual_role_graph()
    table = EmbeddingTable(["a", "b"], np.zeros((2, 4)), counts={})
    model, coverage = init_from_pretrained(table, g, sharing="separate", seed=1)
    assert coverage["entities_pretrained"] == 2
    assert coverage["entities_fallback"] == len(g.entities) - 2
    assert coverage["relations_fallback"] == len(g.relations)
    assert np.isfinite(model.vectors).all()


# -- margin loss ----------------------------------------------------------------


@pytest.mark.parametrize("norm", ["l1", "l2"])
def test_margin_gradients_match_finite_differences(norm):
    rng = np.random.default_rng(2)
    checked = 0
    for trial in range(30):
        m = toy_model(seed=trial, norm=norm)
        pos = ("e0", "r0", "e1")
        neg = ("e2", "r0", "e3")
        loss, grads = margin_loss_and_gradient(m, pos, neg, margin=1.0, norm=norm)
        if not grads or loss < 1e-3:
            continue  # hinge boundary: not differentiable there
        for slot, grad in grads.items():
            num = np.zeros(m.dim)
            h = 1e-6
            for d in range(m.dim):
                m.vectors[slot, d] += h
                lp, _ = margin_loss_and_gradient(m, pos, neg, 1.0, norm)
                m.vectors[slot, d] -= 2 * h
                lm, _ = margin_loss_and_gradient(m, pos, neg, 1.0, norm)
                m.vectors[slot, d] += h
                num[d] = (lp - lm) / (2 * h)
            scale = np.maximum(np.maximum(np.abs(num), np.abs(grad)), 1e-3)
            assert np.max(np.abs(grad - num) / scale) < 1e-4
            checked += 1
    assert checked > 10


def test_hinge_inactive_region_zero_gradient():
    m = toy_model(seed=1)
    # make the positive perfect and the negative far: loss clamps to zero
    m.vectors[m.entity_slots["e1"]] = m.vectors[m.entity_slots["e0"]] + m.vectors[m.relation_slots["r0"]]
    m.vectors[m.entity_slots["e3"]] = m.vectors[m.entity_slots["e2"]] + m.vectors[m.relation_slots["r0"]] + 100.0
    loss, grads = margin_loss_and_gradient(m, ("e0", "r0", "e1"), ("e2", "r0", "e3"), 1.0, "l2")
    assert loss == 0.0 and grads == {}


def test_training_improves_toy_ranking():
    train = [("e0", "r0", "e1"), ("e1", "r0", "e2"), ("e2", "r0", "e3"), ("e3", "r0", "e4")]
    test = [("e1", "r0", "e2")]
    m = toy_model(seed=6)
    before = evaluate(m, test, set(train)).filtered.mrr
    train_lp(m, train, LPConfig(epochs=200, lr=0.05, margin=1.0, seed=3))
    after = evaluate(m, test, set(train)).filtered.mrr
    assert after > before


# -- ranking oracle ---------------------------------------------------------------


def sort_based_oracle(model, test, known):
    """Full-sort reimplementation of both settings, kept independent of
    evaluate(): builds complete score lists and reads ranks off the sort."""

    def metrics(ranks):
        return RankingMetrics(
            mrr=sum(1.0 / r for r in ranks) / len(ranks),
            hits1=sum(r <= 1 for r in ranks) / len(ranks),
            hits10=sum(r <= 10 for r in ranks) / len(ranks),
        )

    raw_ranks, fil_ranks = [], []
    for s, p, o in test:
        pairs = [(score(model, s, p, cand), cand) for cand in model.entity_tokens]
        target = score(model, s, p, o)

        def rank_of(pool):
            scores_only = [sc for sc, _ in sorted(pool, key=lambda sc_c: -sc_c[0])]
            first = scores_only.index(target)
            last = len(scores_only) - 1 - scores_only[::-1].index(target)
            return ((first + 1) + (last + 1)) / 2.0

        raw_ranks.append(rank_of(pairs))
        filtered_pairs = [
            (sc, cand)
            for sc, cand in pairs
            if cand == o or (s, p, cand) not in known
        ]
        fil_ranks.append(rank_of(filtered_pairs))
    return metrics(raw_ranks), metrics(fil_ranks)


def test_evaluate_matches_sort_oracle_across_seeds():
    for seed in range(40):
        rng = random.Random(seed)
        n = rng.randint(3, 10)
        m = toy_model(n_entities=n, dim=3, seed=seed)
        triples = [
            (f"e{rng.randrange(n)}", rng.choice(["r0", "r1"]), f"e{rng.randrange(n)}")
            for _ in range(8)
        ]
        known = set(triples[: rng.randint(0, 8)])
        test = triples[:4]
        report = evaluate(m, test, known)
        raw, filtered = sort_based_oracle(m, test, known)
        assert report.raw == raw
        assert report.filtered == filtered


def test_constant_scorer_average_rank():
    n = 7
    m = toy_model(n_entities=n, seed=0)
    m.vectors[:] = 0.0
    report = evaluate(m, [("e0", "r0", "e1")], set())
    expected = (n + 1) / 2
    assert report.raw.mrr == pytest.approx(1.0 / expected)
    assert report.raw.hits1 == 0.0


def test_perfect_model_metrics():
    m = toy_model(seed=5)
    m.vectors[m.entity_slots["e1"]] = m.vectors[m.entity_slots["e0"]] + m.vectors[m.relation_slots["r0"]]
    report = evaluate(m, [("e0", "r0", "e1")], set())
    assert report.raw.mrr == 1.0
    assert report.raw.hits1 == 1.0


def test_filtered_rank_never_worse_than_raw():
    for seed in range(10):
        rng = random.Random(seed)
        m = toy_model(n_entities=8, seed=seed)
        triples = [(f"e{rng.randrange(8)}", "r0", f"e{rng.randrange(8)}") for _ in range(10)]
        report = evaluate(m, triples[:5], set(triples))
        assert report.filtered.mrr >= report.raw.mrr - 1e-12
        assert 0 < report.raw.mrr <= 1
        assert report.raw.hits1 <= report.raw.hits10 <= 1
