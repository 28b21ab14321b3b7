"""Translational link prediction fine-tuned from pre-trained embeddings.

Scoring follows s + p ~ o: score(s, p, o) = -||v_s + v_p - v_o|| under L1 or
L2. Two sharing policies: `separate` keeps independent entity/relation tables
(TransE); `unified` resolves any token used in both roles to one shared
vector (TransU), so updates through either view are visible through both.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .embed import EmbeddingTable
from .errors import MrmBenchError, UnknownTokenError
from .graph import Graph
from .rdfio.tokens import term_token

NORMS = ("l1", "l2")
SHARINGS = ("separate", "unified")


@dataclass(frozen=True)
class LPConfig:
    margin: float = 1.0
    lr: float = 0.01
    epochs: int = 50
    negatives: int = 1
    norm: str = "l2"
    normalize_entities: bool = True
    seed: int = 0
    sharing: str = "separate"

    def __post_init__(self):
        if self.margin <= 0:
            raise MrmBenchError("margin must be positive")
        if self.negatives < 1:
            raise MrmBenchError("need at least one negative per positive")
        if self.norm not in NORMS:
            raise MrmBenchError(f"norm must be one of {NORMS}")
        if self.sharing not in SHARINGS:
            raise MrmBenchError(f"sharing must be one of {SHARINGS}")


@dataclass
class LPModel:
    vectors: np.ndarray  # [n_slots, dim]
    entity_slots: dict[str, int]
    relation_slots: dict[str, int]
    entity_tokens: list[str]
    sharing: str = "separate"
    norm: str = "l2"

    def entity_vector(self, token: str) -> np.ndarray:
        slot = self.entity_slots.get(token)
        if slot is None:
            raise UnknownTokenError(f"unknown entity token {token!r}")
        return self.vectors[slot]

    def relation_vector(self, token: str) -> np.ndarray:
        slot = self.relation_slots.get(token)
        if slot is None:
            raise UnknownTokenError(f"unknown relation token {token!r}")
        return self.vectors[slot]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def candidate_matrix(self) -> np.ndarray:
        rows = [self.entity_slots[t] for t in self.entity_tokens]
        return self.vectors[rows]


def init_from_pretrained(
    table: EmbeddingTable,
    graph: Graph,
    sharing: str = "separate",
    seed: int = 0,
    norm: str = "l2",
) -> tuple[LPModel, dict[str, int]]:
    """Build an LP model over the graph vocabulary, copying pre-trained vectors.

    Tokens absent from the table get seeded random vectors and are tallied in
    the returned coverage report.
    """
    if sharing not in SHARINGS:
        raise MrmBenchError(f"sharing must be one of {SHARINGS}")
    entity_tokens = [term_token(graph, e) for e in graph.entities]
    relation_tokens = [term_token(graph, r) for r in graph.relations]
    dim = table.dim
    rng = np.random.default_rng(seed)
    rows: list[np.ndarray] = []
    entity_slots: dict[str, int] = {}
    relation_slots: dict[str, int] = {}
    coverage = {
        "entities_pretrained": 0,
        "entities_fallback": 0,
        "relations_pretrained": 0,
        "relations_fallback": 0,
    }

    def make_row(token: str, kind: str) -> int:
        if token in table:
            vec = np.array(table.vector(token), dtype=np.float64)
            coverage[f"{kind}_pretrained"] += 1
        else:
            vec = (rng.random(dim) - 0.5) / dim
            coverage[f"{kind}_fallback"] += 1
        rows.append(vec)
        return len(rows) - 1

    for tok in entity_tokens:
        if tok not in entity_slots:
            entity_slots[tok] = make_row(tok, "entities")
    for tok in relation_tokens:
        if tok in relation_slots:
            continue
        if sharing == "unified" and tok in entity_slots:
            relation_slots[tok] = entity_slots[tok]
        else:
            relation_slots[tok] = make_row(tok, "relations")
    model = LPModel(
        vectors=np.vstack(rows),
        entity_slots=entity_slots,
        relation_slots=relation_slots,
        entity_tokens=entity_tokens,
        sharing=sharing,
        norm=norm,
    )
    return model, coverage


def _distances(diff: np.ndarray, norm: str) -> np.ndarray:
    if norm == "l1":
        return np.abs(diff).sum(axis=-1)
    return np.sqrt((diff * diff).sum(axis=-1))


def score(model: LPModel, s: str, p: str, o: str, norm: str | None = None) -> float:
    diff = model.entity_vector(s) + model.relation_vector(p) - model.entity_vector(o)
    return float(-_distances(diff, norm or model.norm))


def _norm_grad(diff: np.ndarray, norm: str) -> np.ndarray:
    if norm == "l1":
        return np.sign(diff)
    n = float(np.sqrt((diff * diff).sum()))
    if n == 0.0:
        return np.zeros_like(diff)
    return diff / n


def margin_loss_and_gradient(
    model: LPModel,
    positive: tuple[str, str, str],
    negative: tuple[str, str, str],
    margin: float,
    norm: str,
) -> tuple[float, dict[int, np.ndarray]]:
    """Hinge loss max(0, m + d(pos) - d(neg)) with gradients per slot row."""

    def slot(table: dict[str, int], tok: str) -> int:
        row = table.get(tok)
        if row is None:
            raise UnknownTokenError(f"unknown token {tok!r}")
        return row

    def lookup(triple):
        s, p, o = triple
        return (
            slot(model.entity_slots, s),
            slot(model.relation_slots, p),
            slot(model.entity_slots, o),
        )

    pos_slots = lookup(positive)
    neg_slots = lookup(negative)
    v = model.vectors
    pos_diff = v[pos_slots[0]] + v[pos_slots[1]] - v[pos_slots[2]]
    neg_diff = v[neg_slots[0]] + v[neg_slots[1]] - v[neg_slots[2]]
    d_pos = float(_distances(pos_diff, norm))
    d_neg = float(_distances(neg_diff, norm))
    loss = margin + d_pos - d_neg
    grads: dict[int, np.ndarray] = {}
    if loss <= 0.0:
        return 0.0, grads
    g_pos = _norm_grad(pos_diff, norm)
    g_neg = _norm_grad(neg_diff, norm)

    def add(slot: int, vec: np.ndarray) -> None:
        grads[slot] = grads.get(slot, 0.0) + vec

    add(pos_slots[0], g_pos)
    add(pos_slots[1], g_pos)
    add(pos_slots[2], -g_pos)
    add(neg_slots[0], -g_neg)
    add(neg_slots[1], -g_neg)
    add(neg_slots[2], g_neg)
    return float(loss), grads


def train_lp(
    model: LPModel,
    train: list[tuple[str, str, str]],
    cfg: LPConfig,
) -> LPModel:
    """Margin-ranking SGD over the training triples (in place).

    Negatives corrupt head or tail uniformly; corruptions that collide with
    known training triples are resampled up to 20 times, then accepted.
    """
    if not train:
        raise MrmBenchError("training split is empty")
    known = set(train)
    rng = random.Random(f"lp:{cfg.seed}")
    entities = model.entity_tokens
    entity_rows = set(model.entity_slots.values())
    for _ in range(cfg.epochs):
        for s, p, o in train:
            for _ in range(cfg.negatives):
                for _attempt in range(20):
                    corrupt_head = rng.random() < 0.5
                    candidate = entities[rng.randrange(len(entities))]
                    neg = (candidate, p, o) if corrupt_head else (s, p, candidate)
                    if neg not in known:
                        break
                _loss, grads = margin_loss_and_gradient(
                    model, (s, p, o), neg, cfg.margin, cfg.norm
                )
                if not grads:
                    continue
                for slot, vec in grads.items():
                    model.vectors[slot] -= cfg.lr * vec
                    if cfg.normalize_entities and slot in entity_rows:
                        n = np.sqrt((model.vectors[slot] ** 2).sum())
                        if n > 0:
                            model.vectors[slot] /= n
    return model


@dataclass(frozen=True)
class RankingMetrics:
    mrr: float
    hits1: float
    hits10: float

    def as_dict(self) -> dict[str, float]:
        return {"mrr": self.mrr, "hits@1": self.hits1, "hits@10": self.hits10}


@dataclass(frozen=True)
class MetricsReport:
    raw: RankingMetrics
    filtered: RankingMetrics
    n_test: int
    coverage: dict = field(default_factory=dict)

    def for_setting(self, setting: str) -> RankingMetrics:
        if setting == "raw":
            return self.raw
        if setting == "filtered":
            return self.filtered
        raise MrmBenchError(f"unknown evaluation setting {setting!r}")

    def as_dict(self) -> dict:
        return {
            "raw": self.raw.as_dict(),
            "filtered": self.filtered.as_dict(),
            "n_test": self.n_test,
            "coverage": dict(self.coverage),
        }


def evaluate(
    model: LPModel,
    test: list[tuple[str, str, str]],
    known: set[tuple[str, str, str]],
    coverage: dict | None = None,
) -> MetricsReport:
    """Rank the true object among all entities for each test triple.

    Tie rule: rank = 1 + #strictly better + #ties / 2. The filtered setting
    removes candidates o' != o with (s, p, o') in `known` before ranking.
    """
    if not test:
        raise MrmBenchError("test split is empty")
    cand = model.candidate_matrix()
    token_pos = {tok: i for i, tok in enumerate(model.entity_tokens)}
    raw_rr, raw_h1, raw_h10 = [], [], []
    fil_rr, fil_h1, fil_h10 = [], [], []
    for s, p, o in test:
        query = model.entity_vector(s) + model.relation_vector(p)
        scores = -_distances(query - cand, model.norm)
        o_pos = token_pos.get(o)
        if o_pos is None:
            raise UnknownTokenError(f"unknown entity token {o!r}")
        o_score = scores[o_pos]
        better = scores > o_score
        ties = scores == o_score
        raw_rank = 1.0 + better.sum() + (ties.sum() - 1) / 2.0
        mask = np.zeros(len(scores), dtype=bool)
        for s2, p2, o2 in known:
            if s2 == s and p2 == p and o2 != o and o2 in token_pos:
                mask[token_pos[o2]] = True
        fil_rank = (
            1.0 + (better & ~mask).sum() + ((ties & ~mask).sum() - 1) / 2.0
        )
        for rank, rr, h1, h10 in (
            (raw_rank, raw_rr, raw_h1, raw_h10),
            (fil_rank, fil_rr, fil_h1, fil_h10),
        ):
            rr.append(1.0 / rank)
            h1.append(1.0 if rank <= 1 else 0.0)
            h10.append(1.0 if rank <= 10 else 0.0)
    def pack(rr, h1, h10):
        return RankingMetrics(
            mrr=float(np.mean(rr)), hits1=float(np.mean(h1)), hits10=float(np.mean(h10))
        )

    return MetricsReport(
        raw=pack(raw_rr, raw_h1, raw_h10),
        filtered=pack(fil_rr, fil_h1, fil_h10),
        n_test=len(test),
        coverage=dict(coverage or {}),
    )
