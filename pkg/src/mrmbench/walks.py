"""Walk-corpus generation with quoted-triple transitions.

Four base strategies (random/mid walks, each with a duplicate-free variant)
extended by four QT transitions drawn before ordinary subject expansion:

  qt2subject (alpha): unpack a QT into its subject, predicate, object
  object2qt  (beta):  hop from an entity in object role onto the QT
  qt2object  (gamma): hop from an entity in object role onto the QT's object
  subject2qt (delta): hop from an entity in subject role onto the QT

Walks start empty at a root entity; the first transition materializes the
root (or the QT token for the unpacking transitions). With all four
probabilities at zero the output degenerates to ordinary entity/relation
alternating random walks. Per-root RNG streams keyed by (seed, root index)
make generation order-independent and reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import MrmBenchError
from .graph import Graph
from .rdfio.tokens import term_token
from .terms import Literal, QtRef, QuotedTriple, Term, Triple

WALK_MODES = (
    "STAR_MID_WALKS",
    "STAR_MID_WALKS_DUPLICATE_FREE",
    "STAR_RANDOM_WALKS",
    "STAR_RANDOM_WALKS_DUPLICATE_FREE",
)


@dataclass(frozen=True)
class WalkConfig:
    n: int = 10
    depth: int = 4
    mode: str = "STAR_RANDOM_WALKS"
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise MrmBenchError("walks per root must be >= 1")
        if self.depth < 1:
            raise MrmBenchError("walk depth must be >= 1")
        if self.mode not in WALK_MODES:
            raise MrmBenchError(f"unknown walk mode {self.mode!r}")
        for name in ("alpha", "beta", "gamma", "delta"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise MrmBenchError(f"{name} must lie in [0, 1], got {p}")


@dataclass
class WalkCorpus:
    sequences: list[list[str]]
    vocabulary: set[str] = field(init=False)

    def __post_init__(self):
        for seq in self.sequences:
            if not seq:
                raise MrmBenchError("corpus sequences must be non-empty")
        self.vocabulary = {tok for seq in self.sequences for tok in seq}


def _select_mode(
    qt_subj: QuotedTriple | None,
    qt_obj: QuotedTriple | None,
    alpha: float,
    beta: float,
    gamma: float,
    delta: float,
    rng: random.Random,
) -> str | None:
    rand_oq = rng.random()
    rand_qs = rng.random()
    rand_qo = rng.random()
    rand_sq = rng.random()
    modes = []
    if qt_subj is not None and rand_qs < alpha:
        modes.append("qt2subject")
    if qt_obj is not None and rand_oq < beta:
        modes.append("object2qt")
    if qt_obj is not None and rand_qo < gamma:
        modes.append("qt2object")
    if qt_subj is not None and rand_sq < delta:
        modes.append("subject2qt")
    if not modes:
        return None
    return modes[0] if len(modes) == 1 else rng.choice(modes)


def _apply_mode(
    mode: str,
    walk: list[Term],
    qt_subj: QuotedTriple | None,
    qt_obj: QuotedTriple | None,
) -> list[Term]:
    new_walk = list(walk)
    if mode == "qt2subject":
        if not walk:
            new_walk.append(QtRef(qt_subj.qt_id))
        new_walk.extend((qt_subj.subject, qt_subj.predicate, qt_subj.object))
    elif mode == "object2qt":
        if not walk:
            new_walk.append(qt_obj.object)
        new_walk.append(QtRef(qt_obj.qt_id))
    elif mode == "qt2object":
        if not walk:
            new_walk.append(QtRef(qt_obj.qt_id))
        new_walk.append(qt_obj.object)
    elif mode == "subject2qt":
        if not walk:
            new_walk.append(qt_subj.subject)
        new_walk.append(QtRef(qt_subj.qt_id))
    else:
        raise MrmBenchError(f"unknown transition mode {mode!r}")
    return new_walk


def qt_walk_step(
    wl: list[list[Term]],
    walk: list[Term],
    triples_e_subj: list[Triple],
    qt_e_obj: QuotedTriple | None,
    qt_e_subj: QuotedTriple | None,
    alpha: float,
    beta: float,
    gamma: float,
    delta: float,
    rng: random.Random,
) -> list[list[Term]]:
    """One expansion of `walk` within the walk list `wl`.

    When a QT transition fires, `walk` is replaced in `wl` by its extension;
    otherwise one extended copy per outgoing triple is appended (the original
    stays, matching the breadth-first formulation).
    """
    mode = _select_mode(qt_e_subj, qt_e_obj, alpha, beta, gamma, delta, rng)
    if mode is None:
        for triple in triples_e_subj:
            wl.append(list(walk) + [triple.predicate, triple.object])
        return wl
    new_walk = _apply_mode(mode, walk, qt_e_subj, qt_e_obj)
    for i, w in enumerate(wl):
        if w is walk or w == walk:
            del wl[i]
            break
    wl.append(new_walk)
    return wl


def _pick_qt(graph: Graph, ids: list[int], rng: random.Random) -> QuotedTriple | None:
    if not ids:
        return None
    return graph.qt(ids[0] if len(ids) == 1 else rng.choice(ids))


def _forward(
    graph: Graph,
    root: Term,
    prefix: list[Term],
    budget: int,
    cfg: WalkConfig,
    rng: random.Random,
) -> list[Term]:
    walk = list(prefix)
    current = root
    hops = 0
    while hops < budget:
        if isinstance(current, Literal):
            break
        qt_subj = _pick_qt(graph, graph.qt_ids_with_subject(current), rng)
        qt_obj = _pick_qt(graph, graph.qt_ids_with_object(current), rng)
        mode = _select_mode(qt_subj, qt_obj, cfg.alpha, cfg.beta, cfg.gamma, cfg.delta, rng)
        if mode is None:
            out = graph.by_subject(current)
            if not out:
                break
            triple = out[0] if len(out) == 1 else rng.choice(out)
            if not walk:
                walk.append(current)
            walk.extend((triple.predicate, triple.object))
            current = triple.object
        else:
            walk = _apply_mode(mode, walk, qt_subj, qt_obj)
            current = walk[-1]
        hops += 1
    if not walk:
        walk.append(current)
    return walk


def _backward(
    graph: Graph, root: Term, k: int, rng: random.Random
) -> tuple[list[Term], int]:
    prefix: list[Term] = []
    head: Term = root
    steps = 0
    for _ in range(k):
        inbound = graph.by_object(head)
        if not inbound:
            break
        triple = inbound[0] if len(inbound) == 1 else rng.choice(inbound)
        prefix = [triple.subject, triple.predicate] + prefix
        head = triple.subject
        steps += 1
    if prefix:
        prefix = prefix + [root]
    return prefix, steps


def walks_for_root(graph: Graph, root: Term, root_index: int, cfg: WalkConfig) -> list[list[Term]]:
    """Term-level walks for one root; independent of all other roots."""
    rng = random.Random(f"{cfg.seed}:{root_index}")
    mid = cfg.mode.startswith("STAR_MID")
    dedupe = cfg.mode.endswith("DUPLICATE_FREE")
    walks: list[list[Term]] = []
    for _ in range(cfg.n):
        prefix: list[Term] = []
        used = 0
        if mid:
            k = rng.randint(0, cfg.depth)
            prefix, used = _backward(graph, root, k, rng)
        walks.append(_forward(graph, root, prefix, cfg.depth - used, cfg, rng))
    if dedupe:
        seen: set[tuple] = set()
        unique = []
        for w in walks:
            key = tuple(w)
            if key not in seen:
                seen.add(key)
                unique.append(w)
        walks = unique
    return walks


def generate_walks(graph: Graph, cfg: WalkConfig) -> WalkCorpus:
    """Token corpus over all root entities, ordered by (root index, walk index)."""
    sequences: list[list[str]] = []
    for root_index, root in enumerate(graph.entities):
        for walk in walks_for_root(graph, root, root_index, cfg):
            sequences.append([term_token(graph, term) for term in walk])
    return WalkCorpus(sequences)
