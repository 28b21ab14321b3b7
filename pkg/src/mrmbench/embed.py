"""Sequence-embedding training on walk corpora.

Four algorithms share one scoring rule: a candidate target token t is scored

    s(t) = sum_j  w_in[input_j] . ctx[block_j][t]

optimized with the log-sigmoid negative-sampling objective by plain SGD.
skip-gram scores one context token from the center (one input); CBOW scores
the center from the summed context (many inputs). The order-aware variants
(structured skip-gram, cwindow) keep one context block per window offset;
with all blocks tied they reduce exactly to skip-gram/CBOW, which is why
CBOW uses the sum rather than the mean of context vectors.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyVocabularyError, MrmBenchError, UnknownTokenError

ALGORITHMS = ("CBOW", "skip-gram", "cwindow", "structured-skip-gram")
_ORDER_AWARE = ("cwindow", "structured-skip-gram")
_CENTER_PREDICTING = ("CBOW", "cwindow")


@dataclass(frozen=True)
class EmbedConfig:
    dim: int = 100
    window: int = 5
    algorithm: str = "skip-gram"
    epochs: int = 5
    lr_initial: float = 0.025
    lr_final: float = 0.0001
    negative: int = 5
    min_count: int = 1
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.window < 1:
            raise MrmBenchError("dim and window must be >= 1")
        if self.algorithm not in ALGORITHMS:
            raise MrmBenchError(f"unknown algorithm {self.algorithm!r}")
        if self.negative < 1:
            raise MrmBenchError("negative sample count must be >= 1")
        if self.epochs < 0 or self.min_count < 1 or self.workers < 1:
            raise MrmBenchError("invalid epochs/min_count/workers")

    @property
    def order_aware(self) -> bool:
        return self.algorithm in _ORDER_AWARE

    @property
    def n_blocks(self) -> int:
        return 2 * self.window if self.order_aware else 1

    def block(self, offset: int) -> int:
        if not self.order_aware:
            return 0
        return offset + self.window if offset < 0 else offset + self.window - 1


@dataclass
class Vocab:
    tokens: list[str]
    counts: np.ndarray
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.index = {tok: i for i, tok in enumerate(self.tokens)}

    @classmethod
    def from_sequences(cls, sequences: list[list[str]], min_count: int) -> "Vocab":
        raw: dict[str, int] = {}
        order: dict[str, int] = {}
        for seq in sequences:
            for tok in seq:
                if tok not in raw:
                    order[tok] = len(order)
                raw[tok] = raw.get(tok, 0) + 1
        kept = [t for t, c in raw.items() if c >= min_count]
        if not kept:
            raise EmptyVocabularyError(f"no tokens with count >= {min_count}")
        kept.sort(key=lambda t: (-raw[t], order[t]))
        return cls(kept, np.array([raw[t] for t in kept], dtype=np.float64))


@dataclass
class EmbedParams:
    w_in: np.ndarray  # [V, dim]
    ctx: np.ndarray  # [n_blocks, V, dim]

    def copy(self) -> "EmbedParams":
        return EmbedParams(self.w_in.copy(), self.ctx.copy())


def init_params(vocab_size: int, cfg: EmbedConfig) -> EmbedParams:
    rng = np.random.default_rng(cfg.seed)
    w_in = (rng.random((vocab_size, cfg.dim)) - 0.5) / cfg.dim
    ctx = np.zeros((cfg.n_blocks, vocab_size, cfg.dim))
    return EmbedParams(w_in, ctx)


@dataclass(frozen=True)
class ContextExample:
    """One scored example: the target token plus (input row, block) pairs."""

    target: int
    inputs: tuple[tuple[int, int], ...]


def examples_from_sequence(ids: list[int], cfg: EmbedConfig) -> list[ContextExample]:
    out = []
    length = len(ids)
    center_predicting = cfg.algorithm in _CENTER_PREDICTING
    for i in range(length):
        pairs = []
        for offset in range(-cfg.window, cfg.window + 1):
            j = i + offset
            if offset == 0 or j < 0 or j >= length:
                continue
            pairs.append((ids[j], cfg.block(offset)))
        if not pairs:
            continue
        if center_predicting:
            out.append(ContextExample(ids[i], tuple(pairs)))
        else:
            out.extend(
                ContextExample(ctx_id, ((ids[i], blk),)) for ctx_id, blk in pairs
            )
    return out


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    return -np.logaddexp(0.0, -x)


def loss_and_gradient(
    params: EmbedParams, example: ContextExample, negatives: list[int]
) -> tuple[float, dict]:
    """Negative-sampling loss and its analytic gradients for one example.

    Gradients come back sparse, keyed ("w_in", row) and ("ctx", block, row);
    rows repeated across inputs accumulate.
    """
    targets = np.array([example.target] + list(negatives), dtype=np.intp)
    in_rows = np.array([r for r, _ in example.inputs], dtype=np.intp)
    blocks = np.array([b for _, b in example.inputs], dtype=np.intp)
    h = params.w_in[in_rows]  # [J, d]
    c = params.ctx[blocks[:, None], targets[None, :]]  # [J, T, d]
    scores = np.einsum("jd,jtd->t", h, c)
    signs = np.ones_like(scores)
    signs[1:] = -1.0
    loss = float(-_log_sigmoid(signs * scores).sum())
    g = _sigmoid(scores)
    g[0] -= 1.0  # d loss / d score
    grads: dict = {}
    grad_h = np.einsum("t,jtd->jd", g, c)
    for j, row in enumerate(in_rows):
        key = ("w_in", int(row))
        grads[key] = grads.get(key, 0.0) + grad_h[j]
    for j in range(len(in_rows)):
        outer = g[:, None] * h[j][None, :]  # [T, d]
        for t, tgt in enumerate(targets):
            key = ("ctx", int(blocks[j]), int(tgt))
            grads[key] = grads.get(key, 0.0) + outer[t]
    return loss, grads


def apply_gradients(params: EmbedParams, grads: dict, lr: float) -> None:
    for key, vec in grads.items():
        if key[0] == "w_in":
            params.w_in[key[1]] -= lr * vec
        else:
            params.ctx[key[1], key[2]] -= lr * vec


class _NoiseSampler:
    """Unigram^0.75 noise distribution sampled via inverse CDF."""

    def __init__(self, counts: np.ndarray):
        weights = counts**0.75
        self.cum = np.cumsum(weights / weights.sum())

    def draw(self, rng: np.random.Generator, exclude: int, k: int) -> list[int]:
        out = []
        for _ in range(k):
            row = int(np.searchsorted(self.cum, rng.random(), side="right"))
            tries = 0
            while row == exclude and tries < 100:
                row = int(np.searchsorted(self.cum, rng.random(), side="right"))
                tries += 1
            if row != exclude:
                out.append(row)
        return out


@dataclass
class EmbeddingTable:
    tokens: list[str]
    vectors: np.ndarray
    counts: dict[str, int]
    epoch_losses: list[float] = field(default_factory=list)
    index: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.index = {tok: i for i, tok in enumerate(self.tokens)}
        if not np.isfinite(self.vectors).all():
            raise MrmBenchError("embedding table contains non-finite values")

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def vector(self, token: str) -> np.ndarray:
        row = self.index.get(token)
        if row is None:
            raise UnknownTokenError(f"no embedding for token {token!r}")
        return self.vectors[row]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


def _train_span(
    params: EmbedParams,
    id_sequences: list[list[int]],
    cfg: EmbedConfig,
    sampler: _NoiseSampler,
    rng: np.random.Generator,
    lr_state: dict,
    total_examples: int,
) -> float:
    loss_sum = 0.0
    n_examples = 0
    for ids in id_sequences:
        for example in examples_from_sequence(ids, cfg):
            negatives = sampler.draw(rng, example.target, cfg.negative)
            progress = min(1.0, lr_state["done"] / max(1, total_examples))
            lr = max(cfg.lr_final, cfg.lr_initial + (cfg.lr_final - cfg.lr_initial) * progress)
            loss, grads = loss_and_gradient(params, example, negatives)
            apply_gradients(params, grads, lr)
            loss_sum += loss
            n_examples += 1
            lr_state["done"] += 1
    return loss_sum / max(1, n_examples)


def train_embeddings(corpus, cfg: EmbedConfig) -> EmbeddingTable:
    """Train a token embedding table on a walk corpus.

    Single-threaded runs are deterministic for a fixed seed. With
    `workers > 1` updates race benignly across threads and exact output is
    not reproducible; only aggregate quality is.
    """
    vocab = Vocab.from_sequences(corpus.sequences, cfg.min_count)
    params = init_params(len(vocab.tokens), cfg)
    id_sequences = []
    for seq in corpus.sequences:
        ids = [vocab.index[t] for t in seq if t in vocab.index]
        if ids:
            id_sequences.append(ids)
    sampler = _NoiseSampler(vocab.counts)
    per_epoch = sum(len(examples_from_sequence(ids, cfg)) for ids in id_sequences)
    total = per_epoch * max(1, cfg.epochs)
    epoch_losses: list[float] = []
    for epoch in range(cfg.epochs):
        if cfg.workers == 1:
            rng = np.random.default_rng([cfg.seed, epoch])
            lr_state = {"done": epoch * per_epoch}
            epoch_losses.append(
                _train_span(params, id_sequences, cfg, sampler, rng, lr_state, total)
            )
        else:
            chunks = [id_sequences[i :: cfg.workers] for i in range(cfg.workers)]
            losses = [0.0] * cfg.workers
            lr_state = {"done": epoch * per_epoch}

            def run(w: int) -> None:
                rng = np.random.default_rng([cfg.seed, epoch, w])
                losses[w] = _train_span(params, chunks[w], cfg, sampler, rng, lr_state, total)

            threads = [threading.Thread(target=run, args=(w,)) for w in range(cfg.workers)]
            for th in threads:
                th.start()
            for th in threads:
                th.join()
            epoch_losses.append(sum(losses) / cfg.workers)
    return EmbeddingTable(
        tokens=list(vocab.tokens),
        vectors=params.w_in.copy(),
        counts={t: int(c) for t, c in zip(vocab.tokens, vocab.counts)},
        epoch_losses=epoch_losses,
    )
