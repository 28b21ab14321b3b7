"""Seeded random search over the walk/embedding hyperparameter space, with a
binned-variance importance analysis of the resulting trial log."""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass
from pathlib import Path

from .embed import ALGORITHMS
from .errors import InsufficientDataError, MrmBenchError
from .pipeline import PipelineConfig
from .walks import WALK_MODES

CONTINUOUS_PARAMS = ("alpha", "beta", "gamma", "delta")


@dataclass(frozen=True)
class SearchSpace:
    n_choices: tuple[int, ...] = (10, 100, 200)
    depth_range: tuple[int, int] = (3, 12)
    modes: tuple[str, ...] = WALK_MODES
    dims: tuple[int, ...] = (50, 100, 200, 400)
    windows: tuple[int, ...] = (5, 7, 9, 11)
    algorithms: tuple[str, ...] = ALGORITHMS
    budget: int = 50

    def __post_init__(self):
        if self.budget < 1:
            raise MrmBenchError("search budget must be >= 1")
        for name in ("n_choices", "modes", "dims", "windows", "algorithms"):
            if not getattr(self, name):
                raise MrmBenchError(f"search domain {name} is empty")
        lo, hi = self.depth_range
        if lo < 1 or hi < lo:
            raise MrmBenchError(f"bad depth range {self.depth_range}")


def sample_params(space: SearchSpace, rng: random.Random) -> dict:
    return {
        "alpha": rng.random(),
        "beta": rng.random(),
        "gamma": rng.random(),
        "delta": rng.random(),
        "n": rng.choice(space.n_choices),
        "depth": rng.randint(*space.depth_range),
        "mode": rng.choice(space.modes),
        "dim": rng.choice(space.dims),
        "window": rng.choice(space.windows),
        "algorithm": rng.choice(space.algorithms),
    }


def apply_params(base: PipelineConfig, params: dict) -> PipelineConfig:
    walk = dataclasses.replace(
        base.walk,
        n=params["n"],
        depth=params["depth"],
        mode=params["mode"],
        alpha=params["alpha"],
        beta=params["beta"],
        gamma=params["gamma"],
        delta=params["delta"],
    )
    embed = dataclasses.replace(
        base.embed,
        dim=params["dim"],
        window=params["window"],
        algorithm=params["algorithm"],
    )
    return dataclasses.replace(base, walk=walk, embed=embed)


def _default_objective(base: PipelineConfig, mrm: str):
    from .linkpred import evaluate, init_from_pretrained, train_lp
    from .pipeline import _split_tokens, convert, ingest
    from .embed import train_embeddings
    from .task import build_filter, split_dataset
    from .walks import generate_walks

    source = ingest(base)
    graph = convert(source, mrm, base)
    ev_filter = build_filter(graph, mrm)
    split = split_dataset(graph, ev_filter, base.ratios, base.split_seed)
    tokens = _split_tokens(graph, split)
    if not tokens["valid"]:
        raise MrmBenchError("validation split is empty; search needs a valid set")

    def objective(cfg: PipelineConfig) -> float:
        corpus = generate_walks(graph, cfg.walk)
        table = train_embeddings(corpus, cfg.embed)
        model, _cov = init_from_pretrained(
            table, graph, sharing=cfg.lp.sharing, seed=cfg.lp.seed, norm=cfg.lp.norm
        )
        train_lp(model, tokens["train"], cfg.lp)
        known = set(tokens["train"]) | set(tokens["valid"]) | set(tokens["test"])
        return evaluate(model, tokens["valid"], known).filtered.mrr

    return objective


def random_search(
    space: SearchSpace,
    base: PipelineConfig,
    seed: int = 0,
    mrm: str | None = None,
    objective=None,
) -> tuple[dict, list[dict]]:
    """Uniformly sample `budget` configurations; objective is validation MRR.

    Returns (best trial, full trial log). A custom objective callable
    (PipelineConfig -> float) replaces the default pipeline run.
    """
    rng = random.Random(f"search:{seed}")
    if objective is None:
        objective = _default_objective(base, mrm or base.mrms[0])
    log: list[dict] = []
    best: dict | None = None
    for trial in range(space.budget):
        params = sample_params(space, rng)
        cfg = apply_params(base, params)
        value = float(objective(cfg))
        entry = {"trial": trial, "params": params, "objective": value}
        log.append(entry)
        if best is None or value > best["objective"]:
            best = entry
    return best, log


def report_importance(trials: list[dict], bins: int = 8) -> dict[str, float]:
    """Per-parameter importance: bias-corrected between-bin variance ratio.

    Continuous parameters are binned into `bins` equal intervals over [0, 1];
    discrete parameters use one bin per observed value. Scores are clamped to
    [0, 1] and normalized to sum to at most 1. This approximates a functional
    ANOVA main-effect decomposition of the trial log.
    """
    if len(trials) < 20:
        raise InsufficientDataError(f"importance analysis needs >= 20 trials, got {len(trials)}")
    ys = [float(t["objective"]) for t in trials]
    n = len(ys)
    mean = sum(ys) / n
    sst = sum((y - mean) ** 2 for y in ys)
    names = sorted(trials[0]["params"])
    if sst == 0.0:
        return {name: 0.0 for name in names}
    scores: dict[str, float] = {}
    for name in names:
        groups: dict[object, list[float]] = {}
        for t, y in zip(trials, ys):
            value = t["params"][name]
            if name in CONTINUOUS_PARAMS:
                key = min(bins - 1, int(float(value) * bins))
            else:
                key = value
            groups.setdefault(key, []).append(y)
        b = len(groups)
        ssb = sum(len(g) * (sum(g) / len(g) - mean) ** 2 for g in groups.values())
        if b <= 1 or n <= b:
            scores[name] = 0.0
            continue
        msw = (sst - ssb) / (n - b)
        corrected = (ssb - (b - 1) * msw) / sst
        scores[name] = min(1.0, max(0.0, corrected))
    total = sum(scores.values())
    if total > 1.0:
        scores = {k: v / total for k, v in scores.items()}
    return scores


def write_trial_log(log: list[dict], path: str | Path) -> None:
    import json

    Path(path).write_text(json.dumps(log, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_trial_log(path: str | Path) -> list[dict]:
    import json

    return json.loads(Path(path).read_text(encoding="utf-8"))
