"""End-to-end orchestration: ingest -> convert -> split -> walk -> embed ->
fine-tune -> evaluate, with a manifest recording every seed and artifact."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import kgrc
from .convert import facts_to_graph
from .datasets import load_kgrc, load_wd50k
from .embed import EmbedConfig, train_embeddings
from .errors import MrmBenchError, StageError
from .graph import Graph
from .linkpred import LPConfig, MetricsReport, evaluate, init_from_pretrained, train_lp
from .rdfio.corpus import write_corpus
from .rdfio.embeddings_io import write_embedding_tsv
from .rdfio.tokens import term_token
from .rdfio.turtle import serialize
from .rdfio.wd50k import parse_wd50k_text
from .task import Split, build_filter, eligible_triples, split_dataset
from .terms import Triple
from .walks import WalkConfig, generate_walks

STAGES = ("ingest", "convert", "split", "walk", "embed", "train", "eval")
INPUT_KINDS = ("wd50k-csv", "kgrc-turtle")


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    input_kind: str = "wd50k-csv"
    mrms: tuple[str, ...] = ("REF", "SGP", "RDR")
    out_dir: str = "out"
    emit_type: bool = False
    hyper_only: bool = False
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    split_seed: int = 0
    walk: WalkConfig = field(default_factory=WalkConfig)
    embed: EmbedConfig = field(default_factory=EmbedConfig)
    lp: LPConfig = field(default_factory=LPConfig)

    def __post_init__(self):
        if self.input_kind not in INPUT_KINDS:
            raise MrmBenchError(f"input kind must be one of {INPUT_KINDS}")
        for mrm in self.mrms:
            if mrm not in ("REF", "SGP", "RDR"):
                raise MrmBenchError(f"unknown metadata representation model {mrm!r}")


def config_dict(cfg) -> dict:
    if dataclasses.is_dataclass(cfg):
        return {k: config_dict(v) for k, v in dataclasses.asdict(cfg).items()}
    if isinstance(cfg, dict):
        return {k: config_dict(v) for k, v in cfg.items()}
    if isinstance(cfg, (list, tuple)):
        return [config_dict(v) for v in cfg]
    return cfg


def config_hash(cfg: PipelineConfig) -> str:
    payload = config_dict(cfg)
    payload.pop("out_dir", None)  # workspace location is not part of the experiment
    blob = json.dumps(payload, sort_keys=True)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def _stage(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(stage, str(exc)) from exc


def ingest(cfg: PipelineConfig):
    """Returns a fact list (wd50k-csv) or a REF graph (kgrc-turtle)."""
    path = Path(cfg.input_path)
    if cfg.input_kind == "wd50k-csv":
        if path.is_dir():
            facts = load_wd50k(root=str(path.parent), hyper_only=cfg.hyper_only)
        else:
            if not path.is_file():
                raise StageError("ingest", f"input file not found: {path}")
            facts = parse_wd50k_text(path.read_text(encoding="utf-8"))
            if cfg.hyper_only:
                facts = [f for f in facts if f.qualifiers]
        if not facts:
            raise StageError("ingest", "no facts ingested")
        return facts
    if path.is_dir() and (path / "kgrc-rdf").is_dir():
        return load_kgrc(root=str(path))
    if not path.exists():
        raise StageError("ingest", f"input path not found: {path}")
    from .rdfio.turtle import PrefixTable, parse_turtle_star
    from .vocab import DEFAULT_PREFIXES

    graph = parse_turtle_star(
        path.read_text(encoding="utf-8"), PrefixTable(dict(DEFAULT_PREFIXES))
    )
    graph.mrm = "REF"
    return graph


def convert(source, mrm: str, cfg: PipelineConfig) -> Graph:
    if cfg.input_kind == "wd50k-csv":
        graph = facts_to_graph(source, mrm, emit_type=cfg.emit_type)
    else:
        if mrm == "REF":
            graph = source
            graph.mrm = "REF"
        elif mrm == "SGP":
            graph, _skipped = kgrc.kgrc_to_sgp(source)
        else:
            graph, _skipped = kgrc.kgrc_to_rdr(source)
    return graph.freeze()


def _split_tokens(graph: Graph, split: Split) -> dict[str, list[tuple[str, str, str]]]:
    def tok(t: Triple) -> tuple[str, str, str]:
        return (
            term_token(graph, t.subject),
            term_token(graph, t.predicate),
            term_token(graph, t.object),
        )

    return {name: [tok(t) for t in triples] for name, triples in split.parts().items()}


def run_single(cfg: PipelineConfig, mrm: str, source, out_dir: Path) -> tuple[MetricsReport, dict]:
    """Run one metadata model through the pipeline; returns (report, artifacts)."""
    artifacts: dict[str, str] = {}
    graph = _stage("convert", convert, source, mrm, cfg)
    graph_path = out_dir / f"graph-{mrm}.nts"
    graph_path.write_text(serialize(graph, "ntriples-star"), encoding="utf-8")
    artifacts["graph"] = str(graph_path)

    def do_split():
        ev_filter = build_filter(graph, mrm)
        return ev_filter, split_dataset(graph, ev_filter, cfg.ratios, cfg.split_seed)

    ev_filter, split = _stage("split", do_split)
    for name, triples in split.parts().items():
        part = Graph(mrm=mrm)
        for t in triples:

            def carry(term):
                from .terms import QtRef

                if isinstance(term, QtRef):
                    qt = graph.qt(term.qt_id)
                    return QtRef(part.intern_qt(carry(qt.subject), qt.predicate, carry(qt.object)))
                return term

            part.add(Triple(carry(t.subject), t.predicate, carry(t.object)))
        path = out_dir / f"split-{mrm}-{name}.nts"
        path.write_text(serialize(part, "ntriples-star"), encoding="utf-8")
        artifacts[f"split-{name}"] = str(path)

    corpus = _stage("walk", generate_walks, graph, cfg.walk)
    corpus_path = out_dir / f"corpus-{mrm}.txt"
    write_corpus(corpus, corpus_path)
    artifacts["corpus"] = str(corpus_path)

    table = _stage("embed", train_embeddings, corpus, cfg.embed)
    emb_path = out_dir / f"embeddings-{mrm}.tsv"
    write_embedding_tsv(table.tokens, table.vectors, emb_path)
    artifacts["embeddings"] = str(emb_path)

    def do_train():
        model, coverage = init_from_pretrained(
            table, graph, sharing=cfg.lp.sharing, seed=cfg.lp.seed, norm=cfg.lp.norm
        )
        tokens = _split_tokens(graph, split)
        if not tokens["train"]:
            raise MrmBenchError("empty training split")
        train_lp(model, tokens["train"], cfg.lp)
        return model, coverage, tokens

    model, coverage, tokens = _stage("train", do_train)
    ckpt_path = out_dir / f"model-{mrm}.tsv"
    slot_tokens = [f"e:{t}" for t in model.entity_slots] + [
        f"r:{t}" for t in model.relation_slots
    ]
    slot_rows = list(model.entity_slots.values()) + list(model.relation_slots.values())
    write_embedding_tsv(slot_tokens, model.vectors[slot_rows], ckpt_path)
    artifacts["model"] = str(ckpt_path)

    def do_eval():
        known = set(tokens["train"]) | set(tokens["valid"]) | set(tokens["test"])
        if not tokens["test"]:
            raise MrmBenchError("empty test split")
        return evaluate(model, tokens["test"], known, coverage=coverage)

    report = _stage("eval", do_eval)
    return report, artifacts


def run_pipeline(cfg: PipelineConfig) -> dict[str, MetricsReport]:
    """Run every configured metadata model; writes metrics and a manifest."""
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "config": config_dict(cfg),
        "config_hash": config_hash(cfg),
        "seeds": {
            "split": cfg.split_seed,
            "walk": cfg.walk.seed,
            "embed": cfg.embed.seed,
            "lp": cfg.lp.seed,
        },
        "stages": list(STAGES),
        "artifacts": {},
        "errors": {},
    }
    source = None
    reports: dict[str, MetricsReport] = {}
    try:
        source = _stage("ingest", ingest, cfg)
        for mrm in cfg.mrms:
            report, artifacts = run_single(cfg, mrm, source, out_dir)
            reports[mrm] = report
            payload = {
                "mrm": mrm,
                "config_hash": manifest["config_hash"],
                "seeds": manifest["seeds"],
                "metrics": report.as_dict(),
            }
            metrics_path = out_dir / f"metrics-{mrm}.json"
            metrics_path.write_text(
                json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
            )
            artifacts["metrics"] = str(metrics_path)
            manifest["artifacts"][mrm] = artifacts
    except StageError as exc:
        manifest["errors"][exc.stage] = str(exc)
        raise
    finally:
        (out_dir / "manifest.json").write_text(
            json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
    return reports
