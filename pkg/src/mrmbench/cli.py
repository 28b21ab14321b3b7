"""Command-line interface.

Subcommands: convert, split, stats, profile-qt, walk, embed, train-lp, eval,
pipeline, search, report. Exit code 0 on success; stage failures map to
distinct non-zero codes (see EXIT_CODES).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import kgrc
from .convert import facts_to_graph
from .embed import EmbedConfig, train_embeddings
from .errors import MrmBenchError, StageError
from .linkpred import LPConfig, evaluate, init_from_pretrained, train_lp
from .pipeline import PipelineConfig, config_dict, ingest, run_pipeline
from .rdfio.corpus import read_corpus, write_corpus
from .rdfio.embeddings_io import read_embedding_tsv, write_embedding_tsv
from .rdfio.tokens import term_token
from .rdfio.turtle import PrefixTable, parse_turtle_star, serialize
from .rdfio.wd50k import parse_wd50k_text
from .search import SearchSpace, random_search, read_trial_log, report_importance, write_trial_log
from .task import build_filter, qt_triple_profile, split_dataset
from .vocab import DEFAULT_PREFIXES
from .walks import WALK_MODES, WalkConfig, generate_walks
from .embed import ALGORITHMS, EmbeddingTable

EXIT_CODES = {
    "usage": 1,
    "ingest": 2,
    "convert": 3,
    "split": 4,
    "walk": 5,
    "embed": 6,
    "train": 7,
    "eval": 8,
    "search": 9,
    "report": 10,
}


def _load_graph(path: str, mrm: str | None = None):
    graph = parse_turtle_star(
        Path(path).read_text(encoding="utf-8"), PrefixTable(dict(DEFAULT_PREFIXES))
    )
    graph.mrm = mrm
    return graph


def _write_json(payload, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _walk_config(args) -> WalkConfig:
    return WalkConfig(
        n=args.walks_per_root,
        depth=args.depth,
        mode=args.walk_mode,
        alpha=args.alpha,
        beta=args.beta,
        gamma=args.gamma,
        delta=args.delta,
        seed=args.seed,
    )


def _embed_config(args) -> EmbedConfig:
    return EmbedConfig(
        dim=args.dim,
        window=args.window,
        algorithm=args.algorithm,
        epochs=args.epochs,
        lr_initial=args.lr_initial,
        lr_final=args.lr_final,
        negative=args.negative,
        min_count=args.min_count,
        seed=args.seed,
        workers=args.workers,
    )


def _lp_config(args) -> LPConfig:
    return LPConfig(
        margin=args.margin,
        lr=args.lr,
        epochs=args.lp_epochs,
        negatives=args.lp_negatives,
        norm=args.norm,
        normalize_entities=not args.no_normalize,
        seed=args.seed,
        sharing=args.sharing,
    )


def _add_walk_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--walks-per-root", type=int, default=10)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--walk-mode", choices=WALK_MODES, default="STAR_RANDOM_WALKS")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)


def _add_embed_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="skip-gram")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--lr-initial", type=float, default=0.025)
    p.add_argument("--lr-final", type=float, default=0.0001)
    p.add_argument("--negative", type=int, default=5)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)


def _add_lp_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--margin", type=float, default=1.0)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--lp-epochs", type=int, default=50)
    p.add_argument("--lp-negatives", type=int, default=1)
    p.add_argument("--norm", choices=("l1", "l2"), default="l2")
    p.add_argument("--no-normalize", action="store_true")
    p.add_argument("--sharing", choices=("separate", "unified"), default="separate")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrmbench",
        description="Benchmark link prediction across metadata representation models",
    )
    parser.add_argument("--seed", type=int, default=0, help="global seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert facts or a KGRC graph to one model")
    p.add_argument("--input", required=True)
    p.add_argument("--input-kind", choices=("wd50k-csv", "kgrc-turtle"), default="wd50k-csv")
    p.add_argument("--mrm", choices=("REF", "SGP", "RDR"), required=True)
    p.add_argument("--emit-type", action="store_true")
    p.add_argument("--hyper-only", action="store_true")
    p.add_argument("--wrap", choices=("always", "on-collision"), default="always")
    p.add_argument("--out", required=True)
    p.add_argument(
        "--out-format",
        choices=("turtle", "turtle-star", "ntriples-star", "wd50k-csv"),
        default="ntriples-star",
    )

    p = sub.add_parser("stats", help="entity/relation/triple counts of a graph")
    p.add_argument("--input", required=True)
    p.add_argument("--out")

    p = sub.add_parser("profile-qt", help="quoted-triple participation profile")
    p.add_argument("--input", required=True)
    p.add_argument("--out")

    p = sub.add_parser("split", help="TE-balanced train/valid/test split")
    p.add_argument("--input", required=True)
    p.add_argument("--mrm", choices=("REF", "SGP", "RDR"), required=True)
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("walk", help="generate a walk corpus")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    _add_walk_args(p)

    p = sub.add_parser("embed", help="train sequence embeddings on a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _add_embed_args(p)

    p = sub.add_parser("train-lp", help="fine-tune a translational link predictor")
    p.add_argument("--graph", required=True)
    p.add_argument("--mrm", choices=("REF", "SGP", "RDR"), required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    p.add_argument("--out", required=True)
    _add_lp_args(p)

    p = sub.add_parser("eval", help="evaluate a trained model checkpoint")
    p.add_argument("--graph", required=True)
    p.add_argument("--mrm", choices=("REF", "SGP", "RDR"), required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    p.add_argument("--norm", choices=("l1", "l2"), default="l2")
    p.add_argument("--out")

    p = sub.add_parser("pipeline", help="run the whole pipeline end to end")
    p.add_argument("--input", required=True)
    p.add_argument("--input-kind", choices=("wd50k-csv", "kgrc-turtle"), default="wd50k-csv")
    p.add_argument("--mrms", nargs="+", choices=("REF", "SGP", "RDR"), default=["REF", "SGP", "RDR"])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--emit-type", action="store_true")
    p.add_argument("--hyper-only", action="store_true")
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    _add_walk_args(p)
    _add_embed_args(p)
    _add_lp_args(p)

    p = sub.add_parser("search", help="seeded random hyperparameter search")
    p.add_argument("--input", required=True)
    p.add_argument("--input-kind", choices=("wd50k-csv", "kgrc-turtle"), default="wd50k-csv")
    p.add_argument("--mrm", choices=("REF", "SGP", "RDR"), default="RDR")
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--hyper-only", action="store_true")
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    _add_embed_args(p)
    _add_lp_args(p)

    p = sub.add_parser("report", help="hyperparameter importance from a trial log")
    p.add_argument("--trials", required=True)
    p.add_argument("--bins", type=int, default=8)
    p.add_argument("--out")
    return parser


def _cmd_convert(args) -> None:
    if args.input_kind == "wd50k-csv":
        facts = parse_wd50k_text(Path(args.input).read_text(encoding="utf-8"))
        if args.hyper_only:
            facts = [f for f in facts if f.qualifiers]
        graph = facts_to_graph(facts, args.mrm, emit_type=args.emit_type)
    else:
        source = _load_graph(args.input, "REF")
        if args.mrm == "REF":
            graph = source
        elif args.mrm == "SGP":
            graph, _ = kgrc.kgrc_to_sgp(source)
        else:
            graph, _ = kgrc.kgrc_to_rdr(source, wrap=args.wrap)
    Path(args.out).write_text(serialize(graph, args.out_format), encoding="utf-8")


def _cmd_stats(args) -> None:
    graph = _load_graph(args.input)
    s = graph.stats()
    _write_json(
        {"entities": s.entities, "relations": s.relations, "triples": s.triples}, args.out
    )


def _cmd_profile_qt(args) -> None:
    graph = _load_graph(args.input, "RDR")
    profile = qt_triple_profile(graph)
    _write_json(profile.as_dict(), args.out)


def _cmd_split(args) -> None:
    graph = _load_graph(args.input, args.mrm)
    ev_filter = build_filter(graph, args.mrm)
    split = split_dataset(graph, ev_filter, tuple(args.ratios), args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    from .graph import Graph
    from .terms import QtRef, Triple

    for name, triples in split.parts().items():
        part = Graph(mrm=args.mrm)

        def carry(term):
            if isinstance(term, QtRef):
                qt = graph.qt(term.qt_id)
                return QtRef(part.intern_qt(carry(qt.subject), qt.predicate, carry(qt.object)))
            return term

        for t in triples:
            part.add(Triple(carry(t.subject), t.predicate, carry(t.object)))
        (out_dir / f"{name}.nts").write_text(serialize(part, "ntriples-star"), encoding="utf-8")


def _cmd_walk(args) -> None:
    graph = _load_graph(args.input)
    graph.freeze()
    corpus = generate_walks(graph, _walk_config(args))
    write_corpus(corpus, args.out)


def _cmd_embed(args) -> None:
    corpus = read_corpus(args.corpus)
    table = train_embeddings(corpus, _embed_config(args))
    write_embedding_tsv(table.tokens, table.vectors, args.out)


def _prepare_lp(args):
    graph = _load_graph(args.graph, args.mrm)
    ev_filter = build_filter(graph, args.mrm)
    split = split_dataset(graph, ev_filter, tuple(args.ratios), args.seed)

    def tok(t):
        return (
            term_token(graph, t.subject),
            term_token(graph, t.predicate),
            term_token(graph, t.object),
        )

    tokens = {name: [tok(t) for t in triples] for name, triples in split.parts().items()}
    return graph, tokens


def _cmd_train_lp(args) -> None:
    graph, tokens = _prepare_lp(args)
    emb_tokens, matrix = read_embedding_tsv(args.embeddings)
    table = EmbeddingTable(emb_tokens, matrix, counts={})
    cfg = _lp_config(args)
    model, _cov = init_from_pretrained(table, graph, sharing=cfg.sharing, seed=cfg.seed, norm=cfg.norm)
    train_lp(model, tokens["train"], cfg)
    slot_tokens = [f"e:{t}" for t in model.entity_slots] + [f"r:{t}" for t in model.relation_slots]
    slot_rows = list(model.entity_slots.values()) + list(model.relation_slots.values())
    write_embedding_tsv(slot_tokens, model.vectors[slot_rows], args.out)


def _cmd_eval(args) -> None:
    from .linkpred import LPModel
    import numpy as np

    graph, tokens = _prepare_lp(args)
    slot_tokens, matrix = read_embedding_tsv(args.model)
    entity_slots: dict[str, int] = {}
    relation_slots: dict[str, int] = {}
    for i, tok in enumerate(slot_tokens):
        if tok.startswith("e:"):
            entity_slots[tok[2:]] = i
        elif tok.startswith("r:"):
            relation_slots.setdefault(tok[2:], i)
        else:
            raise MrmBenchError(f"bad checkpoint row prefix: {tok!r}")
    model = LPModel(
        vectors=np.asarray(matrix),
        entity_slots=entity_slots,
        relation_slots=relation_slots,
        entity_tokens=list(entity_slots),
        norm=args.norm,
    )
    known = set(tokens["train"]) | set(tokens["valid"]) | set(tokens["test"])
    report = evaluate(model, tokens["test"], known)
    _write_json(report.as_dict(), args.out)


def _cmd_pipeline(args) -> None:
    cfg = PipelineConfig(
        input_path=args.input,
        input_kind=args.input_kind,
        mrms=tuple(args.mrms),
        out_dir=args.out_dir,
        emit_type=args.emit_type,
        hyper_only=args.hyper_only,
        ratios=tuple(args.ratios),
        split_seed=args.seed,
        walk=_walk_config(args),
        embed=_embed_config(args),
        lp=_lp_config(args),
    )
    reports = run_pipeline(cfg)
    summary = {mrm: r.as_dict() for mrm, r in reports.items()}
    sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")


def _cmd_search(args) -> None:
    base = PipelineConfig(
        input_path=args.input,
        input_kind=args.input_kind,
        mrms=(args.mrm,),
        out_dir=args.out_dir,
        hyper_only=args.hyper_only,
        ratios=tuple(args.ratios),
        split_seed=args.seed,
        embed=_embed_config(args),
        lp=_lp_config(args),
    )
    space = SearchSpace(budget=args.budget)
    best, log = random_search(space, base, seed=args.seed, mrm=args.mrm)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trial_log(log, out_dir / "trials.json")
    _write_json(best, str(out_dir / "best.json"))
    sys.stdout.write(json.dumps(best, sort_keys=True, indent=2) + "\n")


def _cmd_report(args) -> None:
    log = read_trial_log(args.trials)
    scores = report_importance(log, bins=args.bins)
    _write_json(scores, args.out)


_COMMANDS = {
    "convert": ("convert", _cmd_convert),
    "stats": ("ingest", _cmd_stats),
    "profile-qt": ("ingest", _cmd_profile_qt),
    "split": ("split", _cmd_split),
    "walk": ("walk", _cmd_walk),
    "embed": ("embed", _cmd_embed),
    "train-lp": ("train", _cmd_train_lp),
    "eval": ("eval", _cmd_eval),
    "pipeline": ("ingest", _cmd_pipeline),
    "search": ("search", _cmd_search),
    "report": ("report", _cmd_report),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    default_stage, fn = _COMMANDS[args.command]
    try:
        fn(args)
    except StageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_CODES.get(exc.stage, EXIT_CODES[default_stage])
    except (MrmBenchError, OSError) as exc:
        sys.stderr.write(f"[{default_stage}] {exc}\n")
        return EXIT_CODES[default_stage]
    return 0


if __name__ == "__main__":
    sys.exit(main())
