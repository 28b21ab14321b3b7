"""Locate and load the evaluation corpora.

Real datasets are not redistributed with the toolkit. Point MRMBENCH_DATA
(default: ./data) at a directory containing:

    wd50k_100/   hyper-relational rows, Listing-style CSV (*.txt or *.csv);
                 all files in the directory are concatenated
    kgrc-rdf/    reification-style Turtle documents (*.ttl)

The bundled synthetic corpus lives at data/synthetic-hrkg.csv.
"""

from __future__ import annotations

import os
from pathlib import Path

from .graph import Graph
from .rdfio.turtle import PrefixTable, parse_turtle_star
from .rdfio.wd50k import parse_wd50k_text
from .terms import HyperFact, Triple
from .vocab import DEFAULT_PREFIXES

ENV_VAR = "MRMBENCH_DATA"


def data_root(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(ENV_VAR, "data"))


def _require_dir(path: Path, what: str) -> Path:
    if not path.is_dir():
        raise FileNotFoundError(
            f"{what} not found at {path}; set {ENV_VAR} or see README 'Datasets'"
        )
    return path


def load_wd50k(root: str | None = None, hyper_only: bool = True) -> list[HyperFact]:
    """All WD50K rows under <data>/wd50k_100, optionally qualifier-bearing only."""
    directory = _require_dir(data_root(root) / "wd50k_100", "WD50K(100) directory")
    files = sorted(list(directory.glob("**/*.txt")) + list(directory.glob("**/*.csv")))
    if not files:
        raise FileNotFoundError(f"no row files under {directory}")
    facts: list[HyperFact] = []
    for path in files:
        facts.extend(parse_wd50k_text(path.read_text(encoding="utf-8")))
    if hyper_only:
        facts = [f for f in facts if f.qualifiers]
    return facts


def load_kgrc(root: str | None = None) -> Graph:
    """Merge every Turtle document under <data>/kgrc-rdf into one REF graph."""
    directory = _require_dir(data_root(root) / "kgrc-rdf", "KGRC-RDF directory")
    files = sorted(directory.glob("**/*.ttl"))
    if not files:
        raise FileNotFoundError(f"no .ttl files under {directory}")
    merged = Graph(mrm="REF")
    for path in files:
        parsed = parse_turtle_star(
            path.read_text(encoding="utf-8"), PrefixTable(dict(DEFAULT_PREFIXES))
        )
        remap: dict[int, int] = {}

        def carry(term):
            from .terms import QtRef

            if isinstance(term, QtRef):
                qt = parsed.qt(term.qt_id)
                if term.qt_id not in remap:
                    remap[term.qt_id] = merged.intern_qt(
                        carry(qt.subject), qt.predicate, carry(qt.object)
                    )
                return QtRef(remap[term.qt_id])
            return term

        for t in parsed.triples:
            merged.add(Triple(carry(t.subject), t.predicate, carry(t.object)))
    return merged


def datasets_available(root: str | None = None) -> dict[str, bool]:
    base = data_root(root)
    return {
        "wd50k": (base / "wd50k_100").is_dir(),
        "kgrc": (base / "kgrc-rdf").is_dir(),
    }
