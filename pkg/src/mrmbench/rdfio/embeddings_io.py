"""Embedding tables as TSV: header `vocab_size<TAB>dim`, then token + values."""

from __future__ import annotations

from pathlib import Path
from typing import IO, Union

import numpy as np

from ..errors import MrmBenchError, TokenEncodingError

Sink = Union[str, Path, IO[str]]


def write_embedding_tsv(tokens: list[str], matrix: np.ndarray, sink: Sink) -> None:
    if len(tokens) != matrix.shape[0]:
        raise MrmBenchError("token list and matrix row count disagree")
    lines = [f"{len(tokens)}\t{matrix.shape[1]}"]
    for tok, row in zip(tokens, matrix):
        if "\t" in tok or "\n" in tok:
            raise TokenEncodingError(f"token not TSV-safe: {tok!r}")
        lines.append(tok + "\t" + "\t".join(repr(float(v)) for v in row))
    text = "\n".join(lines) + "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8")


def read_embedding_tsv(source: Sink) -> tuple[list[str], np.ndarray]:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise MrmBenchError("empty embedding file")
    try:
        size, dim = (int(x) for x in lines[0].split("\t"))
    except ValueError as exc:
        raise MrmBenchError(f"bad embedding header: {lines[0]!r}") from exc
    tokens: list[str] = []
    matrix = np.zeros((size, dim), dtype=np.float64)
    for i, line in enumerate(lines[1 : size + 1]):
        parts = line.split("\t")
        if len(parts) != dim + 1:
            raise MrmBenchError(f"embedding row {i + 1} has {len(parts) - 1} values, expected {dim}")
        tokens.append(parts[0])
        matrix[i] = [float(v) for v in parts[1:]]
    if len(tokens) != size:
        raise MrmBenchError(f"expected {size} rows, found {len(tokens)}")
    return tokens, matrix
