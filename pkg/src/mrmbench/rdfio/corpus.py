"""Walk-corpus text files: one walk per line, single-space separated tokens."""

from __future__ import annotations

from pathlib import Path
from typing import IO, Union

from ..errors import TokenEncodingError

Sink = Union[str, Path, IO[str]]


def _tokens_ok(tokens: list[str]) -> None:
    for tok in tokens:
        if not tok:
            raise TokenEncodingError("empty token in corpus")
        if any(c.isspace() for c in tok):
            raise TokenEncodingError(f"token contains whitespace: {tok!r}")


def write_corpus(corpus, sink: Sink) -> None:
    lines = []
    for seq in corpus.sequences:
        _tokens_ok(seq)
        lines.append(" ".join(seq))
    text = "\n".join(lines)
    if lines:
        text += "\n"
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text, encoding="utf-8")


def read_corpus(source: Sink):
    from ..walks import WalkCorpus

    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    sequences = [line.split(" ") for line in text.splitlines() if line]
    return WalkCorpus(sequences)
