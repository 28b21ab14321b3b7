"""Parsers and serializers for every on-disk format the toolkit touches."""

from .corpus import read_corpus, write_corpus
from .embeddings_io import read_embedding_tsv, write_embedding_tsv
from .tokens import term_token, token_term
from .turtle import PrefixTable, parse_turtle_star, serialize
from .wd50k import parse_wd50k_row, parse_wd50k_text, serialize_wd50k_row

__all__ = [
    "PrefixTable",
    "parse_turtle_star",
    "serialize",
    "parse_wd50k_row",
    "parse_wd50k_text",
    "serialize_wd50k_row",
    "term_token",
    "token_term",
    "read_corpus",
    "write_corpus",
    "read_embedding_tsv",
    "write_embedding_tsv",
]
