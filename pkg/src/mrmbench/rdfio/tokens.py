"""Canonical corpus-token encoding for graph terms.

Walk corpora are plain text with space-separated tokens, so every term must
encode to a single atomic token. Quoted triples use `|` as the component
separator (`<<s|p|o>>`, recursive); literal-internal whitespace is also
folded to `|` after N-Triples-style escaping. `|` is reserved: any raw term
containing it is rejected.
"""

from __future__ import annotations

from ..errors import TokenEncodingError
from ..graph import Graph
from ..terms import BlankNode, Iri, Literal, QtRef, Term

RESERVED = "|"
_ESCAPES = [("\\", "\\\\"), ('"', '\\"'), ("\n", "\\n"), ("\r", "\\r"), ("\t", "\\t")]


def _check_raw(text: str, what: str) -> None:
    if RESERVED in text:
        raise TokenEncodingError(f"{what} contains reserved character {RESERVED!r}: {text!r}")


def _check_brackets(text: str, what: str) -> None:
    if "<<" in text or ">>" in text:
        raise TokenEncodingError(f"{what} contains quoted-triple brackets: {text!r}")


def term_token(graph: Graph, term: Term) -> str:
    """Encode a term as an atomic corpus token (injective per graph)."""
    if isinstance(term, Iri):
        _check_raw(term.text, "IRI")
        _check_brackets(term.text, "IRI")
        return term.text
    if isinstance(term, BlankNode):
        _check_raw(term.label, "blank node label")
        _check_brackets(term.label, "blank node label")
        return "_:" + term.label
    if isinstance(term, Literal):
        _check_raw(term.lexical, "literal")
        lex = term.lexical
        for raw, esc in _ESCAPES:
            lex = lex.replace(raw, esc)
        lex = lex.replace(" ", RESERVED)
        tok = f'"{lex}"'
        if term.lang:
            _check_raw(term.lang, "language tag")
            tok += "@" + term.lang
        return tok
    if isinstance(term, QtRef):
        qt = graph.resolve(term)
        if qt is None:
            raise TokenEncodingError(f"dangling quoted-triple reference {term.qt_id}")
        parts = (
            term_token(graph, qt.subject),
            term_token(graph, qt.predicate),
            term_token(graph, qt.object),
        )
        return "<<" + RESERVED.join(parts) + ">>"
    raise TokenEncodingError(f"unencodable term {term!r}")


def _split_qt_body(body: str, token: str) -> list[str]:
    """Split a QT token body on top-level separators, respecting nesting and quotes."""
    parts, depth, in_quote, start, i = [], 0, False, 0, 0
    while i < len(body):
        c = body[i]
        if in_quote:
            if c == "\\":
                i += 2
                continue
            if c == '"':
                in_quote = False
        elif c == '"':
            in_quote = True
        elif body.startswith("<<", i):
            depth += 1
            i += 2
            continue
        elif body.startswith(">>", i):
            depth -= 1
            i += 2
            continue
        elif c == RESERVED and depth == 0:
            parts.append(body[start:i])
            start = i + 1
        i += 1
    parts.append(body[start:])
    if depth != 0 or in_quote:
        raise TokenEncodingError(f"malformed quoted-triple token: {token!r}")
    return parts


def token_term(token: str, graph: Graph) -> Term:
    """Decode a corpus token back into a term, interning quoted triples."""
    if token.startswith("<<") and token.endswith(">>"):
        parts = _split_qt_body(token[2:-2], token)
        if len(parts) != 3:
            raise TokenEncodingError(f"quoted-triple token needs 3 components: {token!r}")
        s = token_term(parts[0], graph)
        p = token_term(parts[1], graph)
        o = token_term(parts[2], graph)
        if not isinstance(p, Iri):
            raise TokenEncodingError(f"quoted-triple predicate is not an IRI: {token!r}")
        return QtRef(graph.intern_qt(s, p, o))
    if token.startswith('"'):
        end = _closing_quote(token)
        lex = token[1:end].replace(RESERVED, " ")
        for raw, esc in reversed(_ESCAPES):
            lex = lex.replace(esc, raw)
        rest = token[end + 1 :]
        if rest.startswith("@"):
            return Literal(lex, rest[1:])
        if rest:
            raise TokenEncodingError(f"trailing characters after literal: {token!r}")
        return Literal(lex)
    if token.startswith("_:"):
        return BlankNode(token[2:])
    if not token:
        raise TokenEncodingError("empty token")
    return Iri(token)


def _closing_quote(token: str) -> int:
    i = 1
    while i < len(token):
        if token[i] == "\\":
            i += 2
            continue
        if token[i] == '"':
            return i
        i += 1
    raise TokenEncodingError(f"unterminated literal token: {token!r}")
