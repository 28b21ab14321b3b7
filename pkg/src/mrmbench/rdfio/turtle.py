"""Turtle / Turtle-star subset: directives, prefixed names, blank nodes,
language-tagged literals, `;`/`,` lists, `a`, and nested quoted triples.

Deliberately not a full Turtle 1.1 grammar: no collections, no numeric or
boolean shorthand, no datatyped literals, no multi-line strings. `#` is a
comment only at token boundaries so that local names like `P166#1` survive.
"""

from __future__ import annotations

from ..errors import MrmBenchError, ParseError, UnsupportedShapeError
from ..graph import Graph
from ..terms import BlankNode, Iri, Literal, QtRef, Term, Triple
from ..vocab import RDF_TYPE

_PN_LOCAL_CHARS = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-#%"
)
_ESCAPE_MAP = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


class PrefixTable:
    """Prefix → namespace map; expansion then re-compaction is identity."""

    def __init__(self, mapping: dict[str, str] | None = None):
        self._map: dict[str, str] = {}
        for prefix, ns in (mapping or {}).items():
            self.register(prefix, ns)

    def register(self, prefix: str, namespace: str) -> None:
        existing = self._map.get(prefix)
        if existing is not None and existing != namespace:
            raise MrmBenchError(f"duplicate prefix {prefix!r}: {existing!r} vs {namespace!r}")
        self._map[prefix] = namespace

    def namespace(self, prefix: str) -> str | None:
        return self._map.get(prefix)

    def expand(self, prefix: str, local: str) -> str:
        ns = self._map.get(prefix)
        if ns is None:
            raise KeyError(prefix)
        return ns + local

    def compact(self, iri_text: str) -> str | None:
        """Longest-namespace compaction, or None if no prefix applies cleanly."""
        best: tuple[str, str] | None = None
        for prefix, ns in self._map.items():
            if iri_text.startswith(ns) and (best is None or len(ns) > len(best[1])):
                best = (prefix, ns)
        if best is None:
            return None
        local = iri_text[len(best[1]) :]
        if local and all(c in _PN_LOCAL_CHARS or c == "." for c in local) and not local.endswith("."):
            return f"{best[0]}:{local}"
        return None

    def items(self):
        return self._map.items()

    def copy(self) -> "PrefixTable":
        return PrefixTable(dict(self._map))


class _Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind: str, value, pos: int):
        self.kind = kind
        self.value = value
        self.pos = pos

    def __repr__(self):  # pragma: no cover - debug aid
        return f"_Token({self.kind}, {self.value!r}, {self.pos})"


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        at = self.pos if pos is None else pos
        return ParseError(message, _byte_offset(self.text, at))

    def tokens(self) -> list[_Token]:
        out = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _skip_ws(self) -> None:
        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c.isspace():
                self.pos += 1
            elif c == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self.pos += 1
            else:
                return

    def _next(self) -> _Token:
        self._skip_ws()
        text, start = self.text, self.pos
        if self.pos >= len(text):
            return _Token("eof", None, start)
        c = text[self.pos]
        if text.startswith("<<", self.pos):
            self.pos += 2
            return _Token("qt_open", None, start)
        if text.startswith(">>", self.pos):
            self.pos += 2
            return _Token("qt_close", None, start)
        if c == "<":
            return self._iriref(start)
        if c == '"':
            return self._literal(start)
        if c == "@":
            return self._at_keyword(start)
        if text.startswith("_:", self.pos):
            return self._blank(start)
        if c == ".":
            self.pos += 1
            return _Token("dot", None, start)
        if c == ";":
            self.pos += 1
            return _Token("semi", None, start)
        if c == ",":
            self.pos += 1
            return _Token("comma", None, start)
        if c == ">":
            raise self.error("unbalanced '>>'", start)
        return self._name(start)

    def _iriref(self, start: int) -> _Token:
        end = self.text.find(">", self.pos + 1)
        if end < 0:
            raise self.error("unterminated IRI", start)
        body = self.text[self.pos + 1 : end]
        if any(ch.isspace() for ch in body):
            raise self.error(f"whitespace inside IRI <{body}>", start)
        self.pos = end + 1
        return _Token("iri", body, start)

    def _literal(self, start: int) -> _Token:
        text = self.text
        i = self.pos + 1
        out = []
        while i < len(text):
            c = text[i]
            if c == "\\":
                if i + 1 >= len(text):
                    raise self.error("dangling escape in literal", i)
                esc = text[i + 1]
                if esc == "u":
                    if i + 6 > len(text):
                        raise self.error("bad \\u escape", i)
                    out.append(chr(int(text[i + 2 : i + 6], 16)))
                    i += 6
                    continue
                if esc not in _ESCAPE_MAP:
                    raise self.error(f"unknown escape \\{esc}", i)
                out.append(_ESCAPE_MAP[esc])
                i += 2
                continue
            if c == '"':
                break
            if c == "\n":
                raise self.error("newline inside literal", i)
            out.append(c)
            i += 1
        else:
            raise self.error("unterminated literal", start)
        i += 1
        lang = None
        if text.startswith("^^", i):
            raise self.error("datatyped literals are outside the supported subset", i)
        if i < len(text) and text[i] == "@":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "-"):
                j += 1
            lang = text[i + 1 : j]
            if not lang:
                raise self.error("empty language tag", i)
            i = j
        self.pos = i
        return _Token("literal", ("".join(out), lang), start)

    def _at_keyword(self, start: int) -> _Token:
        if self.text.startswith("@prefix", self.pos):
            self.pos += len("@prefix")
            return _Token("prefix_kw", None, start)
        raise self.error("unknown @-directive", start)

    def _blank(self, start: int) -> _Token:
        i = self.pos + 2
        text = self.text
        j = i
        while j < len(text) and (text[j].isalnum() or text[j] in "_-"):
            j += 1
        if j == i:
            raise self.error("empty blank node label", start)
        self.pos = j
        return _Token("blank", text[i:j], start)

    def _name(self, start: int) -> _Token:
        text = self.text
        i = self.pos
        j = i
        while j < len(text) and (text[j].isalnum() or text[j] in "_-"):
            j += 1
        prefix = text[i:j]
        if j < len(text) and text[j] == ":":
            j += 1
            k = j
            while k < len(text):
                c = text[k]
                if c in _PN_LOCAL_CHARS:
                    k += 1
                elif c == "." and k + 1 < len(text) and text[k + 1] in _PN_LOCAL_CHARS:
                    k += 1
                else:
                    break
            local = text[j:k]
            self.pos = k
            return _Token("pname", (prefix, local), start)
        if prefix == "a":
            self.pos = j
            return _Token("a", None, start)
        raise self.error(f"unexpected token {text[i:j] or text[i]!r}", start)


class _Parser:
    def __init__(self, text: str, prefixes: PrefixTable | None):
        self.text = text
        self.prefixes = prefixes.copy() if prefixes else PrefixTable()
        self.tokens = _Lexer(text).tokens()
        self.i = 0
        self.graph = Graph()

    def error(self, message: str, tok: _Token) -> ParseError:
        return ParseError(message, _byte_offset(self.text, tok.pos))

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            raise self.error(f"expected {kind}, found {tok.kind}", tok)
        self.i += 1
        return tok

    def parse(self) -> Graph:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return self.graph
            if tok.kind == "prefix_kw":
                self._directive()
            else:
                self._statement()

    def _directive(self) -> None:
        self.take("prefix_kw")
        name = self.take("pname")
        prefix, local = name.value
        if local:
            raise self.error("prefix declaration must end with ':'", name)
        iri = self.take("iri")
        self.take("dot")
        try:
            self.prefixes.register(prefix, iri.value)
        except MrmBenchError as exc:
            raise self.error(str(exc), name) from exc

    def _statement(self) -> None:
        subject = self._term(position="subject")
        self._predicate_object_list(subject)
        self.take("dot")

    def _predicate_object_list(self, subject: Term) -> None:
        while True:
            predicate = self._verb()
            while True:
                obj = self._term(position="object")
                self.graph.add(Triple(subject, predicate, obj))
                if self.peek().kind == "comma":
                    self.take("comma")
                    continue
                break
            if self.peek().kind == "semi":
                while self.peek().kind == "semi":
                    self.take("semi")
                if self.peek().kind == "dot":
                    return  # tolerate trailing ';'
                continue
            return

    def _verb(self) -> Iri:
        tok = self.peek()
        if tok.kind == "a":
            self.take()
            return RDF_TYPE
        term = self._term(position="predicate")
        if not isinstance(term, Iri):
            raise self.error("predicate must be an IRI", tok)
        return term

    def _term(self, position: str) -> Term:
        tok = self.peek()
        if tok.kind == "iri":
            self.take()
            return Iri(tok.value)
        if tok.kind == "pname":
            self.take()
            prefix, local = tok.value
            try:
                return Iri(self.prefixes.expand(prefix, local))
            except KeyError:
                raise self.error(f"unknown prefix {prefix!r}", tok) from None
        if tok.kind == "blank":
            self.take()
            if position == "predicate":
                raise self.error("blank node cannot be a predicate", tok)
            return BlankNode(tok.value)
        if tok.kind == "literal":
            self.take()
            if position in ("subject", "predicate"):
                raise self.error(f"literal cannot appear in {position} position", tok)
            lex, lang = tok.value
            return Literal(lex, lang)
        if tok.kind == "qt_open":
            if position == "predicate":
                raise self.error("quoted triple cannot be a predicate", tok)
            return self._quoted_triple()
        if tok.kind == "qt_close":
            raise self.error("unbalanced '>>'", tok)
        raise self.error(f"unexpected {tok.kind} in {position} position", tok)

    def _quoted_triple(self) -> QtRef:
        self.take("qt_open")
        s = self._term(position="subject")
        p = self._verb()
        o = self._term(position="object")
        tok = self.peek()
        if tok.kind != "qt_close":
            raise self.error("unbalanced '<<': expected '>>'", tok)
        self.take("qt_close")
        return QtRef(self.graph.intern_qt(s, p, o))


def parse_turtle_star(text: str, prefixes: PrefixTable | None = None) -> Graph:
    """Parse the supported Turtle-star subset into a fresh graph."""
    return _Parser(text, prefixes).parse()


# -- serialization ---------------------------------------------------------


def _escape_literal(lex: str) -> str:
    for raw, esc in (("\\", "\\\\"), ('"', '\\"'), ("\n", "\\n"), ("\r", "\\r"), ("\t", "\\t")):
        lex = lex.replace(raw, esc)
    return lex


def _render(graph: Graph, term: Term, prefixes: PrefixTable | None, allow_qt: bool) -> str:
    if isinstance(term, Iri):
        if prefixes is not None:
            compact = prefixes.compact(term.text)
            if compact is not None:
                return compact
        return f"<{term.text}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if isinstance(term, Literal):
        out = f'"{_escape_literal(term.lexical)}"'
        if term.lang:
            out += f"@{term.lang}"
        return out
    if isinstance(term, QtRef):
        if not allow_qt:
            raise UnsupportedShapeError("quoted triples cannot be expressed in plain Turtle")
        qt = graph.resolve(term)
        if qt is None:
            raise MrmBenchError(f"dangling quoted-triple reference {term.qt_id}")
        s = _render(graph, qt.subject, prefixes, allow_qt)
        p = _render(graph, qt.predicate, prefixes, allow_qt)
        o = _render(graph, qt.object, prefixes, allow_qt)
        return f"<< {s} {p} {o} >>"
    raise MrmBenchError(f"unrenderable term {term!r}")


def serialize(graph: Graph, format: str, prefixes: PrefixTable | None = None) -> str:
    """Serialize a graph; `parse(serialize(g))` is isomorphic to `g`.

    Formats: `turtle` (no quoted triples allowed), `turtle-star`,
    `ntriples-star` (no prefix compaction), `wd50k-csv` (qualifier rows,
    only for graphs shaped like the hyper-fact RDR conversion).
    """
    if format == "wd50k-csv":
        from ..convert import extract_hyperfacts
        from .wd50k import serialize_wd50k_row

        facts = extract_hyperfacts(graph, "RDR")
        return "".join(serialize_wd50k_row(f) + "\n" for f in facts)
    if format not in ("turtle", "turtle-star", "ntriples-star"):
        raise MrmBenchError(f"unknown serialization format {format!r}")
    allow_qt = format != "turtle"
    table = prefixes if format != "ntriples-star" else None
    lines = []
    if table is not None:
        for prefix, ns in table.items():
            lines.append(f"@prefix {prefix}: <{ns}> .")
        if lines:
            lines.append("")
    for t in graph.triples:
        s = _render(graph, t.subject, table, allow_qt)
        p = _render(graph, t.predicate, table, allow_qt)
        o = _render(graph, t.object, table, allow_qt)
        lines.append(f"{s} {p} {o} .")
    return "\n".join(lines) + ("\n" if lines else "")
