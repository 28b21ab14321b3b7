"""WD50K qualifier-row format: s,p,o followed by (qr,qv) pairs."""

from __future__ import annotations

from ..errors import MalformedRowError, UnsupportedShapeError
from ..terms import HyperFact, Iri, Term


def parse_wd50k_row(line: str, line_no: int = 1) -> HyperFact:
    """Parse one comma-separated row into a HyperFact.

    Fields 1-3 become s, p, o; the remaining fields pair up as qualifiers
    in order. Raises MalformedRowError on fewer than 3 fields or a dangling
    qualifier relation.
    """
    fields = [f.strip() for f in line.rstrip("\n").split(",")]
    if line.strip() == "":
        raise MalformedRowError("empty row", line_no)
    if len(fields) < 3:
        raise MalformedRowError(f"expected at least 3 fields, got {len(fields)}", line_no)
    trailing = fields[3:]
    if len(trailing) % 2 != 0:
        raise MalformedRowError(
            f"odd number of qualifier fields ({len(trailing)}): dangling relation without value",
            line_no,
        )
    try:
        s, p, o = Iri(fields[0]), Iri(fields[1]), Iri(fields[2])
        quals = tuple(
            (Iri(trailing[i]), Iri(trailing[i + 1])) for i in range(0, len(trailing), 2)
        )
    except Exception as exc:
        raise MalformedRowError(str(exc), line_no) from exc
    return HyperFact(s, p, o, quals)


def parse_wd50k_text(text: str) -> list[HyperFact]:
    """Parse a whole document; blank lines are skipped, errors carry line numbers."""
    facts = []
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        facts.append(parse_wd50k_row(line, i))
    return facts


def _token(term: Term, what: str) -> str:
    if not isinstance(term, Iri):
        raise UnsupportedShapeError(f"wd50k rows hold bare IRI tokens; {what} is {term!r}")
    return term.text


def serialize_wd50k_row(fact: HyperFact) -> str:
    parts = [_token(fact.s, "subject"), _token(fact.p, "predicate"), _token(fact.o, "object")]
    for qr, qv in fact.qualifiers:
        parts.append(_token(qr, "qualifier relation"))
        parts.append(_token(qv, "qualifier value"))
    return ",".join(parts)
