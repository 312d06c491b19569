"""Recursive-descent parser for the cohort query language.

Grammar (EBNF):

    query      := or
    or         := and {"or" and}
    and        := unary {"and" unary}
    unary      := "not" unary | primary
    primary    := "(" query ")" | boolLit | compare | membership
                | existsBp | hasEvent
    compare    := field cmp literal
    membership := field "in" "[" literal {"," literal} "]"
    existsBp   := "exists" "(" "bp" "." series ","
                  "hours" "(" number "," number ")" ","
                  "value" cmp number ")"
    hasEvent   := "has_event" "(" ident
                  ["," "hours" "(" number "," number ")"] ")"
    cmp        := "==" | "!=" | "<" | "<=" | ">" | ">="
    series     := "sbp" | "dbp" | "map"
    literal    := number | quotedString

Keywords are case-insensitive; field names are case-sensitive.
``exists``, ``has_event``, ``hours``, ``value`` and ``bp`` are only
keywords in their grammatical positions, so fields may use those names.
Error offsets are byte positions into the (UTF-8) input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from cohortlab.query.ast import (
    And,
    BoolLit,
    Compare,
    ExistsBp,
    HasEvent,
    In,
    Node,
    Not,
    Or,
    Window,
)
from cohortlab.query.errors import ParseError

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<number>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"(?:[^"\\]|\\.)*")
    | (?P<op>==|!=|<=|>=|<|>)
    | (?P<punct>[()\[\],.])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "or", "not", "in", "true", "false"}


@dataclass(frozen=True)
class _Token:
    kind: str  # keyword name | "ident" | "number" | "string" | "op" | the punct char | "eof"
    text: str
    pos: int  # character position


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _escape(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = self._lex(text)
        self.i = 0

    def _lex(self, text: str) -> list[_Token]:
        tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(self._byte(pos), ["a valid token"], repr(text[pos]))
            kind = m.lastgroup
            tok = m.group()
            if kind == "ident":
                lowered = tok.lower()
                kind = lowered if lowered in _KEYWORDS else "ident"
            elif kind == "punct":
                kind = tok
            if kind != "ws":
                tokens.append(_Token(kind, tok, pos))
            pos = m.end()
        tokens.append(_Token("eof", "end of input", len(text)))
        return tokens

    def _byte(self, pos: int) -> int:
        return len(self.text[:pos].encode("utf-8"))

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def _peek(self, ahead: int = 1) -> _Token:
        j = min(self.i + ahead, len(self.tokens) - 1)
        return self.tokens[j]

    def _advance(self) -> _Token:
        tok = self.cur
        if tok.kind != "eof":
            self.i += 1
        return tok

    def _fail(self, expected: list[str], at: _Token | None = None):
        tok = at if at is not None else self.cur
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(self._byte(tok.pos), expected, found)

    def _expect(self, kind: str, expected: str) -> _Token:
        if self.cur.kind != kind:
            self._fail([expected])
        return self._advance()

    def _expect_contextual(self, word: str) -> _Token:
        if self.cur.kind != "ident" or self.cur.text.lower() != word:
            self._fail([f"'{word}'"])
        return self._advance()

    # -- grammar -----------------------------------------------------------

    def parse(self) -> Node:
        node = self._or()
        if self.cur.kind != "eof":
            self._fail(["'and'", "'or'", "end of input"])
        return node

    def _or(self) -> Node:
        parts = [self._and()]
        while self.cur.kind == "or":
            self._advance()
            parts.append(self._and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def _and(self) -> Node:
        parts = [self._unary()]
        while self.cur.kind == "and":
            self._advance()
            parts.append(self._unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def _unary(self) -> Node:
        if self.cur.kind == "not":
            self._advance()
            return Not(self._unary())
        return self._primary()

    def _primary(self) -> Node:
        tok = self.cur
        if tok.kind == "(":
            self._advance()
            node = self._or()
            self._expect(")", "')'")
            return node
        if tok.kind == "true":
            self._advance()
            return BoolLit(True)
        if tok.kind == "false":
            self._advance()
            return BoolLit(False)
        if tok.kind == "ident":
            lowered = tok.text.lower()
            if lowered == "exists" and self._peek().kind == "(":
                return self._exists()
            if lowered == "has_event" and self._peek().kind == "(":
                return self._has_event()
            return self._field_predicate()
        self._fail(["'('", "'not'", "'true'", "'false'", "field name",
                    "'exists'", "'has_event'"])

    def _field_predicate(self) -> Node:
        field = self._advance().text
        if self.cur.kind == "in":
            self._advance()
            self._expect("[", "'['")
            values = [self._literal()]
            while self.cur.kind == ",":
                self._advance()
                values.append(self._literal())
            self._expect("]", "']'")
            return In(field, tuple(values))
        if self.cur.kind == "op":
            op = self._advance().text
            return Compare(field, op, self._literal())
        self._fail(["comparison operator", "'in'"])

    def _literal(self):
        tok = self.cur
        if tok.kind == "number":
            self._advance()
            return self._num(tok)
        if tok.kind == "string":
            self._advance()
            return _unescape(tok.text[1:-1])
        self._fail(["number", "quoted string"])

    def _num(self, tok: _Token):
        if re.fullmatch(r"-?\d+", tok.text):
            return int(tok.text)
        return float(tok.text)

    def _number(self) -> tuple[float, _Token]:
        tok = self.cur
        if tok.kind != "number":
            self._fail(["number"])
        self._advance()
        return self._num(tok), tok

    def _window(self) -> Window:
        self._expect_contextual("hours")
        self._expect("(", "'('")
        lo, lo_tok = self._number()
        self._expect(",", "','")
        hi, _ = self._number()
        self._expect(")", "')'")
        try:
            return Window(lo, hi)
        except ValueError:
            raise ParseError(self._byte(lo_tok.pos),
                             ["window bounds with 0 <= lo < hi"],
                             f"hours({lo},{hi})") from None

    def _exists(self) -> Node:
        self._advance()  # exists
        self._expect("(", "'('")
        self._expect_contextual("bp")
        self._expect(".", "'.'")
        series_tok = self.cur
        if series_tok.kind != "ident" or series_tok.text.lower() not in ("sbp", "dbp", "map"):
            self._fail(["'sbp'", "'dbp'", "'map'"])
        self._advance()
        self._expect(",", "','")
        window = self._window()
        self._expect(",", "','")
        self._expect_contextual("value")
        if self.cur.kind != "op":
            self._fail(["comparison operator"])
        op = self._advance().text
        threshold, _ = self._number()
        self._expect(")", "')'")
        return ExistsBp(series_tok.text.lower(), window, op, threshold)

    def _has_event(self) -> Node:
        self._advance()  # has_event
        self._expect("(", "'('")
        kind = self._expect("ident", "event kind").text
        window = None
        if self.cur.kind == ",":
            self._advance()
            window = self._window()
        self._expect(")", "')'")
        return HasEvent(kind, window)


def parse(text: str) -> Node:
    """Parse query text into an AST; raises :class:`ParseError` with a
    byte offset on malformed input."""
    return _Parser(text).parse()
