"""Recursive-descent parser for the concrete LTL grammar.

Grammar (whitespace between tokens is insignificant)::

    formula  := equiv
    equiv    := implies ( "<->" equiv )?          right-associative
    implies  := or ( "->" implies )?              right-associative
    or       := and ( "|" and )*                  left-associative
    and      := binseq ( "&" binseq )*            left-associative
    binseq   := unary ( ("U" | "S") unary )*      left-associative
    unary    := ("!" | "X" | "F" | "G" | "Y" | "O" | "H") unary | atom
    atom     := "(" formula ")" | TRUE | FALSE | AP
    TRUE     := "true" | "True" | "TRUE"
    FALSE    := "false" | "False" | "FALSE"
    AP       := [a-zA-Z][a-zA-Z0-9]*  (single letters X F G U Y O H S are
                operator tokens, never atoms)

Unary operators bind tightest; then U and S; then &; then |; then ->;
then <-> loosest.  "<->" is matched before "->" so it never lexes as
"<" followed by "->".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import FormulaSyntaxError, SyntaxErrorKind
from .formulas import (
    And,
    AtomicProp,
    Equiv,
    Eventually,
    Formula,
    Globally,
    Historically,
    Implies,
    LiteralFalse,
    LiteralTrue,
    Next,
    Not,
    Once,
    Or,
    Since,
    Until,
    Yesterday,
)


class _Tok(Enum):
    LPAREN = "("
    RPAREN = ")"
    NOT = "!"
    AND = "&"
    OR = "|"
    IMPLIES = "->"
    EQUIV = "<->"
    NEXT = "X"
    EVENTUALLY = "F"
    GLOBALLY = "G"
    UNTIL = "U"
    YESTERDAY = "Y"
    ONCE = "O"
    HISTORICALLY = "H"
    SINCE = "S"
    TRUE = "true"
    FALSE = "false"
    AP = "ap"
    EOF = "end of input"


@dataclass(frozen=True)
class _Token:
    kind: _Tok
    text: str
    pos: int


_UNARY_OPS = {
    _Tok.NOT: Not,
    _Tok.NEXT: Next,
    _Tok.EVENTUALLY: Eventually,
    _Tok.GLOBALLY: Globally,
    _Tok.YESTERDAY: Yesterday,
    _Tok.ONCE: Once,
    _Tok.HISTORICALLY: Historically,
}

_BINARY_TOKS = {
    _Tok.AND, _Tok.OR, _Tok.IMPLIES, _Tok.EQUIV, _Tok.UNTIL, _Tok.SINCE,
}

_OPERATOR_LETTERS = {
    "X": _Tok.NEXT,
    "F": _Tok.EVENTUALLY,
    "G": _Tok.GLOBALLY,
    "U": _Tok.UNTIL,
    "Y": _Tok.YESTERDAY,
    "O": _Tok.ONCE,
    "H": _Tok.HISTORICALLY,
    "S": _Tok.SINCE,
}

_TRUE_SPELLINGS = {"true", "True", "TRUE"}
_FALSE_SPELLINGS = {"false", "False", "FALSE"}


def _tokenize(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            toks.append(_Token(_Tok.LPAREN, c, i))
            i += 1
        elif c == ")":
            toks.append(_Token(_Tok.RPAREN, c, i))
            i += 1
        elif c == "!":
            toks.append(_Token(_Tok.NOT, c, i))
            i += 1
        elif c == "&":
            toks.append(_Token(_Tok.AND, c, i))
            i += 1
        elif c == "|":
            toks.append(_Token(_Tok.OR, c, i))
            i += 1
        elif text.startswith("<->", i):
            toks.append(_Token(_Tok.EQUIV, "<->", i))
            i += 3
        elif text.startswith("->", i):
            toks.append(_Token(_Tok.IMPLIES, "->", i))
            i += 2
        elif c.isalpha():
            j = i + 1
            while j < n and text[j].isalnum() and text[j].isascii():
                j += 1
            word = text[i:j]
            if not word.isascii():
                raise FormulaSyntaxError(
                    SyntaxErrorKind.INVALID_AP, i,
                    "an atomic proposition matching [a-zA-Z][a-zA-Z0-9]*",
                )
            if word in _TRUE_SPELLINGS:
                toks.append(_Token(_Tok.TRUE, word, i))
            elif word in _FALSE_SPELLINGS:
                toks.append(_Token(_Tok.FALSE, word, i))
            elif word in _OPERATOR_LETTERS:
                toks.append(_Token(_OPERATOR_LETTERS[word], word, i))
            else:
                toks.append(_Token(_Tok.AP, word, i))
            i = j
        elif c.isdigit() or c == "_":
            raise FormulaSyntaxError(
                SyntaxErrorKind.INVALID_AP, i,
                "an atomic proposition starting with a letter",
            )
        else:
            raise FormulaSyntaxError(
                SyntaxErrorKind.UNEXPECTED_TOKEN, i,
                f"a formula token, not {c!r}",
            )
    toks.append(_Token(_Tok.EOF, "", n))
    return toks


class _Parser:
    def __init__(self, toks: list[_Token]):
        self.toks = toks
        self.i = 0
        self.depth = 0

    @property
    def cur(self) -> _Token:
        return self.toks[self.i]

    def advance(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse_formula(self) -> Formula:
        return self.parse_equiv()

    def parse_equiv(self) -> Formula:
        left = self.parse_implies()
        if self.cur.kind is _Tok.EQUIV:
            self.advance()
            return Equiv(left, self.parse_equiv())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.cur.kind is _Tok.IMPLIES:
            self.advance()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.cur.kind is _Tok.OR:
            self.advance()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_binseq()
        while self.cur.kind is _Tok.AND:
            self.advance()
            left = And(left, self.parse_binseq())
        return left

    def parse_binseq(self) -> Formula:
        left = self.parse_unary()
        while self.cur.kind in (_Tok.UNTIL, _Tok.SINCE):
            ctor = Until if self.cur.kind is _Tok.UNTIL else Since
            self.advance()
            left = ctor(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        ctor = _UNARY_OPS.get(self.cur.kind)
        if ctor is not None:
            self.advance()
            return ctor(self.parse_unary())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self.cur
        if tok.kind is _Tok.LPAREN:
            self.advance()
            self.depth += 1
            inner = self.parse_formula()
            if self.cur.kind is not _Tok.RPAREN:
                raise FormulaSyntaxError(
                    SyntaxErrorKind.UNBALANCED_PARENTHESES, self.cur.pos,
                    "')' closing the parenthesis",
                )
            self.advance()
            self.depth -= 1
            return inner
        if tok.kind is _Tok.TRUE:
            self.advance()
            return LiteralTrue()
        if tok.kind is _Tok.FALSE:
            self.advance()
            return LiteralFalse()
        if tok.kind is _Tok.AP:
            self.advance()
            return AtomicProp(tok.text)
        if tok.kind in _BINARY_TOKS:
            raise FormulaSyntaxError(
                SyntaxErrorKind.MISSING_OPERAND, tok.pos,
                f"a left operand before {tok.text!r}",
            )
        if tok.kind is _Tok.RPAREN:
            if self.depth == 0:
                raise FormulaSyntaxError(
                    SyntaxErrorKind.UNBALANCED_PARENTHESES, tok.pos,
                    "a formula, not a stray ')'",
                )
            raise FormulaSyntaxError(
                SyntaxErrorKind.MISSING_OPERAND, tok.pos,
                "a formula before ')'",
            )
        # EOF while an operand was expected
        raise FormulaSyntaxError(
            SyntaxErrorKind.MISSING_OPERAND, tok.pos, "a formula",
        )


def parse_ltl(text: str) -> Formula:
    """Parse concrete LTL syntax into a Formula.

    Raises FormulaSyntaxError for any string outside the grammar; the
    error carries a byte offset, an error kind, and an expected-token
    description.
    """
    toks = _tokenize(text)
    if toks[0].kind is _Tok.EOF:
        raise FormulaSyntaxError(SyntaxErrorKind.EMPTY_INPUT, 0, "a formula")
    parser = _Parser(toks)
    formula = parser.parse_formula()
    tail = parser.cur
    if tail.kind is not _Tok.EOF:
        if tail.kind is _Tok.RPAREN:
            raise FormulaSyntaxError(
                SyntaxErrorKind.UNBALANCED_PARENTHESES, tail.pos,
                "end of input, not a stray ')'",
            )
        raise FormulaSyntaxError(
            SyntaxErrorKind.TRAILING_INPUT, tail.pos,
            f"end of input, not {tail.text!r}",
        )
    return formula


@dataclass(frozen=True)
class WffVerdict:
    """Ground-truth well-formedness verdict for a candidate string."""

    well_formed: bool
    reason: str | None = None
    kind: SyntaxErrorKind | None = None

    def __bool__(self) -> bool:
        return self.well_formed


def check_wff(text: str) -> WffVerdict:
    """WellFormed iff parse_ltl accepts the string; total."""
    try:
        parse_ltl(text)
    except FormulaSyntaxError as exc:
        return WffVerdict(False, str(exc), exc.kind)
    return WffVerdict(True)
