"""Tokenizer shared by the functor, element, formula and proof parsers."""
import re

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<const>'[A-Za-z0-9_]+)
  | (?P<name>[A-Za-z0-9_]+)
  | (?P<op>/\\|\\/|<=|->|[(){}\[\],:/^.*+~=])
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind = kind
        self.value = value
        self.pos = pos

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.pos})"


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group(kind)
            if kind == "const":
                value = value[1:]
            tokens.append(Token(kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class TokenStream:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, value, k=0):
        tok = self.peek(k)
        return tok.kind in ("op", "name") and tok.value == value

    def accept(self, value):
        if self.at(value):
            return self.next()
        return None

    def expect(self, value):
        tok = self.peek()
        if not self.at(value):
            self.error(f"expected {value!r}, found {tok.value or 'end of input'!r}")
        return self.next()

    def expect_name(self, what="name"):
        tok = self.peek()
        if tok.kind != "name":
            self.error(f"expected {what}, found {tok.value or 'end of input'!r}")
        return self.next().value

    def expect_eof(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.error(f"unexpected trailing input {tok.value!r}")

    def error(self, message, pos=None):
        raise ParseError(message, self.peek().pos if pos is None else pos, self.text)

    def sep_list(self, close, item):
        """Parse ``item (, item)*`` up to the closing token ``close``."""
        items = []
        if self.accept(close):
            return items
        while True:
            items.append(item())
            if self.accept(close):
                return items
            self.expect(",")
