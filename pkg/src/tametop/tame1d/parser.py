"""Parser Module.

Recursive descent parser for the set expression grammar::

    set := "empty"
         | "interval(" lo "," hi "," ("oo"|"oc"|"co"|"cc") ")"
         | "point(" p ")"
         | "chain(" limit "," c "," q ["," template] ["," "closed"] ["," "divergent"] ")"
         | "union(" set {"," set} ")"
         | "nested_chain(" N ")"

Numbers are exact rationals ``p/q``; interval ends also accept ``oo`` and ``-oo``. Inside
a chain, a bare ``point`` template stands for the anchor itself (the default).
"""

import re
from fractions import Fraction
from typing import Union

from tametop.exceptions import InputSyntaxError
from tametop.tame1d.generators import nested_chain_node
from tametop.tame1d.intervals import Interval, InvalidInterval
from tametop.tame1d.nodes import ANCHOR, Chain, InvalidChain, Node, Point
from tametop.tame1d.rational import NEG_INF, POS_INF, ExtRat
from tametop.tame1d.tameset import Tame1DSet, build


class ExpressionSyntaxError(InputSyntaxError):
    """Raised when a set expression cannot be parsed."""


_TOKEN = re.compile(
    r"\s*(?:(?P<number>-?\d+(?:/\d+)?)|(?P<infinity>[+-]?oo)|(?P<name>[A-Za-z_]+)"
    r"|(?P<punct>[(),]))"
)

Parts = tuple[list[Interval], list[Node]]


class _Parser:
    """Single-use parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while position < len(text):
            if not text[position:].strip():
                break
            match = _TOKEN.match(text, position)
            if not match:
                raise ExpressionSyntaxError(f"unexpected character {text[position]!r}", position)
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        self.index = 0

    # --- token helpers ----------------------------------------------------------------

    def _where(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][2]
        return len(self.text)

    def _peek(self) -> Union[tuple[str, str, int], None]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _take(self, kind: str, lexeme: Union[str, None] = None) -> str:
        token = self._peek()
        if token is None or token[0] != kind or (lexeme is not None and token[1] != lexeme):
            expected = lexeme if lexeme is not None else kind
            found = "end of input" if token is None else repr(token[1])
            raise ExpressionSyntaxError(f"expected {expected}, found {found}", self._where())
        self.index += 1
        return token[1]

    def _at(self, lexeme: str) -> bool:
        token = self._peek()
        return token is not None and token[1] == lexeme

    def _number(self) -> Fraction:
        where = self._where()
        lexeme = self._take("number")
        try:
            return Fraction(lexeme)
        except ZeroDivisionError as exc:
            raise ExpressionSyntaxError("zero denominator", where) from exc

    def _bound(self) -> ExtRat:
        token = self._peek()
        if token is not None and token[0] == "infinity":
            self.index += 1
            return NEG_INF if token[1].startswith("-") else POS_INF
        return self._number()

    # --- grammar ----------------------------------------------------------------------

    def parse(self) -> Tame1DSet:
        intervals, nodes = self._set(template=False)
        if self.index != len(self.tokens):
            raise ExpressionSyntaxError("trailing input", self._where())
        return build(intervals, nodes)

    def _set(self, template: bool) -> Parts:
        where = self._where()
        name = self._take("name")
        if name == "empty":
            return [], []
        if name == "point" and template and not self._at("("):
            return [], [ANCHOR]
        self._take("punct", "(")
        if name == "interval":
            parts = self._interval(where, template)
        elif name == "point":
            parts = [], [Point(self._number())]
        elif name == "chain":
            parts = [], [self._chain(where)]
        elif name == "union":
            parts = self._union(template)
        elif name == "nested_chain":
            depth = self._number()
            if depth.denominator != 1 or depth < 1:
                raise ExpressionSyntaxError("nested_chain needs a positive integer", where)
            parts = [], [nested_chain_node(int(depth))]
        else:
            raise ExpressionSyntaxError(f"unknown set constructor {name!r}", where)
        self._take("punct", ")")
        return parts

    def _interval(self, where: int, template: bool) -> Parts:
        if template:
            raise ExpressionSyntaxError("chain templates cannot contain intervals", where)
        lo = self._bound()
        self._take("punct", ",")
        hi = self._bound()
        self._take("punct", ",")
        kind_at = self._where()
        token = self._peek()
        kind = token[1] if token is not None else ""
        if kind not in ("oo", "oc", "co", "cc"):
            raise ExpressionSyntaxError(
                f"interval kind must be oo|oc|co|cc, got {kind!r}", kind_at
            )
        self.index += 1
        try:
            return [Interval(lo, hi, kind[0] == "c", kind[1] == "c")], []
        except InvalidInterval as exc:
            raise ExpressionSyntaxError(str(exc), where) from exc

    def _union(self, template: bool) -> Parts:
        intervals, nodes = self._set(template)
        while self._at(","):
            self.index += 1
            more_intervals, more_nodes = self._set(template)
            intervals += more_intervals
            nodes += more_nodes
        return intervals, nodes

    def _chain(self, where: int) -> Chain:
        limit = self._number()
        self._take("punct", ",")
        c = self._number()
        self._take("punct", ",")
        q = self._number()
        template: tuple[Node, ...] = (ANCHOR,)
        closed = divergent = False
        seen_template = False
        while self._at(","):
            self.index += 1
            token = self._peek()
            if token is not None and token[1] == "closed":
                self.index += 1
                closed = True
            elif token is not None and token[1] == "divergent":
                self.index += 1
                divergent = True
            elif not seen_template and not closed and not divergent:
                template = tuple(self._set(template=True)[1])
                seen_template = True
            else:
                raise ExpressionSyntaxError("expected closed or divergent", self._where())
        try:
            return Chain(limit, c, q, template, closed, divergent)
        except InvalidChain as exc:
            raise ExpressionSyntaxError(str(exc), where) from exc


def parse_set(text: str) -> Tame1DSet:
    """Parses a set expression into a normalized `Tame1DSet`.

    Args:
        text (str): The expression.

    Returns:
        Tame1DSet: The set.

    Raises:
        ExpressionSyntaxError: With the offending position.
    """
    return _Parser(text).parse()
