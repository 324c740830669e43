"""Recursive-descent parser for product expressions.

Grammar (whitespace is ignored between tokens)::

    expr  := leaf | "product(" expr ("," expr)+ ")"
    leaf  := "sphere(" INT ["," "codim=" INT] ")"
           | "torus(" "k=" INT ")"
           | "veronese()"
           | "isoparametric(" INT "," "g=" INT ")"
           | "otfkm(" "k=" INT ")"
           | "lawson(" INT "," INT ")"
           | "bipolar_tau31()"
           | "file(" PATH ")"
           | "ref(" NAME ")"

``PATH`` and ``NAME`` are either double-quoted strings or bare text up to
the closing parenthesis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from . import catalog
from .composer import Leaf, Product
from .errors import InsufficientData, ParseError, SchemaError

__all__ = ["LeafCall", "ProductNode", "parse_expression", "pretty", "to_expression"]

LEAF_KINDS = ("sphere", "torus", "veronese", "isoparametric", "otfkm", "lawson",
              "bipolar_tau31", "file", "ref")
HEADS = ("product",) + LEAF_KINDS


@dataclass(frozen=True)
class LeafCall:
    kind: str
    params: tuple = ()


@dataclass(frozen=True)
class ProductNode:
    children: tuple


Node = Union[LeafCall, ProductNode]


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def fail(self, message, expected=()):
        self.skip()
        where = "end of input" if self.pos >= len(self.src) else repr(self.src[self.pos])
        raise ParseError(f"{message} (found {where})", self.pos, expected)

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail("unexpected input", [ch])
        self.pos += 1

    def ident(self, expected=HEADS) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isalnum() or self.src[self.pos] == "_"):
            self.pos += 1
        word = self.src[start:self.pos]
        if word not in expected:
            self.pos = start
            self.fail(f"unknown name {word!r}" if word else "expected a name", expected)
        return word

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer", ["<integer>"])
        return int(self.src[start:self.pos])

    def keyword_int(self, key: str) -> int:
        self.ident((key,))
        self.expect("=")
        return self.integer()

    def text(self) -> str:
        if self.peek() == '"':
            self.pos += 1
            end = self.src.find('"', self.pos)
            if end < 0:
                self.pos = len(self.src)
                self.fail("unterminated string", ['"'])
            value = self.src[self.pos:end]
            self.pos = end + 1
        else:
            start = self.pos
            end = self.src.find(")", start)
            if end < 0:
                self.pos = len(self.src)
                self.fail("unterminated argument", [")"])
            value = self.src[start:end].strip()
            self.pos = end
        if not value:
            self.fail("empty argument", ["<text>"])
        return value

    def expr(self) -> Node:
        head = self.ident()
        self.expect("(")
        if head == "product":
            children = [self.expr()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.expr())
            if self.peek() != ")":
                self.fail("unexpected input", [")", ","])
            if len(children) < 2:
                self.fail("a product needs at least two factors", [","])
            self.pos += 1
            return ProductNode(tuple(children))
        params = self.leaf_params(head)
        self.expect(")")
        return LeafCall(head, params)

    def leaf_params(self, head: str) -> tuple:
        if head == "sphere":
            m = self.integer()
            codim = 0
            if self.peek() == ",":
                self.pos += 1
                codim = self.keyword_int("codim")
            elif self.peek() != ")":
                self.fail("unexpected input", [",", ")"])
            return (m, codim)
        if head in ("torus", "otfkm"):
            return (self.keyword_int("k"),)
        if head in ("veronese", "bipolar_tau31"):
            return ()
        if head == "isoparametric":
            n = self.integer()
            self.expect(",")
            return (n, self.keyword_int("g"))
        if head == "lawson":
            m = self.integer()
            self.expect(",")
            return (m, self.integer())
        return (self.text(),)


def parse_expression(src: str) -> Node:
    p = _Parser(src)
    node = p.expr()
    if p.peek():
        p.fail("trailing input", ["<end>"])
    return node


def _quote(text: str) -> str:
    if any(c in text for c in ")\"") or text != text.strip():
        if '"' in text:
            raise ValueError(f"cannot render {text!r}")
        return f'"{text}"'
    return text


def pretty(node: Node) -> str:
    """Canonical source text; ``parse_expression(pretty(t)) == t``."""
    if isinstance(node, ProductNode):
        return "product(" + ", ".join(pretty(c) for c in node.children) + ")"
    k, ps = node.kind, node.params
    if k == "sphere":
        return f"sphere({ps[0]})" if ps[1] == 0 else f"sphere({ps[0]}, codim={ps[1]})"
    if k in ("torus", "otfkm"):
        return f"{k}(k={ps[0]})"
    if k == "isoparametric":
        return f"isoparametric({ps[0]}, g={ps[1]})"
    if k == "lawson":
        return f"lawson({ps[0]}, {ps[1]})"
    if k in ("file", "ref"):
        return f"{k}({_quote(ps[0])})"
    return f"{k}()"


def _leaf_descriptor(node: LeafCall, user: dict):
    k, ps = node.kind, node.params
    if k == "sphere":
        return catalog.sphere(ps[0], ps[1])
    if k == "torus":
        return catalog.flat_torus(ps[0])
    if k == "veronese":
        return catalog.veronese()
    if k == "isoparametric":
        return catalog.isoparametric_hypersurface(ps[0], ps[1])
    if k == "otfkm":
        return catalog.otfkm_focal(ps[0])
    if k == "lawson":
        return catalog.named_surface("lawson", ps[0], ps[1])
    if k == "bipolar_tau31":
        return catalog.named_surface("bipolar_tau31")
    if k == "file":
        d = catalog.load_descriptor_file(ps[0])
        if isinstance(d, list):
            raise SchemaError(f"{ps[0]}: holds several descriptors; load it with "
                              "--catalog and pick one with ref(name)")
        return d
    if ps[0] not in user:
        raise InsufficientData(f"no user descriptor named {ps[0]!r}")
    return user[ps[0]]


def to_expression(node: Node, user=None):
    """Turn a syntax tree into a composer expression.

    ``user`` maps names to descriptors for ``ref(name)`` leaves.
    """
    user = user or {}
    if isinstance(node, ProductNode):
        return Product(tuple(to_expression(c, user) for c in node.children))
    return Leaf(_leaf_descriptor(node, user))
