"""Minimal Solidity lexer and method-level parser used for structural linearization.

The parser covers function/modifier/constructor definitions and the common
statement/expression forms found in method-level corpora.  It is not a
compiler front end: no type checking, no semantic analysis.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = {
    "abstract", "address", "anonymous", "as", "assembly", "bool", "break", "byte",
    "bytes", "calldata", "constant", "constructor", "continue", "contract",
    "delete", "do", "else", "emit", "enum", "event", "external", "fallback",
    "false", "fixed", "for", "function", "if", "immutable", "import", "indexed",
    "interface", "internal", "is", "library", "mapping", "memory", "modifier",
    "new", "override", "payable", "pragma", "private", "public", "pure",
    "receive", "return", "returns", "revert", "storage", "string", "struct",
    "this", "throw", "true", "try", "catch", "type", "unchecked", "uint", "int",
    "using", "view", "virtual", "while",
}

_ELEMENTARY_RE = re.compile(r"^(u?int\d*|bytes\d+|u?fixed(\d+x\d+)?)$")

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]*|/\*.*?\*/)
    | (?P<number>0[xX][0-9a-fA-F]+|\d+(\.\d+)?([eE][+-]?\d+)?)
    | (?P<string>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
    | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
    | (?P<op>=>|\*\*|\+\+|--|<<=|>>=|<<|>>|&&|\|\||[<>=!+\-*/%&|^]=|==|!=|[{}()\[\];,.?:~=<>!+\-*/%&|^])
    """,
    re.VERBOSE | re.DOTALL,
)


class ParseError(Exception):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | ident | number | string | op
    text: str
    pos: int


def lex(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup in ("ws", "comment"):
            continue
        kind = m.lastgroup
        text = m.group(0)
        if kind == "ident" and (text in KEYWORDS or _ELEMENTARY_RE.match(text)):
            kind = "keyword"
        tokens.append(Token(kind, text, m.start()))
    return tokens


# AST nodes are (kind, *children) tuples; leaves are plain strings.
Node = tuple


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, offset: int = 0) -> Token | None:
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            got = t.text if t else "<eof>"
            raise ParseError(f"expected {text!r}, got {got!r}")
        self.i += 1
        return t

    def take(self) -> Token:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.i += 1
        return t

    # --- definitions -----------------------------------------------------

    def parse_source(self) -> Node:
        defs = []
        while self.peek() is not None:
            defs.append(self.parse_definition())
        if not defs:
            raise ParseError("empty input")
        return ("source", *defs)

    def parse_definition(self) -> Node:
        t = self.peek()
        if t.text == "function":
            return self.parse_function()
        if t.text == "modifier":
            return self.parse_modifier()
        if t.text in ("constructor", "receive", "fallback"):
            return self.parse_special_function()
        raise ParseError(f"expected a definition, got {t.text!r}")

    def parse_function(self) -> Node:
        self.expect("function")
        name = self.take()
        if name.kind not in ("ident", "keyword"):
            raise ParseError(f"bad function name {name.text!r}")
        params = self.parse_param_list()
        head = self.parse_function_head()
        body = self.parse_body_or_semi()
        return ("function", name.text, params, *head, *body)

    def parse_special_function(self) -> Node:
        kw = self.take()
        params = self.parse_param_list() if self.at("(") else ("parameters",)
        head = self.parse_function_head()
        body = self.parse_body_or_semi()
        return (kw.text, params, *head, *body)

    def parse_modifier(self) -> Node:
        self.expect("modifier")
        name = self.take()
        params = self.parse_param_list() if self.at("(") else ("parameters",)
        head = self.parse_function_head()
        body = self.parse_body_or_semi()
        return ("modifier", name.text, params, *head, *body)

    def parse_function_head(self) -> list[Node]:
        parts = []
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text in ("public", "private", "internal", "external"):
                parts.append(("visibility", self.take().text))
            elif t.text in ("pure", "view", "payable", "constant"):
                parts.append(("mutability", self.take().text))
            elif t.text in ("virtual", "override"):
                kw = self.take().text
                if kw == "override" and self.at("("):
                    self.skip_parens()
                parts.append(("marker", kw))
            elif t.text == "returns":
                self.take()
                parts.append(("returns", self.parse_param_list()))
            elif t.kind == "ident":
                name = self.take().text
                args = self.parse_call_args() if self.at("(") else ("arguments",)
                parts.append(("invocation", name, args))
            else:
                break
        return parts

    def skip_parens(self) -> None:
        self.expect("(")
        depth = 1
        while depth:
            t = self.take()
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1

    def parse_body_or_semi(self) -> list[Node]:
        if self.accept(";"):
            return []
        return [self.parse_block()]

    # --- parameters and types --------------------------------------------

    def parse_param_list(self) -> Node:
        self.expect("(")
        params = []
        if not self.at(")"):
            params.append(self.parse_param())
            while self.accept(","):
                params.append(self.parse_param())
        self.expect(")")
        return ("parameters", *params)

    def parse_param(self) -> Node:
        typ = self.parse_type()
        parts = [typ]
        while True:
            t = self.peek()
            if t is not None and t.text in ("memory", "storage", "calldata", "indexed", "payable"):
                parts.append(("location", self.take().text))
            else:
                break
        t = self.peek()
        if t is not None and t.kind == "ident":
            parts.append(self.take().text)
        return ("param", *parts)

    def parse_type(self) -> Node:
        t = self.peek()
        if t is None:
            raise ParseError("expected a type")
        if t.text == "mapping":
            self.take()
            self.expect("(")
            key = self.parse_type()
            self.expect("=>")
            value = self.parse_type()
            self.expect(")")
            node: Node = ("mapping", key, value)
        elif t.text == "function":
            # function-typed value: treat the signature as opaque structure
            self.take()
            params = self.parse_param_list()
            head = self.parse_function_head()
            node = ("functiontype", params, *head)
        elif t.kind in ("keyword", "ident"):
            name = self.take().text
            while self.accept("."):
                name += "." + self.take().text
            node = ("type", name)
        else:
            raise ParseError(f"expected a type, got {t.text!r}")
        while self.at("["):
            self.take()
            if self.at("]"):
                self.take()
                node = ("array", node)
            else:
                size = self.parse_expression()
                self.expect("]")
                node = ("array", node, size)
        return node

    # --- statements ------------------------------------------------------

    def parse_block(self) -> Node:
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_statement())
        self.expect("}")
        return ("block", *stmts)

    def parse_statement(self) -> Node:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input in block")
        if t.text == "{":
            return self.parse_block()
        if t.text == "if":
            self.take()
            self.expect("(")
            cond = self.parse_expression()
            self.expect(")")
            then = self.parse_statement()
            if self.accept("else"):
                return ("if", cond, then, self.parse_statement())
            return ("if", cond, then)
        if t.text == "while":
            self.take()
            self.expect("(")
            cond = self.parse_expression()
            self.expect(")")
            return ("while", cond, self.parse_statement())
        if t.text == "do":
            self.take()
            body = self.parse_statement()
            self.expect("while")
            self.expect("(")
            cond = self.parse_expression()
            self.expect(")")
            self.expect(";")
            return ("dowhile", body, cond)
        if t.text == "for":
            return self.parse_for()
        if t.text == "return":
            self.take()
            if self.accept(";"):
                return ("return",)
            value = self.parse_expression()
            self.expect(";")
            return ("return", value)
        if t.text in ("break", "continue", "throw"):
            self.take()
            self.expect(";")
            return (t.text,)
        if t.text == "emit":
            self.take()
            call = self.parse_expression()
            self.expect(";")
            return ("emit", call)
        if t.text == "revert":
            self.take()
            if self.at("("):
                args = self.parse_call_args()
                self.expect(";")
                return ("revert", args)
            call = self.parse_expression()
            self.expect(";")
            return ("revert", call)
        if t.text == "unchecked":
            self.take()
            return ("unchecked", self.parse_block())
        if t.text == "assembly":
            return self.parse_assembly()
        if t.text == "_" and self.peek(1) is not None and self.peek(1).text == ";":
            self.take()
            self.take()
            return ("placeholder",)
        return self.parse_simple_statement()

    def parse_for(self) -> Node:
        self.expect("for")
        self.expect("(")
        init: Node = ("empty",)
        if not self.at(";"):
            init = self.parse_simple_statement(consume_semi=False)
        self.expect(";")
        cond: Node = ("empty",)
        if not self.at(";"):
            cond = self.parse_expression()
        self.expect(";")
        step: Node = ("empty",)
        if not self.at(")"):
            step = self.parse_expression()
        self.expect(")")
        return ("for", init, cond, step, self.parse_statement())

    def parse_assembly(self) -> Node:
        # opaque: keep brace structure only
        self.expect("assembly")
        if self.peek() is not None and self.peek().kind == "string":
            self.take()
        self.expect("{")
        depth = 1
        while depth:
            t = self.take()
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth -= 1
        return ("assembly",)

    def parse_simple_statement(self, consume_semi: bool = True) -> Node:
        node = self._declaration_or_expression()
        if consume_semi:
            self.expect(";")
        return node

    def _declaration_or_expression(self) -> Node:
        mark = self.i
        try:
            typ = self.parse_type()
            parts = [typ]
            while True:
                t = self.peek()
                if t is not None and t.text in ("memory", "storage", "calldata"):
                    parts.append(("location", self.take().text))
                else:
                    break
            t = self.peek()
            if t is not None and t.kind == "ident":
                name = self.take().text
                if self.accept("="):
                    return ("declaration", *parts, name, self.parse_expression())
                if self.at(";") or self.at(","):
                    return ("declaration", *parts, name)
            raise ParseError("not a declaration")
        except ParseError:
            self.i = mark
        expr = self.parse_expression()
        return ("exprstatement", expr)

    # --- expressions ------------------------------------------------------

    _BINARY_PRECEDENCE = {
        "||": 1, "&&": 2,
        "==": 3, "!=": 3,
        "<": 4, ">": 4, "<=": 4, ">=": 4,
        "|": 5, "^": 6, "&": 7,
        "<<": 8, ">>": 8,
        "+": 9, "-": 9,
        "*": 10, "/": 10, "%": 10,
        "**": 11,
    }
    _ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "|=", "&=", "^=", "<<=", ">>="}

    def parse_expression(self) -> Node:
        return self.parse_assignment()

    def parse_assignment(self) -> Node:
        left = self.parse_ternary()
        t = self.peek()
        if t is not None and t.text in self._ASSIGN_OPS:
            op = self.take().text
            right = self.parse_assignment()
            return ("assign", op, left, right)
        return left

    def parse_ternary(self) -> Node:
        cond = self.parse_binary(1)
        if self.accept("?"):
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_expression()
            return ("ternary", cond, then, other)
        return cond

    def parse_binary(self, min_prec: int) -> Node:
        left = self.parse_unary()
        while True:
            t = self.peek()
            if t is None:
                return left
            prec = self._BINARY_PRECEDENCE.get(t.text)
            if prec is None or prec < min_prec:
                return left
            op = self.take().text
            right = self.parse_binary(prec + 1)
            left = ("binary", op, left, right)

    def parse_unary(self) -> Node:
        t = self.peek()
        if t is not None and t.text in ("!", "~", "-", "+", "++", "--", "delete"):
            op = self.take().text
            return ("unary", op, self.parse_unary())
        if t is not None and t.text == "new":
            self.take()
            typ = self.parse_type()
            return ("new", typ)
        return self.parse_postfix()

    def parse_postfix(self) -> Node:
        node = self.parse_primary()
        while True:
            t = self.peek()
            if t is None:
                return node
            if t.text == "(":
                node = ("call", node, self.parse_call_args())
            elif t.text == "[":
                self.take()
                if self.at("]"):
                    self.take()
                    node = ("index", node)
                else:
                    idx = self.parse_expression()
                    self.expect("]")
                    node = ("index", node, idx)
            elif t.text == ".":
                self.take()
                member = self.take()
                node = ("member", node, member.text)
            elif t.text in ("++", "--"):
                node = ("postfix", self.take().text, node)
            else:
                return node

    def parse_call_args(self) -> Node:
        self.expect("(")
        args = []
        if self.at("{"):
            # named arguments: {value: x, gas: y}
            self.take()
            while not self.at("}"):
                name = self.take().text
                self.expect(":")
                args.append(("namedarg", name, self.parse_expression()))
                if not self.accept(","):
                    break
            self.expect("}")
        elif not self.at(")"):
            args.append(self.parse_expression())
            while self.accept(","):
                args.append(self.parse_expression())
        self.expect(")")
        return ("arguments", *args)

    def parse_primary(self) -> Node:
        t = self.take()
        if t.text == "(":
            items = []
            if not self.at(")"):
                items.append(self.parse_expression())
                while self.accept(","):
                    items.append(self.parse_expression())
            self.expect(")")
            if len(items) == 1:
                return items[0]
            return ("tuple", *items)
        if t.text == "[":
            items = []
            if not self.at("]"):
                items.append(self.parse_expression())
                while self.accept(","):
                    items.append(self.parse_expression())
            self.expect("]")
            return ("arrayliteral", *items)
        if t.kind == "number":
            node: Node = ("number", t.text)
            nxt = self.peek()
            if nxt is not None and nxt.text in (
                "wei", "gwei", "szabo", "finney", "ether",
                "seconds", "minutes", "hours", "days", "weeks",
            ):
                self.take()
                node = ("unit", nxt.text, node)
            return node
        if t.kind == "string":
            return ("string", t.text)
        if t.text in ("true", "false"):
            return ("bool", t.text)
        if t.text == "this":
            return ("this",)
        if t.kind == "ident" or t.text in ("msg", "block", "tx"):
            return ("identifier", t.text)
        if t.kind == "keyword" and (
            _ELEMENTARY_RE.match(t.text) or t.text in ("address", "bytes", "string", "bool", "payable")
        ):
            return ("type", t.text)  # type used as a cast target
        raise ParseError(f"unexpected token {t.text!r} in expression")


def parse(source: str) -> Node:
    """Parse method-level Solidity source into an AST tuple tree."""
    return Parser(lex(source)).parse_source()
