"""Plain-text format for presentations and generator maps.

    # comment
    generators: e f          self-adjoint letters
    generators*: u v         letters with separate adjoints u' and v'
    e*e - e                  a relation (read as "= 0")
    u'*u = 1                 relations may also be written as equations

Expressions use ``+ - *``, parentheses, rational literals such as ``3/4``,
powers ``x^3`` and the postfix adjoint ``'`` (also after a parenthesised group).
A map file has one line ``name = expression`` per source generator.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import Alphabet, NCPoly, Presentation

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*()'=^]))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokenize(text: str, line: int, col0: int = 0):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos + 1)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col0 + start + 1))
        pos = m.end()
    out.append(("end", "", col0 + len(text) + 1))
    return out


class _Parser:
    def __init__(self, tokens, alphabet: Alphabet, line: int):
        self.toks = tokens
        self.i = 0
        self.alphabet = alphabet
        self.line = line

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def expect_end(self):
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")

    def expr(self) -> NCPoly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> NCPoly:
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> NCPoly:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            out = NCPoly.scalar(Fraction(val))
        elif kind == "id":
            if val not in self.alphabet:
                raise self.error(f"unknown generator {val!r}", tok)
            out = NCPoly.letter(self.alphabet.index(val))
        elif kind == "op" and val == "(":
            out = self.expr()
            close = self.take()
            if close[1] != ")":
                raise self.error("expected ')'", close)
        elif kind == "op" and val == "-":
            return -self.factor()
        else:
            raise self.error(f"unexpected {val or 'end of line'!r}", tok)
        while self.peek()[0] == "op" and self.peek()[1] == "'":
            self.take()
            out = out.star(self.alphabet)
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exp = self.take()
            if exp[0] != "num" or "/" in exp[1]:
                raise self.error("expected a non-negative integer exponent", exp)
            out = out ** int(exp[1])
        return out


def parse_expression(text: str, alphabet: Alphabet, line: int = 1, column: int = 0) -> NCPoly:
    p = _Parser(_tokenize(text, line, column), alphabet, line)
    out = p.expr()
    p.expect_end()
    return out


def _parse_relation(text: str, alphabet: Alphabet, line: int) -> NCPoly:
    p = _Parser(_tokenize(text, line), alphabet, line)
    lhs = p.expr()
    if p.peek()[1] == "=" and p.peek()[0] == "op":
        p.take()
        rhs = p.expr()
        p.expect_end()
        return lhs - rhs
    p.expect_end()
    return lhs


def parse_presentation(text: str, name: str = "") -> Presentation:
    sa: list[str] = []
    nsa: list[str] = []
    rel_lines: list[tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        head = body.strip()
        for key, target in (("generators*:", nsa), ("generators:", sa)):
            if head.startswith(key):
                for ident in head[len(key):].split():
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", ident):
                        raise ParseError(f"invalid generator name {ident!r}", no, body.index(ident) + 1)
                    target.append(ident)
                break
        else:
            rel_lines.append((no, body))
    names, star = [], []
    for g in sa:
        names.append(g)
        star.append(len(names) - 1)
    for g in nsa:
        names += [g, g + "'"]
        star += [len(names) - 1, len(names) - 2]
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator names", 1, 1)
    alphabet = Alphabet(names, star)
    relations = [_parse_relation(body, alphabet, no) for no, body in rel_lines]
    return Presentation(alphabet, relations, name=name)


def format_presentation(pres: Presentation) -> str:
    alph = pres.alphabet
    sa = [alph.names[k] for k in range(len(alph)) if alph.is_self_adjoint(k)]
    nsa = [alph.names[k] for k in range(len(alph)) if not alph.is_self_adjoint(k) and k < alph.star[k]]
    for k in range(len(alph)):
        if not alph.is_self_adjoint(k) and k < alph.star[k] and alph.names[alph.star[k]] != alph.names[k] + "'":
            raise ValueError("adjoint letters must be named with a trailing ' to be written as text")
    lines = []
    if pres.name:
        lines.append(f"# {pres.name}")
    if sa:
        lines.append("generators: " + " ".join(sa))
    if nsa:
        lines.append("generators*: " + " ".join(nsa))
    lines += [r.format(alph) for r in pres.relations]
    return "\n".join(lines) + "\n"


def parse_map(text: str, src: Presentation, dst: Presentation) -> dict[str, NCPoly]:
    images: dict[str, NCPoly] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if "=" not in body:
            raise ParseError("expected 'generator = expression'", no, 1)
        left, right = body.split("=", 1)
        name = left.strip()
        if name not in src.alphabet:
            raise ParseError(f"unknown source generator {name!r}", no, body.index(name) + 1 if name else 1)
        if name in images:
            raise ParseError(f"generator {name!r} mapped twice", no, 1)
        images[name] = parse_expression(right, dst.alphabet, no, len(left) + 1)
    # adjoint letters may be left implicit
    alph = src.alphabet
    for k, name in enumerate(alph.names):
        s = alph.names[alph.star[k]]
        if name not in images and s in images:
            images[name] = images[s].star(dst.alphabet)
    return images


def format_map(images: dict[str, NCPoly], dst: Presentation) -> str:
    return "\n".join(f"{k} = {v.format(dst.alphabet)}" for k, v in images.items()) + "\n"
