"""The line-oriented algebra description format.

Example::

    name FX3
    field Q
    vertex 1 2 3 4
    arrow alpha 1 2
    arrow beta 2 3
    relation alpha*beta - gamma*delta
    relation 2/3 beta*epsilon
    option depth 12
    option lambda_e 1,2,3

Words multiply left to right; ``e(v)`` is the trivial path at ``v``.
Lines starting with ``#`` are comments.  Errors carry 1-based line and
column numbers and the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import BoundQuiverAlgebra, DEFAULT_CAP, build_algebra
from .errors import ParseError
from .linalg import QQ, Field
from .quiver import Path, PathVector, Quiver

Term = Tuple[Fraction, Tuple[str, ...]]

OPTION_KEYS = ("depth", "cap", "cycles", "lambda_e")
DEFAULT_OPTIONS = {"depth": 12, "cap": DEFAULT_CAP, "cycles": 6}

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<triv>e\([^()\s]+\))|(?P<word>[A-Za-z_][\w']*(?:\*[A-Za-z_][\w']*)*)|(?P<op>[+-])|(?P<bad>\S+))")


@dataclass
class AlgebraDescription:
    name: str = ""
    field_p: Optional[int] = None
    vertices: List[str] = dc_field(default_factory=list)
    arrows: List[Tuple[str, str, str]] = dc_field(default_factory=list)
    relations: List[List[Term]] = dc_field(default_factory=list)
    options: Dict = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return QQ if self.field_p is None else Field.prime(self.field_p)

    def option(self, key: str):
        if key == "lambda_e":
            return self.options.get("lambda_e", [])
        return self.options.get(key, DEFAULT_OPTIONS[key])

    def quiver(self) -> Quiver:
        return Quiver(self.vertices, self.arrows)

    def relation_vectors(self) -> List[PathVector]:
        q = self.quiver()
        F = self.field
        return [terms_to_vector(q, F, r) for r in self.relations]

    def build(self, cap: Optional[int] = None) -> BoundQuiverAlgebra:
        return build_algebra(self.quiver(), self.relation_vectors(),
                             cap=cap or self.option("cap"), field=self.field)


def terms_to_vector(q: Quiver, F: Field, terms: List[Term]) -> PathVector:
    out: Dict[Path, object] = {}
    for c, word in terms:
        p = word_path(q, word)
        out[p] = out.get(p, F.zero) + F(c)
    return PathVector(out, F)


def word_path(q: Quiver, word: Tuple[str, ...]) -> Path:
    if len(word) == 1 and word[0].startswith("e("):
        return q.trivial(word[0][2:-1])
    return q.path(word)


# ---------------------------------------------------------------------------
# expressions


def parse_expression(text: str, line: int = 1, offset: int = 0) -> List[Tuple[Term, int]]:
    """Parse ``[+|-] [coeff] word (+|- [coeff] word)*``; returns terms with columns.

    ``0`` on its own is the empty sum.
    """
    pos = 0
    terms = []
    sign = 1
    coeff: Optional[Fraction] = None
    expect_term = True
    seen_sign = False
    if text.strip() == "0":
        return []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = offset + m.start(m.lastgroup) + 1
        tok = m.group(m.lastgroup)
        kind = m.lastgroup
        pos = m.end()
        if kind == "bad":
            raise ParseError(f"unexpected token {tok!r}", line, col, tok)
        if kind == "op":
            if not expect_term:
                expect_term, seen_sign = True, True
                sign = -1 if tok == "-" else 1
            elif not terms and not seen_sign and coeff is None:
                seen_sign = True
                sign = -1 if tok == "-" else 1
            else:
                raise ParseError(f"unexpected {tok!r}", line, col, tok)
            continue
        if not expect_term:
            raise ParseError(f"missing '+' or '-' before {tok!r}", line, col, tok)
        if kind == "num":
            if coeff is not None:
                raise ParseError(f"two coefficients in a row at {tok!r}", line, col, tok)
            num, _, den = tok.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", line, col, tok)
            coeff = Fraction(int(num), int(den) if den else 1)
            coeff_col = col
            continue
        word = (tok,) if kind == "triv" else tuple(tok.split("*"))
        c = sign * (coeff if coeff is not None else Fraction(1))
        terms.append(((c, word), col))
        sign, coeff, expect_term, seen_sign = 1, None, False, False
    if coeff is not None:
        raise ParseError("coefficient without a word", line, coeff_col, str(coeff))
    if expect_term:
        raise ParseError("expression ends without a term", line, offset + len(text) + 1, "")
    return terms


def _check_word(q_arrows: Dict[str, Tuple[str, str]], vertices, word, line, col):
    if len(word) == 1 and word[0].startswith("e("):
        v = word[0][2:-1]
        if v not in vertices:
            raise ParseError(f"unknown vertex {v!r}", line, col, word[0])
        return v, v
    start = col
    for l in word:
        if l not in q_arrows:
            raise ParseError(f"unknown arrow {l!r}", line, start, l)
        start += len(l) + 1
    for a, b in zip(word, word[1:]):
        if q_arrows[a][1] != q_arrows[b][0]:
            raise ParseError(f"word {'*'.join(word)!r} is not composable at {a}*{b}",
                             line, col, "*".join(word))
    return q_arrows[word[0]][0], q_arrows[word[-1]][1]


# ---------------------------------------------------------------------------
# files


def parse(text: str) -> AlgebraDescription:
    desc = AlgebraDescription()
    seen_field = False
    arrows: Dict[str, Tuple[str, str]] = {}
    pending: List[Tuple[int, int, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        kw, _, rest = stripped.partition(" ")
        rest_col = indent + len(kw) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        parts = rest.split()
        if kw == "name":
            desc.name = rest
        elif kw == "field":
            if seen_field:
                raise ParseError("field declared twice", ln, indent + 1, kw)
            seen_field = True
            if parts == ["Q"]:
                desc.field_p = None
            elif len(parts) == 2 and parts[0] == "F" and parts[1].isdigit():
                p = int(parts[1])
                try:
                    Field.prime(p)
                except ValueError:
                    raise ParseError(f"{p} is not prime", ln, rest_col + 1 + rest.index(parts[1]),
                                     parts[1]) from None
                desc.field_p = p
            else:
                raise ParseError("expected 'field Q' or 'field F <prime>'", ln, rest_col + 1, rest)
        elif kw == "vertex":
            if not parts:
                raise ParseError("vertex line without vertices", ln, indent + 1, kw)
            col = rest_col
            for v in parts:
                col = body.index(v, col) + 1
                if v in desc.vertices:
                    raise ParseError(f"duplicate vertex {v!r}", ln, col, v)
                if not re.fullmatch(r"[^\s(),]+", v):
                    raise ParseError(f"bad vertex name {v!r}", ln, col, v)
                desc.vertices.append(v)
        elif kw == "arrow":
            if len(parts) != 3:
                raise ParseError("expected 'arrow <label> <source> <target>'", ln, indent + 1, kw)
            label, s, t = parts
            col = body.index(label, rest_col) + 1
            if not re.fullmatch(r"[A-Za-z_][\w']*", label) or label == "e":
                raise ParseError(f"bad arrow label {label!r}", ln, col, label)
            if label in arrows:
                raise ParseError(f"duplicate arrow label {label!r}", ln, col, label)
            for v in (s, t):
                if v not in desc.vertices:
                    raise ParseError(f"unknown vertex {v!r}", ln, body.index(v, col) + 1, v)
            arrows[label] = (s, t)
            desc.arrows.append((label, s, t))
        elif kw == "relation":
            pending.append((ln, rest_col, rest))
        elif kw == "option":
            if len(parts) != 2 or parts[0] not in OPTION_KEYS:
                raise ParseError(f"expected 'option <{'|'.join(OPTION_KEYS)}> <value>'",
                                 ln, rest_col + 1, rest)
            key, val = parts
            vcol = body.index(val, rest_col + len(key)) + 1
            if key == "lambda_e":
                vs = [v for v in val.split(",") if v]
                for v in vs:
                    if v not in desc.vertices:
                        raise ParseError(f"unknown vertex {v!r}", ln, vcol, v)
                desc.options.setdefault("lambda_e", []).append(vs)
            else:
                if not val.isdigit():
                    raise ParseError(f"option {key} needs a non-negative integer", ln, vcol, val)
                desc.options[key] = int(val)
        else:
            raise ParseError(f"unknown keyword {kw!r}", ln, indent + 1, kw)
    for ln, col, rest in pending:
        if not rest:
            raise ParseError("empty relation", ln, col + 1, "")
        terms = parse_expression(rest, ln, col)
        ends = set()
        for (c, word), tcol in terms:
            ends.add(_check_word(arrows, desc.vertices, word, ln, tcol))
            if len(word) < 2:
                raise ParseError(f"relation term {'*'.join(word)!r} has length < 2", ln, tcol,
                                 "*".join(word))
        if len(ends) > 1:
            raise ParseError("relation mixes endpoints", ln, col + 1, rest)
        desc.relations.append([t for t, _ in terms])
    return desc


def parse_element_text(desc: AlgebraDescription, text: str) -> List[Term]:
    """Parse a path combination (trivial paths allowed) against ``desc``."""
    arrows = {a: (s, t) for a, s, t in desc.arrows}
    terms = parse_expression(text)
    for (c, word), col in terms:
        _check_word(arrows, desc.vertices, word, 1, col)
    return [t for t, _ in terms]


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_terms(terms: List[Term]) -> str:
    if not terms:
        return "0"
    out = []
    for i, (c, word) in enumerate(terms):
        w = "*".join(word)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = w if a == 1 else f"{_fmt_coeff(a)} {w}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def render(desc: AlgebraDescription) -> str:
    lines = []
    if desc.name:
        lines.append(f"name {desc.name}")
    lines.append("field Q" if desc.field_p is None else f"field F {desc.field_p}")
    if desc.vertices:
        lines.append("vertex " + " ".join(desc.vertices))
    for a, s, t in desc.arrows:
        lines.append(f"arrow {a} {s} {t}")
    for r in desc.relations:
        lines.append("relation " + render_terms(r))
    for key in OPTION_KEYS:
        if key == "lambda_e":
            for vs in desc.options.get("lambda_e", []):
                lines.append("option lambda_e " + ",".join(vs))
        elif key in desc.options:
            lines.append(f"option {key} {desc.options[key]}")
    return "\n".join(lines) + "\n"
