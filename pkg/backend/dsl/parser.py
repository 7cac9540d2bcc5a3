"""Recursive descent parser for diagram documents.

    document     := (family_decl | diagram_decl)+
    family_decl  := "family" NAME "{" (IDENT "=" INT (";" IDENT "=" INT)* ";"?)? "}"
    diagram_decl := "diagram" "{" (assign ";"?)* "}"
    assign       := ("G" | "Kminus" | "Kplus" | "H") "=" group_expr
    group_expr   := term ("x" term)*
    term         := "S3" | "T2" | "SU3" | "torus" "(" ")" | "circle" "(" INT ("," INT)* ")"
                  | "cyclic" "(" INT ("," ratvec)? ")" | "SU2SU1" | "S_U2U1"
    ratvec       := "[" rat ("," rat)* "]"        rat := INT ("/" INT)?

Comments run from "#" to the end of the line. A product factor name may be
glued to its neighbours, so S3xS3 reads as S3 x S3.

Terms that name a factor (S3, a factor-rank circle, cyclic(n)) act on the
factor whose index is the term's position in the product; torus(), full rank
circles and cyclic(n, [..]) act on the whole maximal torus.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from core.errors import DslSemanticError, DslSyntaxError, UnsupportedSubgroupShape
from topology.diagram import FamilyInstance, GroupDiagram
from topology.liegroup import S3_S3, S3_T2, SU3, AmbientGroup, FiniteGen, Su3Block, SubgroupSpec

logger = logging.getLogger(__name__)

SUBGROUP_FIELDS = ("Kminus", "Kplus", "H")
DIAGRAM_FIELDS = ("G",) + SUBGROUP_FIELDS

_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<int>-?\d+)"
                    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[{}();=,/\[\]])")
_FACTOR_WORD = re.compile(r"^(S3|T2|SU3)(x(S3|T2|SU3))+$")


@dataclass(frozen=True)
class DiagramSource:
    text: str
    origin: str = "<inline>"


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int


@dataclass(frozen=True)
class Term:
    name: str
    args: Tuple = ()
    line: int = 0
    column: int = 0


@dataclass
class _RawDiagram:
    fields: Dict[str, List[Term]] = field(default_factory=dict)
    line: int = 0


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        column = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident" and _FACTOR_WORD.match(m.group()):
            # S3xS3 is three tokens
            offset = 0
            for k, part in enumerate(m.group().split("x")):
                if k:
                    tokens.append(Token("ident", "x", line, column + offset))
                    offset += 1
                tokens.append(Token("ident", part, line, column + offset))
                offset += len(part)
        elif kind in ("int", "ident", "punct"):
            tokens.append(Token(kind, m.group(), line, column))
        pos = m.end()
    tokens.append(Token("eof", "end of input", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _fail(self, expected: str):
        tok = self.current
        found = tok.value if tok.kind != "eof" else "end of input"
        raise DslSyntaxError(f"expected {expected}, found {found!r}", tok.line, tok.column)

    def at(self, value: str) -> bool:
        return self.current.kind in ("ident", "punct") and self.current.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            self._fail(repr(value))
        tok = self.current
        self.pos += 1
        return tok

    def expect_kind(self, kind: str, expected: str) -> Token:
        if self.current.kind != kind:
            self._fail(expected)
        tok = self.current
        self.pos += 1
        return tok

    def integer(self) -> int:
        return int(self.expect_kind("int", "an integer").value)

    def document(self) -> List[Union[Tuple[str, Dict[str, int], int], _RawDiagram]]:
        items = []
        while self.current.kind != "eof":
            if self.at("family"):
                items.append(self.family_decl())
            elif self.at("diagram"):
                items.append(self.diagram_decl())
            else:
                self._fail("'family' or 'diagram'")
        if not items:
            self._fail("'family' or 'diagram'")
        return items

    def family_decl(self):
        start = self.expect("family")
        tag = self.expect_kind("ident", "a family name").value
        self.expect("{")
        params: Dict[str, int] = {}
        while not self.at("}"):
            name_tok = self.expect_kind("ident", "a parameter name or '}'")
            self.expect("=")
            value = self.integer()
            if name_tok.value in params:
                raise DslSemanticError(name_tok.value, f"parameter {name_tok.value} given twice")
            params[name_tok.value] = value
            if not self.at("}"):
                self.expect(";")
        self.expect("}")
        return tag, params, start.line

    def diagram_decl(self) -> _RawDiagram:
        start = self.expect("diagram")
        self.expect("{")
        raw = _RawDiagram(line=start.line)
        while not self.at("}"):
            tok = self.current
            if tok.value not in DIAGRAM_FIELDS or tok.kind != "ident":
                self._fail("one of G, Kminus, Kplus, H or '}'")
            self.pos += 1
            if tok.value in raw.fields:
                raise DslSemanticError(tok.value, f"{tok.value} assigned twice")
            self.expect("=")
            raw.fields[tok.value] = self.group_expr()
            if self.at(";"):
                self.pos += 1
        self.expect("}")
        return raw

    def group_expr(self) -> List[Term]:
        terms = [self.term()]
        while self.at("x"):
            self.pos += 1
            terms.append(self.term())
        return terms

    def term(self) -> Term:
        tok = self.expect_kind("ident", "a group term")
        name = tok.value
        if name in ("S3", "T2", "SU3", "SU2SU1", "S_U2U1"):
            return Term(name, (), tok.line, tok.column)
        if name == "torus":
            self.expect("(")
            self.expect(")")
            return Term(name, (), tok.line, tok.column)
        if name == "circle":
            self.expect("(")
            slope = [self.integer()]
            while self.at(","):
                self.pos += 1
                slope.append(self.integer())
            self.expect(")")
            return Term(name, tuple(slope), tok.line, tok.column)
        if name == "cyclic":
            self.expect("(")
            n = self.integer()
            point = None
            if self.at(","):
                self.pos += 1
                point = self.ratvec()
            self.expect(")")
            return Term(name, (n, point), tok.line, tok.column)
        self.pos -= 1
        self._fail("a group term")

    def ratvec(self) -> Tuple[Fraction, ...]:
        self.expect("[")
        values = [self.rational()]
        while self.at(","):
            self.pos += 1
            values.append(self.rational())
        self.expect("]")
        return tuple(values)

    def rational(self) -> Fraction:
        num = self.integer()
        if self.at("/"):
            self.pos += 1
            tok = self.current
            den = self.integer()
            if den == 0:
                raise DslSyntaxError("zero denominator", tok.line, tok.column)
            return Fraction(num, den)
        return Fraction(num)


def _ambient(terms: List[Term]) -> AmbientGroup:
    names = tuple(t.name for t in terms)
    for g in (S3_T2, S3_S3, SU3):
        if names == tuple(name for name, _ in g.factors):
            return g
    raise DslSemanticError("G", f"{' x '.join(names)} is not one of S3 x T2, S3 x S3, SU3")


def _su3_subgroup(name: str, terms: List[Term]) -> SubgroupSpec:
    names = [t.name for t in terms]
    if names == ["S_U2U1"]:
        return SubgroupSpec.su3(Su3Block("S_U2U1"))
    if names == ["SU2SU1"]:
        return SubgroupSpec.su3(Su3Block("SU2SU1_Zn", 1))
    if names == ["SU2SU1", "cyclic"] and terms[1].args[1] is None:
        return SubgroupSpec.su3(Su3Block("SU2SU1_Zn", _order(name, terms[1])))
    if names == ["cyclic"] and terms[0].args[1] is None:
        return SubgroupSpec.su3(Su3Block("Zn_diagonal", _order(name, terms[0])))
    raise DslSemanticError(name, f"{' x '.join(names)} is not an SU3 block")


def _order(name: str, term: Term) -> int:
    n = term.args[0]
    if n < 1:
        raise DslSemanticError(name, f"cyclic order must be positive, got {n}")
    return n


def _torus_subgroup(name: str, G: AmbientGroup, terms: List[Term]) -> SubgroupSpec:
    r = G.maximal_torus_rank
    slopes, gens, full = [], [], []

    def unit(i: int) -> Tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(r))

    def factor(position: int, term: Term):
        if position >= len(G.factors):
            raise DslSemanticError(name, f"{term.name} at position {position + 1} has no factor of {G} to act on")
        return G.factors[position]

    for position, term in enumerate(terms):
        if term.name == "torus" or (term.name == "T2" and r == 2 and position < len(G.factors)
                                    and G.factors[position][0] != "T2"):
            slopes += [unit(i) for i in range(r)]
        elif term.name in ("S3", "T2"):
            kind, coords = factor(position, term)
            if kind != term.name:
                raise DslSemanticError(name, f"{term.name} at position {position + 1} but the factor there is {kind}")
            if kind == "S3":
                full.append(coords[0])
            else:
                slopes += [unit(i) for i in coords]
        elif term.name == "circle":
            slope = term.args
            if len(slope) == r:
                slopes.append(slope)
            else:
                _, coords = factor(position, term)
                if len(slope) != len(coords):
                    raise DslSemanticError(name, f"circle{slope} has rank {len(slope)}, expected {r} or {len(coords)}")
                embedded = [0] * r
                for i, v in zip(coords, slope):
                    embedded[i] = v
                slopes.append(tuple(embedded))
        elif term.name == "cyclic":
            n = _order(name, term)
            point = term.args[1]
            if point is not None:
                if len(point) != r:
                    raise DslSemanticError(name, f"cyclic point has rank {len(point)}, expected {r}")
                scaled = [x * n for x in point]
                if any(x.denominator != 1 for x in scaled):
                    raise DslSemanticError(name, f"point {[str(x) for x in point]} is not of order dividing {n}")
                gens.append(FiniteGen.reduced([int(x) for x in scaled], n))
            elif n > 1:
                _, coords = factor(position, term)
                if len(coords) != 1:
                    raise DslSemanticError(name, f"cyclic({n}) needs a point on a factor of rank {len(coords)}")
                gens.append(FiniteGen(unit(coords[0]), n))
        else:
            raise DslSemanticError(name, f"{term.name} is not a subgroup term of {G}")

    try:
        return SubgroupSpec.generated(G, slopes=slopes, finite_gens=gens, full=full)
    except UnsupportedSubgroupShape as e:
        raise DslSemanticError(name, str(e))


def _build_diagram(raw: _RawDiagram) -> GroupDiagram:
    missing = [f for f in DIAGRAM_FIELDS if f not in raw.fields]
    if missing:
        raise DslSemanticError(missing[0], f"diagram at line {raw.line} does not assign {', '.join(missing)}")
    G = _ambient(raw.fields["G"])
    groups = {}
    for name in SUBGROUP_FIELDS:
        terms = raw.fields[name]
        groups[name] = _su3_subgroup(name, terms) if G == SU3 else _torus_subgroup(name, G, terms)
    return GroupDiagram(G, groups["Kminus"], groups["Kplus"], groups["H"])


def _build_family(tag: str, params: Dict[str, int]) -> FamilyInstance:
    try:
        return FamilyInstance(tag, params)
    except ValueError as e:
        raise DslSemanticError(tag, str(e))


def parse(src: Union[DiagramSource, str]) -> List[Union[FamilyInstance, GroupDiagram]]:
    """Family declarations become FamilyInstance values, diagram declarations GroupDiagram values."""
    if isinstance(src, str):
        src = DiagramSource(src)
    items = []
    for item in _Parser(src.text).document():
        if isinstance(item, _RawDiagram):
            items.append(_build_diagram(item))
        else:
            items.append(_build_family(item[0], item[1]))
    logger.debug("parsed %d declarations from %s", len(items), src.origin)
    return items


def parse_one(src: Union[DiagramSource, str]) -> Union[FamilyInstance, GroupDiagram]:
    items = parse(src)
    if len(items) != 1:
        raise DslSemanticError("document", f"expected one declaration, found {len(items)}")
    return items[0]
