import pytest

from core.errors import DslSemanticError, DslSyntaxError
from dsl.parser import DiagramSource, parse, parse_one, tokenize
from dsl.printer import format_diagram, format_document, format_family, format_subgroup
from topology.diagram import FamilyInstance, GroupDiagram, family_diagram
from topology.liegroup import S3_S3, S3_T2, FiniteGen, Su3Block, SubgroupSpec


def n6a(r, s, minus, plus, m_minus, m_plus):
    (b_m, c_m), (b_p, c_p) = minus, plus
    return FamilyInstance("N6A", {
        "r": r, "s": s,
        "a_minus": r * b_m + s * c_m, "b_minus": b_m, "c_minus": c_m,
        "a_plus": r * b_p + s * c_p, "b_plus": b_p, "c_plus": c_p,
        "m_minus": m_minus, "m_plus": m_plus,
    })


CORPUS = [
    n6a(0, 0, (1, 0), (0, 1), 1, 1),
    n6a(1, 2, (1, 0), (0, 1), 1, 1),
    n6a(0, 0, (1, 0), (1, 2), 2, 2),
    n6a(1, 0, (1, 0), (0, 1), 2, 3),
    n6a(2, -1, (1, 1), (1, -1), 4, 2),
    n6a(-1, 3, (2, 1), (1, 1), 3, 1),
    FamilyInstance("N6B", {"p": 1, "q": 0, "n": 1}),
    FamilyInstance("N6B", {"p": 1, "q": 0, "n": 2}),
    FamilyInstance("N6B", {"p": 2, "q": 3, "n": 5}),
    FamilyInstance("N6B", {"p": 1, "q": -1, "n": 4}),
    FamilyInstance("N6B", {"p": 0, "q": 1, "n": 3}),
    FamilyInstance("N6B", {"p": 3, "q": 1, "n": 6}),
    FamilyInstance("N6B", {"p": 5, "q": -2, "n": 7}),
    FamilyInstance("N6B", {"p": 4, "q": 7, "n": 2}),
    FamilyInstance("N6C", {"n": 1}),
    FamilyInstance("N6C", {"n": 2}),
    FamilyInstance("N6C", {"n": 5}),
    FamilyInstance("N6C", {"n": 12}),
    FamilyInstance("N6D", {"p": 0}),
    FamilyInstance("N6D", {"p": 1}),
    FamilyInstance("N6D", {"p": -3}),
    FamilyInstance("N6D", {"p": 7}),
    FamilyInstance("N6E", {"p": 0}),
    FamilyInstance("N6E", {"p": 2}),
    FamilyInstance("N6E", {"p": -5}),
    FamilyInstance("N6E", {"p": 9}),
    FamilyInstance("N6F", {"n": 1}),
    FamilyInstance("N6F", {"n": 2}),
    FamilyInstance("N6F", {"n": 3}),
    FamilyInstance("N6F", {"n": 10}),
]


def test_tokenizer_splits_product_words():
    values = [t.value for t in tokenize("G = S3xT2")]
    assert values == ["G", "=", "S3", "x", "T2", "end of input"]
    tok = tokenize("\n  circle")[0]
    assert (tok.line, tok.column) == (2, 3)


def test_family_declaration():
    f = parse_one("family N6B { p = 1; q = 0; n = 2 }")
    assert f == FamilyInstance("N6B", {"p": 1, "q": 0, "n": 2})
    assert parse_one("family N6C { n = 2; }  # trailing comment") == FamilyInstance("N6C", {"n": 2})


def test_diagram_declaration():
    text = """
    # N6C with n = 3
    diagram {
      G = S3xS3
      Kminus = torus();
      Kplus = S3 x cyclic(3);
      H = circle(1, 0) x cyclic(3, [0, 1/3])
    }
    """
    d = parse_one(DiagramSource(text, "n6c.cohom"))
    assert d == family_diagram(FamilyInstance("N6C", {"n": 3}))


def test_factor_positions():
    d = parse_one("""diagram {
      G = S3 x S3; Kminus = torus(); Kplus = cyclic(1) x S3; H = circle(1, 1)
    }""")
    assert d.Kplus == SubgroupSpec.generated(S3_S3, full=[1])
    d = parse_one("""diagram {
      G = S3 x T2; Kminus = circle(1) x circle(0, 1); Kplus = S3 x T2; H = cyclic(2) x cyclic(1)
    }""")
    assert d.Kminus == SubgroupSpec.generated(S3_T2, slopes=[(1, 0, 0), (0, 0, 1)])
    assert d.Kplus == SubgroupSpec.generated(S3_T2, slopes=[(0, 1, 0), (0, 0, 1)], full=[0])
    assert d.H == SubgroupSpec.generated(S3_T2, finite_gens=[FiniteGen((1, 0, 0), 2)])


def test_su3_blocks():
    d = parse_one("diagram { G = SU3; Kminus = S_U2U1; Kplus = S_U2U1; H = SU2SU1 x cyclic(4) }")
    assert d == family_diagram(FamilyInstance("N6F", {"n": 4}))
    d = parse_one("diagram { G = SU3; Kminus = S_U2U1; Kplus = SU2SU1; H = cyclic(1) }")
    assert d.H.su3_block == Su3Block("Zn_diagonal", 1)


def test_several_declarations():
    items = parse("family N6D { p = 1 }\nfamily N6E { p = 2 }\n" + format_diagram(family_diagram(CORPUS[0])))
    assert [type(x) for x in items] == [FamilyInstance, FamilyInstance, GroupDiagram]


@pytest.mark.parametrize("f", CORPUS, ids=str)
def test_family_round_trip(f):
    assert parse_one(format_family(f)) == f


@pytest.mark.parametrize("f", CORPUS, ids=str)
def test_diagram_round_trip(f):
    d = family_diagram(f)
    text = format_diagram(d)
    assert parse_one(text) == d
    assert format_diagram(parse_one(text)) == text


def test_document_round_trip():
    items = [family_diagram(f) if k % 2 else f for k, f in enumerate(CORPUS)]
    text = format_document(items)
    assert parse(text) == items
    assert text.endswith("}\n")


def test_format_subgroup():
    assert format_subgroup(SubgroupSpec.maximal_torus(S3_S3)) == "torus()"
    assert format_subgroup(SubgroupSpec.trivial(S3_S3)) == "cyclic(1)"
    assert format_subgroup(SubgroupSpec.generated(S3_S3, full=[1])) == "cyclic(1) x S3"
    assert format_subgroup(SubgroupSpec.circle(S3_S3, (2, -1))) == "circle(2, -1)"
    assert format_subgroup(SubgroupSpec.su3(Su3Block("SU2SU1_Zn", 3))) == "SU2SU1 x cyclic(3)"
    assert format_family(FamilyInstance("N6B", {"p": 1, "q": 0, "n": 2})) == "family N6B { p = 1; q = 0; n = 2 }"


def test_syntax_error_position():
    text = "diagram {\n  G = S3 x S3;\n  Kminus = circle(1, );\n}"
    with pytest.raises(DslSyntaxError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (3, 22)
    assert str(info.value) == "3:22: expected an integer, found ')'"


@pytest.mark.parametrize("text", [
    "",
    "# nothing here",
    "family N6C { n = 2 } @",
    "family N6C { n 2 }",
    "diagram { G = S3 x S3; Kminus = cyclic(2, [1/0, 0]) }",
    "diagram { Q = S3 }",
    "family { n = 1 }",
])
def test_syntax_errors(text):
    with pytest.raises(DslSyntaxError):
        parse(text)


@pytest.mark.parametrize("text,field", [
    ("diagram { G = S3 x S3; Kminus = torus(); Kplus = torus() }", "H"),
    ("diagram { G = S3 x S3; Kminus = torus(); Kminus = torus() }", "Kminus"),
    ("family N7A { n = 1 }", "N7A"),
    ("family N6C { n = 1; n = 2 }", "n"),
    ("family N6B { p = 1; q = 0 }", "N6B"),
    ("diagram { G = T2 x S3; Kminus = torus(); Kplus = torus(); H = torus() }", "G"),
    ("diagram { G = S3 x T2; Kminus = T2 x S3; Kplus = torus(); H = torus() }", "Kminus"),
    ("diagram { G = S3 x S3; Kminus = circle(1, 2, 3); Kplus = torus(); H = torus() }", "Kminus"),
    ("diagram { G = S3 x S3; Kminus = torus(); Kplus = torus(); H = cyclic(2, [1/3, 0]) }", "H"),
    ("diagram { G = S3 x S3; Kminus = torus(); Kplus = torus(); H = cyclic(0) }", "H"),
    ("diagram { G = S3 x S3; Kminus = torus(); Kplus = circle(0, 0); H = torus() }", "Kplus"),
    ("diagram { G = SU3; Kminus = S_U2U1; Kplus = torus(); H = S_U2U1 }", "Kplus"),
])
def test_semantic_errors(text, field):
    with pytest.raises(DslSemanticError) as info:
        parse(text)
    assert info.value.field == field
    assert str(info.value).startswith(f"{field}: ")


def test_parse_one_needs_exactly_one_declaration():
    with pytest.raises(DslSemanticError):
        parse_one("family N6C { n = 1 } family N6C { n = 2 }")
