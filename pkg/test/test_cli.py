import io
import json

import pytest

from core.types import VerdictRecord
from main import EXIT_DISAGREE, EXIT_INPUT, EXIT_INVALID, EXIT_OK, build_parser, main

N6A_PARAMS = ["--param", "r=0", "--param", "s=0",
              "--param", "a_minus=0", "--param", "b_minus=1", "--param", "c_minus=0",
              "--param", "a_plus=0", "--param", "b_plus=1", "--param", "c_plus=2",
              "--param", "m_minus=2", "--param", "m_plus=2"]


@pytest.fixture
def document(tmp_path):
    def write(text, name="input.cohom"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def test_negative_block_lists_use_the_equals_form(capsys):
    args = build_parser().parse_args(["oracle", "loop", "--blocks=-4,4"])
    assert args.blocks == [-4, 4]
    with pytest.raises(SystemExit):
        build_parser().parse_args(["oracle", "loop", "--blocks", "-4,4"])
    assert "expected one argument" in capsys.readouterr().err


def test_classify_table(document, capsys):
    path = document("family N6C { n = 2 }\nfamily N6D { p = 3 }\n")
    assert main(["classify", path]) == EXIT_OK
    out = capsys.readouterr().out
    assert "S⁴×S²" in out
    assert "ℂP²×S²" in out
    assert "verdict" in out.splitlines()[0]


def test_classify_jsonl(document, capsys):
    path = document("family N6B { p = 2; q = 3; n = 5 }\nfamily N6F { n = 4 }\n")
    assert main(["classify", "--format", "jsonl", path]) == EXIT_OK
    records = [VerdictRecord.model_validate_json(line) for line in capsys.readouterr().out.splitlines()]
    assert [r.euler for r in records] == [[15, -10], [4]]
    assert records[0].verdict.description.endswith("e_P=±(15,−10)")


def test_validate_reports_invalid_instances(document, capsys):
    path = document("family N6B { p = 2; q = 4; n = 1 }\n")
    assert main(["validate", path]) == EXIT_INVALID
    out = capsys.readouterr().out
    assert "gcd(p,q)=1" in out
    assert "verdict" not in out


def test_validate_syntax_error(document, capsys):
    path = document("family N6C { n = }", "broken.cohom")
    assert main(["validate", path]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "broken.cohom: 1:18: expected an integer" in err


def test_missing_file(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "missing.cohom")]) == EXIT_INPUT
    assert capsys.readouterr().err.startswith("cohom1 classify:")


def test_standard_input(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("family N6E { p = 4 }"))
    assert main(["classify", "-"]) == EXIT_OK
    assert "S⁴×S²" in capsys.readouterr().out


def test_sweep(capsys):
    assert main(["sweep", "N6C", "--bound", "4", "--format", "jsonl"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(line)["params"]["n"] for line in lines] == [1, 2, 3, 4]


def test_sweep_cap(capsys):
    assert main(["sweep", "N6C", "--bound", "4", "--max", "3"]) == EXIT_INPUT
    assert "exceeds the cap" in capsys.readouterr().err


def test_oracle_euler(capsys):
    assert main(["oracle", "euler", "--family", "N6B", "-p", "2", "-q", "3", "-n", "5"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "closed-form ±(15,−10); recipe ±(15,−10); AGREE"


def test_oracle_loop(capsys):
    assert main(["oracle", "loop", "--so", "5", "--blocks=-4,4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "block weights (-4, 4)" in out
    assert out.strip().endswith("AGREE")


def test_oracle_loop_needs_blocks(capsys):
    assert main(["oracle", "loop"]) == EXIT_INPUT
    assert "--blocks" in capsys.readouterr().err


def test_oracle_intersect(capsys):
    assert main(["oracle", "intersect", "--family", "N6A"] + N6A_PARAMS) == EXIT_OK
    assert "CONFIRMED" in capsys.readouterr().out
    assert main(["oracle", "intersect", "--family", "N6B", "-p", "1", "-q", "0", "-n", "2"]) == EXIT_DISAGREE
    assert "REFUTED" in capsys.readouterr().out


def test_oracle_isotropy(capsys):
    assert main(["oracle", "isotropy", "--family", "N6A", "--samples", "40"] + N6A_PARAMS) == EXIT_OK
    out = capsys.readouterr().out
    assert "40/40 samples on principal orbits" in out
    assert "2 singular loci along the arc" in out


@pytest.mark.parametrize("argv", [
    ["oracle", "curvature"],
    ["oracle", "euler", "--family", "N6C", "-n", "2"],
    ["oracle", "euler", "-p", "1"],
    ["oracle", "intersect", "--family", "N6B", "--param", "p=one"],
])
def test_oracle_errors(argv, capsys):
    assert main(argv) == EXIT_INPUT
    assert capsys.readouterr().err.startswith("cohom1 oracle:")


def test_catalog(capsys):
    assert main(["catalog"]) == EXIT_OK
    out = capsys.readouterr().out
    for text in ("bundle trivial if and only if n even", "bundle trivial if and only if p ≡ 0 mod 3",
                 "M ≅ S⁴×S²", "e_P=±n(q,−p)", "M ≅ S³×S³"):
        assert text in out


def test_catalog_jsonl(capsys):
    assert main(["catalog", "--format", "jsonl"]) == EXIT_OK
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [row["family"] for row in rows] == ["N6A", "N6B", "N6C", "N6D", "N6E", "N6F"]
    assert rows[5]["verdict"] == "e_P=±n"
