import pytest

from core.errors import SweepCapExceeded, UnknownOracle, WrongFamily
from core.types import Settings
from oracles.isotropy import ActionParams
from services.catalog import CatalogService, euler_formula, loop_formula
from services.oracle import OracleService
from services.sweep import SweepService
from topology.classify import S3xS3, classify
from topology.diagram import FamilyInstance, validate_family


def test_sweep_instances_are_lexicographic():
    instances = list(SweepService().instances("N6B", 1))
    assert len(instances) == 9
    assert instances[0].params == {"p": -1, "q": -1, "n": 1}
    assert instances[-1].params == {"p": 1, "q": 1, "n": 1}
    assert [f["n"] for f in SweepService().instances("N6F", 3)] == [1, 2, 3]


def test_sweep_bounds():
    service = SweepService(Settings(sweep_max=5))
    with pytest.raises(SweepCapExceeded):
        list(service.instances("N6C", 6))
    with pytest.raises(SweepCapExceeded):
        list(service.instances("N6C", 0))
    with pytest.raises(ValueError):
        list(service.instances("N7A", 1))


def test_sweep_n6c_parity():
    records = SweepService().run("N6C", 20)
    assert len(records) == 20
    for n, rec in enumerate(records, start=1):
        assert rec.valid
        assert rec.verdict.kind == ("S4xS2" if n % 2 == 0 else "NontrivialS4BundleOverS2")
        assert rec.pi1_P == ("Z_2" if n % 2 == 0 else "0")


def test_sweep_n6d_mod_three():
    records = SweepService().run("N6D", 6)
    assert [rec.verdict.trivial for rec in records] == [False, False, True, False, False, True]


def test_sweep_n6b_marks_invalid_rows():
    records = SweepService().run("N6B", 2)
    assert len(records) == 5 * 5 * 2
    by_params = {(r.params["p"], r.params["q"], r.params["n"]): r for r in records}
    assert not by_params[(0, 0, 1)].valid
    assert not by_params[(2, 2, 1)].valid
    assert by_params[(1, 2, 2)].euler == [4, -2]


def test_random_n6a_instances():
    service = SweepService(Settings(seed=11))
    instances = service.random_n6a(100)
    assert len(instances) == 100
    assert instances == SweepService(Settings(seed=11)).random_n6a(100)
    oracle = OracleService()
    for f in instances:
        assert validate_family(f) == []
        assert classify(f) == S3xS3()
        assert oracle.intersect(f).agree


def test_euler_oracle():
    report = OracleService().run("euler", family=FamilyInstance("N6B", {"p": 2, "q": 3, "n": 5}))
    assert report.agree
    assert str(report) == "closed-form ±(15,−10); recipe ±(15,−10); AGREE"
    assert OracleService().euler(FamilyInstance("N6F", {"n": 4})).agree
    with pytest.raises(WrongFamily):
        OracleService().euler(FamilyInstance("N6C", {"n": 1}))


def test_loop_oracle():
    service = OracleService()
    for k, blocks in ((3, [1]), (3, [4]), (5, [-4, 4]), (4, [3, 2])):
        report = service.run("loop", k=k, blocks=blocks)
        assert report.agree, str(report)


ISOTROPY_PARAMS = [
    ActionParams(0, 0, 1, 0, 0, 1),
    ActionParams(1, -2, 1, 0, 1, 2),
    ActionParams(1, -1, 1, 0, 1, 2, n_minus=2, n_plus=1),
]


@pytest.mark.parametrize("params", ISOTROPY_PARAMS)
def test_isotropy_oracle(params):
    report = OracleService(Settings(samples=60)).run("isotropy", params=params)
    assert report.agree, str(report)
    assert "diagram recovered: N6A(" in str(report)
    assert report.lines[-1] == "AGREE"


@pytest.mark.parametrize("settings", [
    Settings(samples=60, rank_tolerance=0.999),
    Settings(samples=60, min_gap=float("inf")),
], ids=["coarse-tolerance", "unreachable-gap"])
def test_isotropy_oracle_needs_a_clean_rank(settings):
    report = OracleService(settings).run("isotropy", params=ISOTROPY_PARAMS[2])
    assert not report.agree
    assert report.lines[-1] == "DISAGREE"


def test_intersect_oracle_refutes_n6b():
    report = OracleService().intersect(FamilyInstance("N6B", {"p": 1, "q": 0, "n": 2}))
    assert not report.agree
    assert str(report) == "H = K⁻∩K⁺: REFUTED"


def test_unknown_oracle():
    with pytest.raises(UnknownOracle):
        OracleService().run("curvature")


def test_catalog_rows():
    rows = CatalogService().rows()
    assert [row["family"] for row in rows] == ["N6A", "N6B", "N6C", "N6D", "N6E", "N6F"]
    verdicts = {row["family"]: row["verdict"] for row in rows}
    assert verdicts == {
        "N6A": "M ≅ S³×S³",
        "N6B": "e_P=±n(q,−p)",
        "N6C": "bundle trivial if and only if n even",
        "N6D": "bundle trivial if and only if p ≡ 0 mod 3",
        "N6E": "M ≅ S⁴×S²",
        "N6F": "e_P=±n",
    }
    assert rows[1]["G"] == "S3xS3"
    assert rows[3]["conditions"] == "none"
    assert rows[5]["base"] == "ℂP²"


def test_catalog_formulas():
    assert euler_formula("N6F") == "e_P=±n"
    assert loop_formula("N6E") == "M ≅ S⁴×S²"
    table = CatalogService().table()
    assert list(table.columns) == ["family", "G", "base", "fiber", "structure group", "conditions", "verdict"]
    assert len(table) == 6
