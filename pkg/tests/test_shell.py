import csv
import io
import json
from fractions import Fraction

import pytest

from asklab.errors import BudgetExceeded, DecompositionInvalid, ShapeMismatch
from asklab.graphloci import Graph, graph_rep
from asklab.modrep import identity_rep
from asklab.qseries import LaurentPoly, SRingElem
from asklab.shell import (
    AffineScheme,
    BBDecomposition,
    CheckRecord,
    VerificationReport,
    affine_count,
    affine_space,
    hm_combination,
    load_decomposition,
    load_scheme,
    mth_power_identities,
    product_scheme,
    theorem_a_check,
)
from asklab.shell.battery import build_rep, verify_battery
from asklab.shell.report import CSV_COLUMNS, qpair

K1, EMPTY0 = Graph.complete(1), Graph.empty(0)
A1_DECOMP = BBDecomposition((K1, EMPTY0), (1, 1), "A1")


def scheme(nvars, *polys, name=None):
    return AffineScheme(nvars, tuple(tuple(p) for p in polys), name)


# -- point counts -------------------------------------------------------------------


def test_count_examples():
    assert affine_count(scheme(1, [(1, (1,))]), 7) == 1
    for q in (2, 3, 4, 5, 9):
        assert affine_count(affine_space(2), q) == q**2
    hyperbola = load_scheme({"vars": 2, "polys": [[{"coeff": 1, "exps": [1, 1]}, {"coeff": -1, "exps": [0, 0]}]]})
    assert affine_count(hyperbola, 5) == 4


def test_count_over_extension_fields():
    # x^2 + 1 = 0 has roots in F_9 but not F_3
    Y = scheme(1, [(1, (2,)), (1, (0,))])
    assert affine_count(Y, 3) == 0
    assert affine_count(Y, 9) == 2
    # coefficients are reduced into the prime field
    assert affine_count(scheme(1, [(7, (1,))]), 7) == 7


def test_count_is_multiplicative():
    Y1 = scheme(2, [(1, (1, 1)), (-1, (0, 0))])
    Y2 = scheme(1, [(1, (2,)), (-1, (1,))])
    for q in (2, 3, 4, 5):
        assert affine_count(product_scheme(Y1, Y2), q) == affine_count(Y1, q) * affine_count(Y2, q)
        for l in range(4):
            assert affine_count(affine_space(l), q) == q**l


def test_scheme_validation_and_budget():
    with pytest.raises(ShapeMismatch):
        scheme(2, [(1, (1,))])
    with pytest.raises(ShapeMismatch):
        load_scheme({"polys": []})
    with pytest.raises(BudgetExceeded):
        affine_count(affine_space(4), 5, budget=100)
    Y = load_scheme({"vars": 1, "polys": [[{"coeff": 1, "exps": [1]}]], "name": "origin"})
    assert load_scheme(Y.to_json()) == Y


# -- decompositions and H_m -----------------------------------------------------------


def test_hm_examples():
    for q in (2, 3, 5):
        for m in (1, 2, 3):
            hm = hm_combination(A1_DECOMP, m, q)
            assert hm == (q**m + q - 1) + 1
            assert (hm - q) % q**m == 0
    assert hm_combination(BBDecomposition((K1,), (1,)), 1, 3) == 5
    assert hm_combination(BBDecomposition((), ()), 2, 3) == 0
    with pytest.raises(ValueError):
        hm_combination(A1_DECOMP, 0, 3)


def test_decomposition_json():
    raw = {"graphs": [{"n": 1, "edges": []}], "coeffs": [{"laurent": {"min_exp": 0, "coeffs": [-1]}, "geom_factors": [1]}]}
    D = load_decomposition(raw)
    assert D.coeffs == (SRingElem(LaurentPoly.const(-1), (1,)),)
    assert load_decomposition(D.to_json()) == D
    with pytest.raises(ShapeMismatch):
        BBDecomposition((K1,), (1, 2))
    with pytest.raises(ShapeMismatch):
        load_decomposition({"graphs": []})


def test_pipeline_affine_line():
    rep = theorem_a_check(affine_space(1), A1_DECOMP, 3, [2, 3, 5])
    assert rep.passed and not rep.failures
    checks = {r.check for r in rep.records}
    assert {"decomposition identity", "count vs H_m", "count vs F(q)", "F(q) vs G(q)"} <= checks
    assert {"power orbit form", "power class form"} <= checks
    for r in rep.records:
        if r.congruence_exp is not None:
            assert r.congruence_exp >= 3


def test_pipeline_origin():
    Y = scheme(1, [(1, (1,))], name="origin")
    rep = theorem_a_check(Y, BBDecomposition((EMPTY0,), (1,)), 2, [2, 3, 5, 7])
    assert rep.passed
    assert all(r.status == "pass" for r in rep.records)


def test_pipeline_geometric_coefficients():
    # the point as -K1 / (1 - X): H_m has q - 1 denominators, F and G do not
    Y = scheme(1, [(1, (1,))], name="origin")
    D = BBDecomposition((K1,), (SRingElem(LaurentPoly.const(-1), (1,)),))
    rep = theorem_a_check(Y, D, 3, [2, 3, 5, 7], group_side=False)
    assert rep.passed
    assert any("prime to q" in r.note for r in rep.records if r.check == "count vs H_m" and r.params["q"] > 2)


def test_pipeline_rejects_bad_decomposition():
    with pytest.raises(DecompositionInvalid) as exc:
        theorem_a_check(affine_space(1), BBDecomposition((K1,), (1,)), 3, [2, 3])
    assert exc.value.q == 2
    assert (exc.value.lhs, exc.value.rhs) == (2, 1)


def test_power_identity_examples():
    rep = mth_power_identities(identity_rep(), 1, 3)
    orbit = next(r for r in rep.records if r.check == "power orbit form")
    cls = next(r for r in rep.records if r.check == "power class form")
    assert orbit.lhs == orbit.rhs == Fraction(5, 3)
    assert cls.lhs == cls.rhs == Fraction(11, 3)
    rep = mth_power_identities(identity_rep(), 2, 2)
    cls = next(r for r in rep.records if r.check == "power class form")
    assert cls.lhs == cls.rhs == Fraction(17, 2)
    assert mth_power_identities(graph_rep(K1), 1, 5).passed


# -- reports ---------------------------------------------------------------------------


def test_qpair():
    assert qpair(Fraction(11, 3), 3) == (11, 1)
    assert qpair(Fraction(1, 4), 4) == (1, 1)
    assert qpair(7, 5) == (7, 0)
    assert qpair(Fraction(1, 6), 2) == ("1/6", None)


def _sample_report():
    rep = VerificationReport()
    rep.add(CheckRecord("b", {"q": 3}, Fraction(11, 3), Fraction(11, 3), "pass"))
    rep.add(CheckRecord("a", {"q": 5}, 4, 5, "fail", repro={"q": 5}))
    rep.add(CheckRecord("a", {"q": 2}, None, None, "skip", note="too big"))
    return rep


def test_report_serialisations():
    rep = _sample_report()
    assert not rep.passed and len(rep.failures) == 1
    j = rep.to_json()
    assert j["schema_version"] == 1
    assert j["summary"] == {"pass": 1, "fail": 1, "skip": 1}
    assert [(r["check"], r["params"]["q"]) for r in j["records"]] == [("a", 2), ("a", 5), ("b", 3)]
    assert j["records"][2]["lhs"] == {"num": 11, "den_exp": 1}
    assert j["records"][1]["repro"] == {"q": 5}
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[3][:6] == ["b", '{"q": 3}', "11", "1", "11", "1"]
    assert rep.to_table().splitlines()[-1] == "1 passed, 1 failed, 1 skipped"
    json.dumps(j)


def test_report_is_deterministic():
    a = theorem_a_check(affine_space(1), A1_DECOMP, 2, [2, 3], group_side=False)
    b = theorem_a_check(affine_space(1), A1_DECOMP, 2, [2, 3], group_side=False)
    strip = lambda rep: [{k: v for k, v in r.items() if k != "runtime"} for r in rep.to_json()["records"]]
    assert strip(a) == strip(b)


# -- battery ---------------------------------------------------------------------------


def test_battery_empty_config():
    rep = verify_battery({})
    assert rep.records == [] and rep.passed


def test_battery_rep_grammar():
    assert build_rep("id1") == identity_rep()
    assert build_rep({"graph": {"n": 1, "edges": []}}).shape == (1, 1, 1)
    assert build_rep({"power": ["id1", 2]}).shape == (1, 2, 2)
    assert build_rep({"scale": ["id1", 2]}).tensor == (((2,),),)
    assert build_rep({"ad": "n3"}).shape == (3, 3, 3)
    with pytest.raises(ValueError):
        build_rep("nonsense")


def test_battery_small_config_passes():
    cfg = {
        "q": [2, 3],
        "m": [1, 2],
        "reps": [{"name": "id1", "l": 1, "d": 1, "e": 1, "tensor": [[[1]]], "expect": {"ask": {"3": "5/3"}}},
                 {"name": "heis", "hull": "id1"}],
        "graphs": [{"n": 2, "edges": []}],
        "lie": ["n2"],
    }
    rep = verify_battery(cfg)
    assert rep.passed and len(rep.records) > 20


def test_battery_corrupted_tensor_fails_with_pinpoint():
    # the tensor says id1 but has been corrupted to 0
    cfg = {"q": [3], "m": [1],
           "reps": [{"name": "bad", "l": 1, "d": 1, "e": 1, "tensor": [[[0]]], "expect": {"ask": {"3": "5/3"}}}]}
    rep = verify_battery(cfg)
    assert not rep.passed
    [fail] = rep.failures
    assert fail.check == "expected ask"
    assert fail.params == {"rep": "bad", "q": 3}
    assert (fail.lhs, fail.rhs) == (3, Fraction(5, 3))
    assert fail.repro["tensor"]["tensor"] == [[[0]]]
