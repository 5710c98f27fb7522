from __future__ import annotations

import json
import random
from fractions import Fraction

import jsonschema
import pytest

from hopfglue.cli import load_data, load_schema
from hopfglue.connection import DependentLegsError, Tup
from hopfglue.freestar import (
    E,
    ONE_G,
    PHI1,
    PHI2,
    S,
    SSTAR,
    CutoffError,
    GradedTensor,
    NCPoly,
    Phi,
    SymbolicConnection,
    SymbolImageTable,
    TargetElem,
    build_example,
    check_symbol_table,
    gt1,
    gtu,
    legs_independent,
    method_one,
    method_two,
    nf,
    nf_word,
    nf_word_random,
    displayed_intermediate,
    displayed_method_one,
    displayed_method_two,
    parse_poly,
    parse_tup,
    phi_hat,
    phi_hat_antipode,
    projector,
    same_tensor,
    same_terms,
    shift_representation,
    verify_En,
    verify_symbolic,
)


def test_isometry_rewrite():
    assert SSTAR * S == NCPoly.const(1)
    assert (S * SSTAR).terms == {("s", "s*"): 1}
    assert nf(NCPoly.word("s*", "s", "phi1", "phi2")) == NCPoly.word("phi1", "phi2")
    assert nf_word(("s*", "s*", "s", "s")) == ()


def test_ss_star_is_not_one_in_shift_model():
    R = shift_representation(6)
    assert R(S * SSTAR)[:, 0].tolist() == [0] * 6


def test_parser():
    assert parse_poly("(1-phi2^2)(1-phi1^2)") == (1 - PHI2 * PHI2) * (1 - PHI1 * PHI1)
    assert parse_poly("2 phi1 - 1/2") == 2 * PHI1 - Fraction(1, 2)
    assert parse_tup(["phi1 @1", "1 @u", "0"]) == Tup([gt1(PHI1), gtu(NCPoly.const(1)), GradedTensor()])


def test_graded_product_uses_u_squared():
    x = gtu(PHI1)
    assert x * x == gt1(PHI1 * PHI1)
    assert gt1(PHI1).is_homogeneous(1) and gtu(NCPoly.const(1)).is_homogeneous(1)
    assert gt1(PHI1 * PHI1).is_homogeneous(0)


def test_pullback_membership():
    model = build_example()
    assert model.contains(Tup([ONE_G] * 3))
    assert model.contains(Tup([gt1(PHI1), gtu(NCPoly.const(1)), gt1(PHI2)]))
    assert not model.contains(Tup([gt1(PHI1), gt1(PHI1), gt1(PHI2)]))


def test_phi01_involution():
    x = TargetElem(("Z2", "I", "Z2"), {(1, 2, 0): 3, (0, 1, 1): -1})
    assert Phi((0, 1), Phi((0, 1), x)) == x


def test_symbol_table_relations():
    tab = SymbolImageTable.default()
    assert tab.sigma(1, PHI1) == TargetElem(("Z2", "I"), {(1, 0): 1})
    assert tab.sigma(2, PHI2) == TargetElem(("I", "Z2"), {(0, 1): 1})
    assert check_symbol_table()


def test_method_one_matches_display():
    r = method_one()
    assert same_terms(r.intermediate, displayed_intermediate())
    assert same_terms(r.ell, displayed_method_one())
    assert r.transfers["a"] == gt1(PHI1) and r.transfers["b"] == gt1(PHI1)
    assert r.transfers["a0a1"] == Tup([gt1(PHI2), gt1(PHI2)])
    assert r.transfers["b2"] == gt1(PHI1) and r.transfers["c2"] == gt1(PHI2)


def test_method_one_data_file_matches():
    want = load_data("method_one.json")
    jsonschema.validate(want, load_schema("symbolic.schema.json"))
    assert json.dumps(method_one().ell.to_json(), sort_keys=True) == json.dumps(want, sort_keys=True)


def test_method_two_matches_display():
    r = method_two()
    assert same_terms(r.ell, displayed_method_two())
    one_minus_g2sq = Tup([ONE_G] * 3) - r.gammas[2] * r.gammas[2]
    assert one_minus_g2sq == parse_tup(["(1-phi2^2) @1", "(1-phi2^2) @1", "0"])
    assert r.ell.terms[2] == (r.gammas[2], r.gammas[2])


def test_methods_agree_only_as_valid_connections():
    a, b = method_one().ell, method_two().ell
    assert verify_symbolic(a, build_example()).passed
    assert verify_symbolic(b, build_example()).passed
    assert not same_tensor(a, b)


def test_collapse_residual_when_term_dropped():
    ell = displayed_method_one()
    rep = verify_symbolic(SymbolicConnection(ell.terms[:2]))
    assert not rep.collapse
    assert rep.residual[1] == gt1((1 - PHI2 * PHI2) * (1 - PHI1 * PHI1))
    assert rep.residual[0].is_zero() and rep.residual[2].is_zero()


def test_leg_independence():
    assert legs_independent(displayed_method_one()) == (True, True)
    assert legs_independent(method_two().ell) == (True, True)
    dup = SymbolicConnection(displayed_method_one().terms[:1] * 2)
    assert legs_independent(dup) == (False, False)
    with pytest.raises(DependentLegsError):
        projector(dup)


def test_projector():
    p = projector(displayed_method_one())
    assert p.size == 3 and p.idempotent and p.coinvariant
    assert p.entries[0][0] == Tup([gt1(PHI2 * PHI2), gt1(PHI2 * PHI2), ONE_G])
    one = SymbolicConnection([(Tup([gtu(NCPoly.const(1))]), Tup([gtu(NCPoly.const(1))]))], 1)
    p1 = projector(one)
    assert p1.size == 1 and p1.entries[0][0] == Tup([ONE_G])


def test_shift_identity():
    rep = verify_En(16)
    assert rep.passed
    R = shift_representation(16)
    m = R(E(0) * E(0))
    assert m[:, 0].tolist() == [0, 0, 1] + [0] * 13
    assert m[:, 1].tolist() == [0] * 16
    with pytest.raises(CutoffError):
        shift_representation(3)


def test_phi_hat_values_and_oddness():
    assert phi_hat(1, Fraction(1, 4)) == 1
    assert phi_hat(1, 1) == -1
    assert phi_hat(2, Fraction(1, 2)) == 1
    for k in range(1, 33):
        q = Fraction(1, 4) + Fraction(k, 16)
        if q > Fraction(9, 4):
            break
        for which in (1, 2):
            assert phi_hat_antipode(which, q) == -phi_hat(which, q)
    with pytest.raises(ValueError):
        phi_hat(1, 3)


def test_random_rewrite_orders_agree():
    rng = random.Random(7)
    for _ in range(300):
        w = tuple(rng.choice(["s", "s*", "phi1"]) for _ in range(rng.randint(0, 12)))
        assert nf_word_random(w, rng) == nf_word(w)
