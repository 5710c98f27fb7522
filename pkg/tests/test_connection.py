from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import oracles
from hopfglue.connection import (
    DependentLegsError,
    NonCocommutativeError,
    PieceData,
    StrongConnection,
    T,
    T_direct,
    TransferError,
    Tup,
    chern_galois_projector,
    glue_two,
    glue_two_grouplike,
    projector_from_terms,
    solve_transfer,
    synthesize_from_covering,
    synthesize_grouplike,
    synthesize_piecewise,
    theta,
    transfer_map,
    transfer_residuals,
    verify_connection,
)
from hopfglue.exactla import Subspace, identity, unit_vector, vec, zeros
from hopfglue.hopf import ComoduleAlgebra, function_hopf, symmetric_table, trivial_comodule
from hopfglue.algebra import function_algebra
from hopfglue.models import e1, e1_two_piece, free_z2_comodule, tau
from hopfglue.pullback import canonical_gluing, multipullback

ONE_H, U = vec([1, 0]), vec([0, 1])


@pytest.fixture(scope="module")
def e1_result():
    m = e1()
    return m, synthesize_from_covering(m.covering, m.connections())


def test_piece_connections_pass_pointwise_oracle():
    m = e1()
    for i, ell in m.connections().items():
        assert verify_connection(ell).passed
        pts = [(k, o) for o in range(2) for k in (0, 1)]
        assert all(oracles.check_connection(oracles.connection_from_tensor(ell.tensor, pts), pts).values())


def test_constant_connection_fails_right_colinearity():
    m = e1()
    piece = m.pieces[0]
    L = zeros((2, 4, 4))
    L[0] = L[1] = np.outer(piece.unit, piece.unit)
    rep = verify_connection(StrongConnection(m.hopf, piece, L))
    assert "right colinearity" in rep.failed_axioms()
    w = next(f for f in rep.failures if f["axiom"] == "right colinearity")
    assert w["h"] == 1
    # ell(1) = 1 (x) 1 is untouched: unitality is fine
    assert "unitality" not in rep.failed_axioms()


def test_synthesized_connection_on_e1(e1_result):
    m, res = e1_result
    ell = res.connection
    assert verify_connection(ell).passed
    verdict = oracles.check_connection(oracles.connection_from_tensor(ell.tensor))
    assert all(verdict.values()), verdict
    assert res.proof.all_hold


def test_theta_and_T_identities(e1_result):
    m, res = e1_result
    pds = res.pieces
    for i in range(3):
        assert not np.any(theta(pds, i, ONE_H))
    assert T(pds, 3, U).tolist() == m.P.unit.tolist()
    for h in (ONE_H, U):
        assert not np.any(T(pds, 0, h))
        for i in range(4):
            assert T(pds, i, h).tolist() == T_direct(pds, i, h).tolist()
    with pytest.raises(IndexError):
        theta(pds, 3, U)


def test_theta0_matches_pointwise(e1_result):
    m, res = e1_result
    pd = res.pieces[0]
    # theta_0(u) = 1 - alpha_0(tau)^2 evaluated point by point
    a = oracles.function_from_vector(pd.alpha @ tau(2))
    want = [1 - a[x] ** 2 for x in oracles.POINTS]
    assert theta(res.pieces, 0, U).tolist() == want


def test_single_piece_transports_connection():
    m = e1()
    P = m.P
    piece = P
    ell0 = StrongConnection(m.hopf, P, np.stack([np.outer(P.unit, P.unit), np.outer(tau(3), tau(3))]))
    pd = PieceData(P, ell0, Subspace(6, [P.unit, tau(3)]), identity(6), identity(6), P)
    ell = synthesize_piecewise([pd])
    assert ell.tensor.tolist() == ell0.tensor.tolist()


def test_non_cocommutative_rejected():
    h = function_hopf(symmetric_table(3))
    P = trivial_comodule(function_algebra(1), h)
    L = zeros((6, 1, 1))
    for k in range(6):
        L[k, 0, 0] = h.counit[k]
    ell = StrongConnection(h, P, L)
    pd = PieceData(P, ell, Subspace.full(1), identity(1), identity(1), P)
    with pytest.raises(NonCocommutativeError):
        synthesize_piecewise([pd])


def test_projector_on_e1(e1_result):
    m, res = e1_result
    p = chern_galois_projector(res.connection, U)
    assert p.idempotent and p.coinvariant
    legs_l = [oracles.function_from_vector(v) for v in p.left_legs]
    legs_r = [oracles.function_from_vector(v) for v in p.right_legs]
    assert oracles.is_idempotent(oracles.projector_entries(None, legs_l, legs_r))


def test_one_term_projector_is_one():
    m = e1()
    p = chern_galois_projector(m.connection(0), U)
    assert p.size == 1 and p.entries[0][0].tolist() == [1, 1, 1, 1]


def test_dependent_legs_declined():
    m = e1()
    t = tau(2)
    with pytest.raises(DependentLegsError):
        projector_from_terms([(t, t), (t, t)], m.pieces[0])


def test_two_piece_glue_and_transfer():
    m = e1_two_piece()
    f = canonical_gluing(m.covering)
    mp = multipullback(f)
    pair01 = (f.maps[(0, 1)], f.maps[(1, 0)])
    pair10 = (f.maps[(1, 0)], f.maps[(0, 1)])
    t = tau(2)
    y = solve_transfer(pair01, t, U)
    co, gl = transfer_residuals(pair01, t, y, U)
    assert not np.any(co) and not np.any(gl)
    ell = glue_two(m.connection(0), m.connection(1), transfer_map(pair01, [t], U), transfer_map(pair10, [t], U), mp)
    assert verify_connection(ell).passed


def test_transfer_needs_grouplike_behaviour():
    m = e1_two_piece()
    f = canonical_gluing(m.covering)
    pair01 = (f.maps[(0, 1)], f.maps[(1, 0)])
    with pytest.raises(TransferError):
        solve_transfer(pair01, vec([1, 0, 0, 0]), U)


def test_identical_pieces_identity_transfer_gives_diagonal():
    # legs multiply to 1, so the correction term vanishes
    terms = [(Fraction(2), Fraction(1, 2))]
    out = glue_two_grouplike(terms, terms, lambda x: x, lambda x: x, Fraction(1))
    assert out[0] == (Tup((2, 2)), Tup((Fraction(1, 2), Fraction(1, 2))))
    assert out[1][0] == Tup((0, 0))


def test_grouplike_synthesis_scalar_sanity():
    terms, thetas, Ts = synthesize_grouplike([[(Fraction(1), Fraction(1))]], Fraction(1))
    assert thetas == [0] and Ts == [0, 1]
