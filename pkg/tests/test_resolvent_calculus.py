import numpy as np
import pytest

from resolvent_order.certify import certify_fne
from resolvent_order.linops import DimensionMismatch, evaluate
from resolvent_order.prox_catalog import Quadratic, prox
from resolvent_order.resolvent_calculus import (
    MonotoneMatrix,
    NotMonotone,
    NotSymmetric,
    SingularMatrix,
    comparable_psd_pair,
    loewner_chain_check,
    loewner_leq,
    minty_inverse_identity_check,
    quadratic_order_chain,
    resolvent,
    resolvent_expr,
)


def test_monotone_matrix_validation():
    MonotoneMatrix.of(np.diag([0.0, 2.0]))
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])  # skew: monotone, not symmetric
    MonotoneMatrix.of(rot)
    with pytest.raises(NotMonotone):
        MonotoneMatrix.of(np.diag([-0.5, 1.0]))


def test_resolvent_diagonal_closed_form():
    J = resolvent(MonotoneMatrix.of(np.diag([1.0, 3.0])))
    assert np.allclose(J, np.diag([0.5, 0.25]))


def test_resolvent_matches_quadratic_prox(rng):
    G = rng.standard_normal((4, 4))
    A = G @ G.T / 4
    J = resolvent(MonotoneMatrix.of(A))
    for _ in range(50):
        x = rng.uniform(-5, 5, size=4)
        assert np.linalg.norm(J @ x - prox(Quadratic(A), x)) <= 1e-10 * (
            1 + np.linalg.norm(x))


def test_resolvent_eigenvalues_in_unit_interval(rng):
    # J_A of a symmetric PSD matrix has eigenvalues in (0, 1]
    for _ in range(20):
        G = rng.standard_normal((5, 5))
        J = resolvent(MonotoneMatrix.of(G @ G.T / 5))
        eigs = np.linalg.eigvalsh(0.5 * (J + J.T))
        assert np.all(eigs > 0.0)
        assert np.all(eigs <= 1.0 + 1e-12)


def test_resolvent_expr_is_fne(rng):
    G = rng.standard_normal((3, 3))
    A = MonotoneMatrix.of(G @ G.T / 3)
    assert certify_fne(resolvent_expr(A)).holds
    x = rng.uniform(-2, 2, size=3)
    assert np.allclose(evaluate(resolvent_expr(A), x), resolvent(A) @ x)


def test_minty_inverse_identity_diagonal():
    # J_A + J_{A^{-1}} = Id; for diag(2, 4): 1/3 + 2/3 and 1/5 + 4/5
    cert = minty_inverse_identity_check(MonotoneMatrix.of(np.diag([2.0, 4.0])))
    assert cert.holds
    assert cert.detail["frobenius_relative_error"] <= 1e-12


def test_minty_inverse_identity_random(rng):
    for _ in range(20):
        G = rng.standard_normal((4, 4))
        A = MonotoneMatrix.of(G @ G.T / 4 + 0.1 * np.eye(4))
        assert minty_inverse_identity_check(A).holds


def test_minty_rejects_singular():
    with pytest.raises(SingularMatrix):
        minty_inverse_identity_check(MonotoneMatrix.of(np.diag([0.0, 1.0])))


def test_loewner_leq_examples():
    assert loewner_leq(np.diag([2.0, 3.0]), np.eye(2)).holds
    cert = loewner_leq(np.eye(2), np.diag([2.0, 0.5]))
    assert not cert.holds
    assert cert.detail["min_eigenvalue"] == pytest.approx(-1.0)
    v, y = cert.witness
    # witness direction realizes the most negative eigenvalue
    assert float(v @ ((np.eye(2) - np.diag([2.0, 0.5])) @ v)) == pytest.approx(-1.0)
    with pytest.raises(NotSymmetric):
        loewner_leq(np.array([[0.0, 1.0], [0.0, 0.0]]), np.zeros((2, 2)))
    with pytest.raises(DimensionMismatch):
        loewner_leq(np.eye(2), np.eye(3))


def test_loewner_chain_comparable_pairs(rng, cfg):
    for _ in range(10):
        A, B = comparable_psd_pair(rng, 4)
        rep = loewner_chain_check(
            MonotoneMatrix.of(A), MonotoneMatrix.of(B), cfg)
        assert rep.consistent
        assert rep.loewner and rep.resolvent_loewner and rep.resolvent_order


def test_loewner_chain_incomparable_direction(cfg):
    # B has the larger form, so B <=_L A fails in every leg
    A = MonotoneMatrix.of(np.eye(2))
    B = MonotoneMatrix.of(np.diag([3.0, 3.0]))
    rep = loewner_chain_check(A, B, cfg)
    assert rep.consistent
    assert not rep.loewner


def test_quadratic_chain_ordered(rng, cfg):
    for _ in range(10):
        A, B = comparable_psd_pair(rng, 3)
        rep = quadratic_order_chain(A, B, cfg)
        assert rep.consistent
        assert rep.pointwise and rep.loewner and rep.prox_order
        assert rep.moreau_envelope


def test_quadratic_chain_unordered(cfg):
    # incomparable pair: neither dominates, all four legs must say no
    A = np.diag([2.0, 0.5])
    B = np.diag([0.5, 2.0])
    rep = quadratic_order_chain(A, B, cfg)
    assert rep.consistent
    assert not rep.loewner


def test_comparable_psd_pair_is_ordered(rng):
    A, B = comparable_psd_pair(rng, 6, scale=2.0)
    assert loewner_leq(A, B).holds
    assert float(np.min(np.linalg.eigvalsh(B))) >= -1e-12
