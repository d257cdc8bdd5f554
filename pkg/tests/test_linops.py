import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resolvent_order.linops import (
    Compose,
    Constant,
    Difference,
    DimensionMismatch,
    Identity,
    Linear,
    NonFiniteInput,
    NonSquare,
    ProxOf,
    Rotation,
    Scale,
    Sum,
    compose_power,
    evaluate,
    linearize,
    rotation_matrix,
    spectrum,
)
from resolvent_order.prox_catalog import IndicatorBall, Quadratic


def test_eval_identity():
    assert np.allclose(evaluate(Identity(2), [3, 4]), [3, 4])


def test_eval_scale():
    assert np.allclose(evaluate(Scale(0.5, Identity(2)), [2, -2]), [1, -1])


def test_eval_rotation_quarter_turn():
    out = evaluate(Rotation(math.pi / 2), [1, 0])
    assert np.allclose(out, [0, 1], atol=1e-15)


def test_eval_compose_and_sum():
    op = Compose(Scale(2.0, Identity(2)), Sum((Identity(2), Identity(2))))
    assert np.allclose(evaluate(op, [1, 1]), [4, 4])


def test_eval_rejects_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(Identity(2), [1, 2, 3])


def test_eval_rejects_nonfinite():
    with pytest.raises(NonFiniteInput):
        evaluate(Identity(2), [np.nan, 0.0])


def test_rotation_requires_dim2_children():
    with pytest.raises(DimensionMismatch):
        Sum((Rotation(0.1), Identity(3)))


def test_linearize_rotation():
    parts = linearize(Rotation(0.7))
    assert np.allclose(parts.matrix, rotation_matrix(0.7))
    assert parts.is_linear


def test_linearize_difference():
    M = np.array([[0.5, 0.1], [0.0, 0.3]])
    parts = linearize(Difference(Identity(2), Linear(M)))
    assert np.allclose(parts.matrix, np.eye(2) - M)


def test_linearize_ball_prox_is_nonlinear():
    assert linearize(ProxOf(IndicatorBall([0.0, 0.0], 1.0))) is None


def test_linearize_quadratic_prox():
    A = np.diag([1.0, 3.0])
    parts = linearize(ProxOf(Quadratic(A)))
    assert np.allclose(parts.matrix, np.diag([0.5, 0.25]))


def test_linearize_affine_offset():
    op = Sum((Linear(np.diag([2.0, 2.0])), Constant([1.0, -1.0])))
    parts = linearize(op)
    assert np.allclose(parts.matrix, np.diag([2.0, 2.0]))
    assert np.allclose(parts.offset, [1.0, -1.0])
    assert not parts.is_linear


def test_spectrum_diagonal():
    s = spectrum(np.diag([1.0, 3.0]))
    assert np.allclose(s.eigenvalues, [1.0, 3.0])
    assert s.operator_norm == pytest.approx(3.0)


def test_spectrum_rotation_is_isometry():
    s = spectrum(rotation_matrix(0.4))
    assert s.eigenvalues is None  # not symmetric
    assert s.operator_norm == pytest.approx(1.0, abs=1e-12)


def test_spectrum_scaled_rotator_norm():
    # ||2 alpha R_theta - I|| = sqrt(4 a^2 - 4 a cos(theta) + 1)
    theta = math.acos(0.6)
    a = 1.0 / 2.4
    M = 2 * a * rotation_matrix(theta) - np.eye(2)
    s = spectrum(M)
    assert s.operator_norm == pytest.approx(
        math.sqrt(4 * a**2 - 4 * a * 0.6 + 1), abs=1e-12)
    assert s.operator_norm == pytest.approx(0.8333333333, abs=1e-9)


def test_spectrum_rejects_nonsquare():
    with pytest.raises(NonSquare):
        spectrum(np.zeros((2, 3)))


def test_spectrum_symmetric_reconstruction(rng):
    G = rng.standard_normal((30, 30))
    M = G + G.T
    eigvals, eigvecs = np.linalg.eigh(M)
    R = eigvecs @ np.diag(eigvals) @ eigvecs.T
    assert np.linalg.norm(R - M) / np.linalg.norm(M) < 1e-9


def test_compose_power_zero_is_identity():
    T = Scale(0.5, Identity(3))
    assert np.allclose(evaluate(compose_power(T, 0), [1, 2, 3]), [1, 2, 3])
    assert np.allclose(evaluate(compose_power(T, 3), [8, 0, 0]), [1, 0, 0])


vectors2 = st.lists(
    st.floats(-50, 50, allow_nan=False), min_size=2, max_size=2
).map(np.array)


@given(x=vectors2, alpha=st.floats(-5, 5))
@settings(max_examples=50, deadline=None)
def test_eval_respects_algebra(x, alpha):
    A = Linear(np.array([[0.3, -0.2], [0.1, 0.5]]))
    B = Rotation(0.3)
    lhs = evaluate(Sum((A, B)), x)
    rhs = evaluate(A, x) + evaluate(B, x)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * (1 + np.linalg.norm(x))
    assert np.allclose(
        evaluate(Scale(alpha, A), x), alpha * evaluate(A, x), atol=1e-12)


def test_linearize_eval_consistency(rng):
    op = Difference(
        Compose(Rotation(0.5), Scale(0.7, Linear(rng.standard_normal((2, 2))))),
        Sum((Identity(2), Constant([0.4, -1.2]))),
    )
    parts = linearize(op)
    for _ in range(1000):
        x = rng.uniform(-10, 10, size=2)
        ref = parts.matrix @ x + parts.offset
        assert np.linalg.norm(evaluate(op, x) - ref) <= 1e-10 * (1 + np.linalg.norm(x))
