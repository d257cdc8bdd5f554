import math

import numpy as np
import pytest

from resolvent_order.gallery import (
    GALLERY,
    GalleryResult,
    PartitionInvalid,
    ThetaOutsideWindow,
    antisymmetry_failure,
    ball_chain,
    feasibility_window,
    partial_sum_failure,
    prox_partition_partial_sums,
    rotation_construction,
    run_item,
    transitivity_failure,
)


def test_feasibility_window_values():
    lo, hi = feasibility_window(2)
    assert lo == pytest.approx(0.5)
    assert hi == pytest.approx(1.0 / math.sqrt(2.0))
    lo3, _ = feasibility_window(3)
    assert lo3 == pytest.approx(1.0 / math.sqrt(6.0))


def test_window_shrinks_from_below_as_n_grows():
    los = [feasibility_window(n)[0] for n in range(2, 8)]
    assert all(a > b for a, b in zip(los, los[1:]))
    # n = 1 leaves nothing: the lower endpoint meets the upper one
    lo1, hi1 = feasibility_window(1)
    assert lo1 == pytest.approx(hi1)


@pytest.mark.parametrize("name", sorted(GALLERY))
def test_gallery_items_pass_with_defaults(name, cfg):
    result = run_item(name, cfg)
    assert isinstance(result, GalleryResult)
    failed = [c.description for c in result.claims if not c.ok]
    assert result.passed, f"{name}: failing claims {failed}"


def test_run_item_unknown_name(cfg):
    with pytest.raises(KeyError):
        run_item("nonexistent", cfg)


def test_rotation_construction_params(cfg):
    result = rotation_construction(cfg=cfg)
    assert result.params["n"] == 2
    assert result.params["cos_theta"] == pytest.approx(0.6)
    assert result.params["alpha"] == pytest.approx(1.0 / 2.4)
    assert result.params["identity_deviation"] <= 1e-12


def test_rotation_construction_across_dimensions(cfg):
    # pick a cos(theta) inside the window for each n
    for n in (2, 3, 4, 6):
        lo, hi = feasibility_window(n)
        theta = math.acos(0.5 * (lo + hi))
        assert rotation_construction(n, theta, cfg).passed


def test_rotation_construction_rejects_out_of_window():
    with pytest.raises(ThetaOutsideWindow) as exc:
        rotation_construction(2, math.acos(0.9))
    assert exc.value.n == 2
    assert "admissible interval" in str(exc.value)
    with pytest.raises(ThetaOutsideWindow):
        rotation_construction(2, math.acos(0.3))
    with pytest.raises(ThetaOutsideWindow):
        # n = 1 admits no theta at all
        rotation_construction(1, math.acos(0.70000001))


def test_partial_sum_failure_margin(cfg):
    result = partial_sum_failure(cfg=cfg)
    assert result.passed
    # ||2 (n alpha R) - I|| - 1 = 1/3 at the default parameters
    assert result.params["falsification_margin"] == pytest.approx(
        1.0 / 3.0, abs=1e-9)


def test_transitivity_failure_structure(cfg):
    result = transitivity_failure(cfg)
    assert result.passed
    by_desc = {c.description: c for c in result.claims}
    assert by_desc["T1 <= T2"].observed_holds
    assert by_desc["T2 <= T3"].observed_holds
    assert not by_desc["T1 <= T3"].observed_holds
    assert by_desc["2R + 2S equals Id to 1e-12"].observed_holds
    assert by_desc["T2 equals (T1 + T3)/2 to 1e-12"].observed_holds


def test_ball_chain_small(cfg):
    result = ball_chain(3, cfg)
    assert result.passed
    assert result.params["n_max"] == 3


def test_ball_chain_rejects_bad_n():
    with pytest.raises(ValueError):
        ball_chain(0)


def test_prox_partition_validation(cfg):
    with pytest.raises(PartitionInvalid):
        prox_partition_partial_sums([], cfg=cfg)
    with pytest.raises(PartitionInvalid):
        prox_partition_partial_sums([np.diag([0.5, 0.5])], cfg=cfg)
    with pytest.raises(PartitionInvalid):
        prox_partition_partial_sums(
            [np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])], cfg=cfg)


def test_prox_partition_custom(cfg, rng):
    # random orthogonal conjugation of a diagonal partition of the identity
    G = rng.standard_normal((3, 3))
    Q, _ = np.linalg.qr(G)
    D1 = np.diag([0.6, 0.1, 0.3])
    D2 = np.eye(3) - D1
    result = prox_partition_partial_sums(
        [Q @ D1 @ Q.T, Q @ D2 @ Q.T], cfg=cfg)
    assert result.passed


def test_antisymmetry_failure_requires_distinct_points(cfg):
    assert antisymmetry_failure(cfg=cfg).passed
    degenerate = antisymmetry_failure((1.0, 1.0), (1.0, 1.0), cfg=cfg)
    assert not degenerate.passed  # identical constants are no counterexample
