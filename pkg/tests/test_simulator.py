"""Unit tests for the jump-SDE simulator: reproducibility, replay, kernels."""

import numpy as np
import pytest

from oslsim import (
    OslModel,
    SimConfig,
    discrete,
    linear_blend_field,
    make_constant,
    make_interpolated,
    sde_coefficient_checks,
    simulate_ensemble,
    simulate_path,
    simulate_summaries,
    truncation_error_bound,
)
from oslsim.simulator import replay_check


def model_1d():
    return OslModel(
        field=make_constant(np.eye(1)),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )


def model_2d():
    return OslModel(
        field=make_interpolated(
            np.eye(2) * 0.9,
            np.array([[1.6, 0.2], [0.2, 1.2]]),
            linear_blend_field([0.3, -0.2], 0.5),
        ),
        sigma=discrete(
            [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
            [0.5, 0.5, 0.5, 0.5],
        ),
    )


def test_same_seed_reproduces_paths_exactly():
    model = model_2d()
    cfg = SimConfig(horizon=0.4, eps=5e-3, seed=123)
    a = simulate_ensemble(model, [0.1, -0.2], cfg, 10)
    b = simulate_ensemble(model, [0.1, -0.2], cfg, 10)
    for pa, pb in zip(a.paths, b.paths):
        assert np.array_equal(pa.times, pb.times)
        assert np.array_equal(pa.states, pb.states)
        assert np.array_equal(pa.final_state, pb.final_state)


def test_different_seeds_differ():
    model = model_1d()
    p1 = simulate_path(model, [0.0], SimConfig(horizon=0.4, eps=5e-3, seed=1))
    p2 = simulate_path(model, [0.0], SimConfig(horizon=0.4, eps=5e-3, seed=2))
    assert p1.n_events != p2.n_events or not np.array_equal(p1.times, p2.times)


def test_path_streams_are_independent_per_index():
    model = model_1d()
    cfg = SimConfig(horizon=0.4, eps=5e-3, seed=7)
    p0 = simulate_path(model, [0.0], cfg, path_index=0)
    p1 = simulate_path(model, [0.0], cfg, path_index=1)
    assert p0.n_events != p1.n_events or not np.array_equal(p0.times, p1.times)


def test_replay_check_small_defect():
    model = model_2d()
    cfg = SimConfig(horizon=0.4, eps=5e-3, seed=314)
    ens = simulate_ensemble(model, [0.1, -0.2], cfg, 10)
    assert max(replay_check(model, p) for p in ens.paths) <= 1e-10


def test_large_stream_states_do_not_overflow():
    # regression: uint64 stream states >= 2**63 used to overflow at the
    # python/kernel boundary
    model = model_2d()
    for seed in [314, 2718, 99991]:
        ens = simulate_ensemble(
            model, [0.1, -0.2], SimConfig(horizon=0.3, eps=5e-3, seed=seed), 5
        )
        assert ens.n_paths == 5


def test_summaries_match_recorded_paths():
    model = model_2d()
    cfg = SimConfig(horizon=0.2, eps=5e-3, seed=42)
    ts = [0.05, 0.1, 0.2]
    summ = simulate_summaries(model, [0.1, -0.2], cfg, 6, t_checks=ts)
    for i in range(6):
        p = simulate_path(model, [0.1, -0.2], cfg, path_index=i)
        for k, t in enumerate(ts):
            assert np.max(np.abs(p.state_at(t) - summ.states[i, k])) <= 1e-10


def test_truncation_error_bound_monotone_in_eps():
    model = model_1d()
    bounds = [truncation_error_bound(model, e) for e in [1e-2, 1e-3, 1e-4]]
    assert all(b > 0.0 for b in bounds)
    assert bounds[0] > bounds[1] > bounds[2]


def test_events_within_horizon_and_sorted():
    model = model_1d()
    p = simulate_path(model, [0.0], SimConfig(horizon=0.5, eps=1e-2, seed=5))
    assert np.all(np.diff(p.times) >= 0.0)
    assert p.times.size == 0 or p.times[-1] <= 0.5
    assert p.state_at(0.0) == pytest.approx(0.0)


def test_sde_coefficient_checks_growth():
    model = model_1d()
    g, lip, _ = sde_coefficient_checks(model, [0.0], [0.0])
    assert abs(g - model.sigma.mass) <= 1e-6
    assert lip <= 1e-12  # constant field: no state dependence


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(horizon=0.0, eps=1e-3, seed=0)
    with pytest.raises(ValueError):
        SimConfig(horizon=1.0, eps=0.0, seed=0)


def test_nonsymmetric_measure_warns_and_simulates():
    model = OslModel(
        field=make_constant(np.eye(1)),
        sigma=discrete([[1.0], [-1.0]], [1.0, 0.5]),
    )
    with pytest.warns(UserWarning):
        p = simulate_path(model, [0.0], SimConfig(horizon=0.2, eps=5e-3, seed=9))
    assert replay_check(model, p) <= 1e-10
