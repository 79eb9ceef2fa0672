"""Unit tests for path functionals and ensemble statistics."""

import math

import numpy as np
import pytest

from oslsim import (
    OslModel,
    SimConfig,
    discrete,
    empirical_cf,
    empirical_moment,
    exit_time_moment_check,
    first_exit_time,
    make_constant,
    max_process,
    p_variation,
    simulate_ensemble,
    simulate_path,
    tail_report,
)
from oslsim.path_stats import path_jumps, wilson_interval


def model_1d():
    return OslModel(
        field=make_constant(np.eye(1)),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )


@pytest.fixture(scope="module")
def ens():
    return simulate_ensemble(
        model_1d(), [0.0], SimConfig(horizon=0.5, eps=5e-3, seed=77), 400
    )


def sample_path():
    return simulate_path(model_1d(), [0.0], SimConfig(horizon=0.5, eps=5e-3, seed=3))


def test_max_process_monotone_and_dominates_state():
    p = sample_path()
    prev = 0.0
    for t in np.linspace(0.0, 0.5, 11):
        m = max_process(p, t)
        assert m >= prev - 1e-15
        assert m >= float(np.linalg.norm(p.state_at(t) - p.x0)) - 1e-15
        prev = m
    with pytest.raises(ValueError):
        max_process(p, 0.6)


def test_first_exit_time_consistent_with_max_process():
    p = sample_path()
    R = 0.5 * max_process(p, 0.5)
    tau = first_exit_time(p, R)
    if math.isfinite(tau):
        assert max_process(p, tau) > R
        before = tau - 1e-12
        if before > 0:
            assert max_process(p, before) <= R + 1e-12
    with pytest.raises(ValueError):
        first_exit_time(p, 0.0)


def test_p_variation_jump_sum_equals_power_sum():
    p = sample_path()
    jumps = np.linalg.norm(path_jumps(p), axis=1)
    for q in (0.7, 1.3, 2.0):
        assert p_variation(p, q, "jump_sum") == pytest.approx(float(np.sum(jumps**q)))
    with pytest.raises(ValueError):
        p_variation(p, 0.0)
    with pytest.raises(ValueError):
        p_variation(p, 1.0, mode="nope")


def test_p_variation_dyadic_curve_monotone():
    p = sample_path()
    curve = p_variation(p, 1.0, "dyadic", max_level=8)
    assert len(curve) == 8
    # refining a partition can only increase total variation (p = 1)
    assert all(b >= a - 1e-12 for a, b in zip(curve, curve[1:]))


def test_wilson_interval_endpoints():
    c0, h0 = wilson_interval(0, 100)
    assert c0 - h0 <= 0.0 + 1e-12 and c0 > 0.0
    c1, h1 = wilson_interval(100, 100)
    assert c1 + h1 >= 1.0 - 1e-12 and c1 < 1.0
    assert wilson_interval(0, 0) == (0.5, 0.5)


def test_tail_report_probs_decreasing(ens):
    rep = tail_report(ens, 0.4, [0.2, 0.5, 1.0, 2.0])
    assert np.all(np.diff(rep.probs) <= 0.0)
    assert np.all(rep.ci_half > 0.0)
    assert rep.fitted_slope < 0.0


def test_empirical_cf_basics(ens):
    re0, im0, se0 = empirical_cf(ens, 0.0, [1.0])
    assert (re0, im0, se0) == (1.0, 0.0, 0.0)
    re, im, se = empirical_cf(ens, 0.4, [1.0])
    assert re**2 + im**2 <= 1.0 + 1e-12
    assert abs(im) <= 4.0 * se + 1e-3  # symmetric model: imaginary part is noise
    assert se > 0.0


def test_empirical_moment_flags(ens):
    est, ci, stable = empirical_moment(ens, 0.5, 0.4)
    assert est > 0.0 and ci > 0.0
    assert stable  # p = 0.5 sits below the tail index 1
    with pytest.raises(ValueError):
        empirical_moment(ens, -1.0, 0.4)


def test_exit_time_moment_report(ens):
    rep = exit_time_moment_check(ens, 0.5, a=1.0)
    assert rep.mean_exit > 0.0
    assert 0.0 <= rep.censored_fraction <= 1.0
    assert rep.lower_shape == pytest.approx(0.5)
