"""Unit tests for symmetric matrix powers and their quantitative checks."""

import numpy as np
import pytest

from oslsim import (
    SymMatrix,
    eigen_bounds,
    eigen_data,
    mat_pow,
    power_diff_check,
    power_norm_check,
    van_loan_residual,
)


def series_power(E, r, terms=60):
    """Independent oracle: r^E = exp(ln(r) E) by scaled Taylor series.

    Uses no eigendecomposition: scale ln(r) E by 2^-s, sum the series, square
    s times.
    """
    M = np.log(r) * np.asarray(E, dtype=float)
    nrm = np.linalg.norm(M, np.inf)
    s = max(0, int(np.ceil(np.log2(max(nrm, 1e-300)))) + 1)
    A = M / (2.0**s)
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, terms):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


E_CASES = [
    np.array([[1.0]]),
    np.array([[0.8]]),
    np.array([[2.0, 1.0], [1.0, 2.0]]),
    np.array([[0.9, 0.2], [0.2, 1.4]]),
    np.array([[1.1, 0.3, 0.0], [0.3, 2.0, -0.1], [0.0, -0.1, 0.7]]),
]


@pytest.mark.parametrize("E", E_CASES)
@pytest.mark.parametrize("r", [1e-3, 0.37, 1.0, 2.5, 1e3])
def test_mat_pow_matches_series_oracle(E, r):
    got = mat_pow(E, r).entries
    want = series_power(E, r)
    scale = max(1.0, np.linalg.norm(want, 2))
    assert np.max(np.abs(got - want)) <= 1e-11 * scale


def test_eigen_bounds_hand_2x2():
    # characteristic polynomial of [[2,1],[1,2]] is (t-1)(t-3)
    lo, hi = eigen_bounds([[2.0, 1.0], [1.0, 2.0]])
    assert abs(lo - 1.0) <= 1e-12
    assert abs(hi - 3.0) <= 1e-12


def test_group_law_and_inverse():
    E = np.array([[1.2, 0.4], [0.4, 0.8]])
    ed = eigen_data(E)
    for r, s in [(0.3, 2.0), (5.0, 0.1), (7.0, 11.0)]:
        Pr, Ps, Prs = ed.power(r).entries, ed.power(s).entries, ed.power(r * s).entries
        scale = np.linalg.norm(Pr, 2) * np.linalg.norm(Ps, 2)
        assert np.linalg.norm(Pr @ Ps - Prs, 2) <= 1e-12 * scale
        Pinv = ed.power(1.0 / r).entries
        scale = np.linalg.norm(Pr, 2) * np.linalg.norm(Pinv, 2)
        assert np.linalg.norm(Pr @ Pinv - np.eye(2), 2) <= 1e-12 * scale


def test_apply_power_matches_full_matrix():
    E = np.array([[1.0, 0.3], [0.3, 1.5]])
    ed = eigen_data(E)
    v = np.array([0.7, -1.2])
    for r in [0.2, 1.0, 9.0]:
        assert np.allclose(ed.apply_power(r, v), ed.power(r).entries @ v, rtol=1e-13)


def test_power_norm_check_identity():
    E = np.array([[0.9, 0.2], [0.2, 1.4]])
    for r in [1e-4, 0.5, 2.0, 1e4]:
        measured, bound = power_norm_check(E, r)
        assert abs(measured - bound) <= 1e-9 * bound


def test_van_loan_residual_small():
    A = np.array([[0.7, 0.1], [0.1, 1.1]])
    B = np.array([[0.05, -0.02], [-0.02, 0.03]])
    assert van_loan_residual(A, B, 1.0, 1e-8) <= 1e-7


def test_power_diff_check_shape_and_validation():
    E1 = np.array([[1.0, 0.0], [0.0, 1.2]])
    E2 = np.array([[1.05, 0.02], [0.02, 1.2]])
    lhs, rhs = power_diff_check(E1, E2, 0.3, a=1.0, delta=0.2)
    assert lhs >= 0.0 and rhs > 0.0
    with pytest.raises(ValueError):
        power_diff_check(E1, E2, 1.5, a=1.0, delta=0.2)  # r outside (0, 1)
    with pytest.raises(ValueError):
        power_diff_check(E1, E2, 0.3, a=1.0, delta=0.6)  # delta >= a - 1/2


def test_sym_matrix_validation():
    with pytest.raises(ValueError):
        SymMatrix([[0.0, 1.0], [0.0, 0.0]])  # not symmetric
    with pytest.raises(ValueError):
        SymMatrix([[1.0, 2.0, 3.0]])  # not square
    with pytest.raises(ValueError):
        SymMatrix([[np.nan]])  # not finite
    m = SymMatrix([[1.0, 2.0], [2.0 + 1e-14, 1.0]])  # tiny defect is symmetrized
    assert np.array_equal(m.entries, m.entries.T)


def test_power_requires_positive_r():
    ed = eigen_data([[1.0]])
    with pytest.raises(ValueError):
        ed.power(0.0)
    with pytest.raises(ValueError):
        ed.power(-1.0)
