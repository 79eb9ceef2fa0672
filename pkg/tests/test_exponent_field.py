"""Unit tests for exponent fields and the admissibility validator."""

import numpy as np
import pytest

from oslsim import (
    ExponentField,
    constant_scalar_field,
    linear_blend_field,
    make_constant,
    make_interpolated,
    make_stable_like,
    sin_alpha_field,
    validate_admissible,
)
from oslsim.errors import AdmissibilityError


def test_constant_field_reads_bounds_from_spectrum():
    f = make_constant([[2.0, 1.0], [1.0, 2.0]])
    assert abs(f.a - 1.0) <= 1e-12
    assert abs(f.b - 3.0) <= 1e-12
    assert f.lip == 0.0
    assert np.array_equal(f([5.0, -5.0]), f([0.0, 0.0]))


def test_constant_field_rejects_small_eigenvalue():
    with pytest.raises(AdmissibilityError):
        make_constant([[0.4]])
    with pytest.raises(AdmissibilityError):
        make_constant([[0.5]])  # the bound is strict


def test_stable_like_field_maps_index_range():
    alpha = sin_alpha_field(1.2, 0.3)  # range [0.9, 1.5]
    f = make_stable_like(alpha, dim=2)
    assert abs(f.a - 1.0 / 1.5) <= 1e-12
    assert abs(f.b - 1.0 / 0.9) <= 1e-12
    E = f([np.pi / 2.0, 0.0])  # alpha = 1.5 there
    assert np.allclose(E, np.eye(2) / 1.5)


def test_stable_like_rejects_bad_index_range():
    with pytest.raises(AdmissibilityError):
        make_stable_like(sin_alpha_field(1.0, 1.0))  # range hits 0 and 2
    with pytest.raises(TypeError):
        make_stable_like(1.2)  # must be a ScalarField


def test_stable_like_constant_index_collapses_to_constant_field():
    f = make_stable_like(constant_scalar_field(1.25), dim=1)
    assert f.lip == 0.0
    assert np.allclose(f([3.0]), np.eye(1) / 1.25)


def test_interpolated_field_blend():
    E_low = np.eye(2) * 0.8
    E_high = np.array([[1.5, 0.2], [0.2, 1.1]])
    f = make_interpolated(E_low, E_high, linear_blend_field([1.0, 0.0], 0.5))
    # s(0) = 0.5: the midpoint matrix
    assert np.allclose(f([0.0, 0.0]), 0.5 * (E_low + E_high))
    # blend clips outside [0, 1]
    assert np.allclose(f([10.0, 0.0]), E_high)
    assert np.allclose(f([-10.0, 0.0]), E_low)


def test_interpolated_validation():
    with pytest.raises(ValueError):
        make_interpolated(np.eye(2), np.eye(3), linear_blend_field([1.0, 0.0], 0.0))
    with pytest.raises(TypeError):
        make_interpolated(np.eye(2), np.eye(2), 0.5)
    with pytest.raises(AdmissibilityError):
        make_interpolated(np.eye(2) * 0.3, np.eye(2), linear_blend_field([1.0, 0.0], 0.0))


def test_validate_admissible_passes_shipped_fields():
    f = make_stable_like(sin_alpha_field(1.2, 0.3), dim=2)
    report = validate_admissible(f, [[-np.pi, np.pi]] * 2, grid_n=9, pair_m=200)
    assert report.ok
    assert report.min_lambda >= f.a - 1e-9
    assert report.max_Lambda <= f.b + 1e-9


def test_validate_admissible_flags_false_declarations():
    # eigenvalue 0.4 violates both the declared bound logic and the 1/2 floor
    bad = ExponentField(dim=1, evaluator=lambda x: np.array([[0.4]]), a=0.4, lip=0.0)
    report = validate_admissible(bad, [[-1.0, 1.0]], grid_n=5, pair_m=10)
    assert not report.ok
    assert any("1/2" in v for v in report.violations)


def test_validate_admissible_flags_understated_lipschitz():
    f = make_interpolated(
        np.eye(1) * 0.8, np.eye(1) * 1.6, linear_blend_field([1.0], 0.5)
    )
    lying = ExponentField(dim=1, evaluator=f.evaluator, a=f.a, b=f.b, lip=0.0)
    report = validate_admissible(lying, [[-1.0, 1.0]], grid_n=5, pair_m=200)
    assert not report.ok


def test_validate_admissible_argument_checks():
    f = make_constant([[1.0]])
    with pytest.raises(ValueError):
        validate_admissible(f, [[-1.0, 1.0]], grid_n=1)
    with pytest.raises(ValueError):
        validate_admissible(f, [[-1.0, 1.0], [0.0, 1.0]])  # box/dim mismatch
