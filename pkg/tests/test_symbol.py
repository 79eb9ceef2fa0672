"""Unit tests for symbol evaluation, Lévy integration and the generator.

The frozen radial reference values below were produced by the independent
oracle in ``_radial_oracle.py`` (phase-substitution quadrature plus an
alternating half-period series — no machinery shared with the package
kernels).  Regenerate with::

    python -c "import sys; sys.path.insert(0, 'tests'); \
from _radial_oracle import ref_cos; import numpy as np; \
print(ref_cos(np.array([1.7]), np.array([1.0])))"
"""

import math

import numpy as np
import pytest

from oslsim import (
    OslModel,
    QuadSpec,
    apply_generator,
    bg_indices_infinity,
    bg_indices_zero,
    discrete,
    harmonic_cos,
    harmonic_sin,
    levy_integrate,
    make_constant,
    make_stable_like,
    scaling_residual,
    sin_alpha_field,
    symbol_bounds,
    symbol_general,
    symbol_symmetric,
    symbol_symmetric_with_error,
    uniform,
)
from oslsim import _kernels
from oslsim.errors import ContractError

EULER_GAMMA = 0.5772156649015329

# (phase coefficients p, exponents a, reference value of
#  int_0^inf (1 - cos(sum_j p_j r^{a_j})) / r^2 dr)
RADIAL_REFERENCE = [
    ([1.7], [1.0], 2.6703537555512606),
    ([0.9, 0.4], [0.8, 1.6], 2.148392403951779),
    ([1.2, -0.5], [0.7, 2.1], 2.0119006689518573),
    ([0.83, -1.995], [0.644, 2.693], 2.0327511344009679),
    ([1.0831, -0.0638], [1.1728, 1.4134], 1.4849680542546124),
    ([-0.37, -1.82], [0.73, 1.52], 2.5528933963022697),
    ([0.5, 0.8, -0.9], [0.6, 1.3, 2.4], 1.5325297010361121),
]


@pytest.mark.parametrize("p,a,ref", RADIAL_REFERENCE)
def test_radial_kernel_matches_frozen_oracle(p, a, ref):
    val, err = _kernels.radial_cos_integral(
        np.array(p, dtype=float), np.array(a, dtype=float), 1e-10 * abs(ref), 60000
    )
    assert abs(val - ref) <= 5e-8 * abs(ref)
    assert err <= 1e-8 * abs(ref)


def two_atom_model():
    return OslModel(
        field=make_constant(np.eye(1)),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )


def test_symbol_closed_form_pi_xi():
    model = two_atom_model()
    for xi in [0.01, 0.9, 7.0, 300.0]:
        q, err = symbol_symmetric_with_error(model, [0.0], [xi])
        assert abs(q - math.pi * xi) <= 5e-8 * math.pi * xi
        assert err <= 1e-7 * math.pi * xi


def test_symbol_zero_frequency_is_zero():
    model = two_atom_model()
    assert symbol_symmetric(model, [0.0], [0.0]) == 0.0
    assert symbol_general(model, [0.0], [0.0, ]) == 0.0


def test_symbol_evenness_and_positivity():
    model = OslModel(
        field=make_stable_like(sin_alpha_field(1.2, 0.3), dim=2),
        sigma=uniform(2, 2.0),
    )
    rng = np.random.default_rng(3)
    for _ in range(5):
        x = rng.uniform(-2, 2, 2)
        xi = rng.standard_normal(2)
        q1 = symbol_symmetric(model, x, xi)
        q2 = symbol_symmetric(model, x, -xi)
        assert q1 > 0.0
        assert abs(q1 - q2) <= 1e-9 * q1


def test_isotropic_symbol_direction_independent():
    model = OslModel(field=make_constant(np.eye(2)), sigma=uniform(2, 2.0))
    vals = [
        symbol_symmetric(model, [0.0, 0.0], [np.cos(t), np.sin(t)])
        for t in np.linspace(0.0, 2.0 * np.pi, 7)
    ]
    assert (max(vals) - min(vals)) <= 1e-7 * max(vals)


def test_scaling_residual_small():
    model = OslModel(
        field=make_stable_like(sin_alpha_field(1.2, 0.3), dim=1),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )
    for t in [0.2, 3.0, 40.0]:
        assert scaling_residual(model, [0.4], [1.3], t) <= 1e-7


def test_symbol_general_one_sided_closed_form():
    # one-sided unit atom, a = 1, frequency p:
    #   Re = pi p / 2,  Im = -p (1 - gamma - ln p)
    model = OslModel(field=make_constant(np.eye(1)), sigma=discrete([[1.0]], [1.0]))
    p = 1.5
    z = symbol_general(model, [0.0], [p])
    assert abs(z.real - 0.5 * math.pi * p) <= 1e-7
    assert abs(z.imag + p * (1.0 - EULER_GAMMA - math.log(p))) <= 1e-7


def test_symbol_symmetric_rejects_one_sided_measure():
    model = OslModel(field=make_constant(np.eye(1)), sigma=discrete([[1.0]], [1.0]))
    with pytest.raises(ContractError):
        symbol_symmetric(model, [0.0], [1.0])


def test_levy_integrate_closed_forms():
    model = two_atom_model()
    # indicator of ||y|| > c integrates to mass / c
    c = 0.7
    v = levy_integrate(model, [0.0], lambda y: 1.0 if np.linalg.norm(y) > c else 0.0)
    assert abs(v - 2.0 / c) <= 1e-4
    # min(1, ||y||^2): each direction contributes 2, total 2 * mass
    v2 = levy_integrate(model, [0.0], lambda y: min(1.0, float(y @ y)))
    assert abs(v2 - 4.0) <= 1e-5


def test_generator_matches_symbol_on_harmonics():
    model = two_atom_model()
    xi, x0, x = 2.0, 0.3, 0.7
    q = math.pi * xi
    au_cos = apply_generator(model, harmonic_cos([xi], [x0]), [x])
    au_sin = apply_generator(model, harmonic_sin([xi], [x0]), [x])
    assert abs(au_cos + q * math.cos(xi * (x - x0))) <= 1e-6
    assert abs(au_sin + q * math.sin(xi * (x - x0))) <= 1e-6


def test_symbol_bounds_bracket():
    model = OslModel(
        field=make_constant([[1.0, 0.0], [0.0, 2.0]]),
        sigma=uniform(2, 2.0),
    )
    lo1, hi1 = symbol_bounds(model, [0.0, 0.0], [0.3, 0.1])
    assert lo1 <= hi1
    lo2, hi2 = symbol_bounds(model, [0.0, 0.0], [30.0, 10.0])
    assert lo2 <= hi2


def test_bg_indices_closed_forms():
    model = OslModel(
        field=make_stable_like(sin_alpha_field(1.2, 0.3), dim=1),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )
    # at x with sin(x) = 0: alpha = 1.2, E = (1/1.2) Id, beta = delta = 1.2
    beta, delta = bg_indices_infinity(model, [0.0])
    assert abs(beta - 1.2) <= 1e-12
    assert abs(delta - 1.2) <= 1e-12
    # index at zero: inf over the box of 1/Lambda(x) = min alpha = 0.9
    bz = bg_indices_zero(model, [[-math.pi, math.pi]], grid_n=101)
    assert abs(bz - 0.9) <= 1e-3


def test_bg_indices_zero_requires_bounded_field():
    model = OslModel(
        field=make_constant(np.eye(1)),
        sigma=discrete([[1.0], [-1.0]], [1.0, 1.0]),
    )
    # constant fields carry b, so drop it to exercise the contract
    from dataclasses import replace

    unbounded = OslModel(field=replace(model.field, b=None), sigma=model.sigma)
    with pytest.raises(ContractError):
        bg_indices_zero(unbounded, [[-1.0, 1.0]])


def test_quadspec_validation():
    with pytest.raises(ValueError):
        QuadSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(R_max=0.0)
    with pytest.raises(ValueError):
        QuadSpec(max_subdivisions=0)
