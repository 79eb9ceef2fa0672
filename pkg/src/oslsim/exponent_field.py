"""State-dependent exponent fields x -> E(x) with declared admissibility data.

A field carries its declared constants (lower eigenvalue bound ``a``, optional
upper bound ``b``, Lipschitz constant ``lip``) as authoritative metadata;
``validate_admissible`` probes them numerically on grids and random pairs.

The three shipped constructors — constant, stable-like (scalar multiple of the
identity driven by a scalar index field), and interpolated (blend of two fixed
matrices) — cover every test and experiment.  Fields built from the shipped
scalar kinds also carry a kernel encoding consumed by the compiled simulator.
"""

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import AdmissibilityError
from .matexp import SYM_TOL, as_sym, eigen_bounds, spectral_norm

_A_STRICT = 0.5 + 1e-12  # eigenvalue bounds must exceed 1/2 strictly


@dataclass(frozen=True)
class KernelFieldSpec:
    """Flat encoding of a shipped field for the compiled path kernel."""

    kind: int
    fA: np.ndarray
    fB: np.ndarray
    fvec: np.ndarray
    fsc: np.ndarray


@dataclass(frozen=True)
class ScalarField:
    """A scalar function of the state with declared range and Lipschitz constant."""

    fn: Callable[[np.ndarray], float]
    lo: float
    hi: float
    lip: float
    params: Optional[dict] = None

    def __call__(self, x):
        return float(self.fn(np.asarray(x, dtype=float)))


def sin_alpha_field(base, amp):
    """Index field alpha(x) = base + amp * sin(x[0]); range [base-|amp|, base+|amp|]."""
    amp = float(amp)
    base = float(base)
    return ScalarField(
        fn=lambda x: base + amp * np.sin(x[0]),
        lo=base - abs(amp),
        hi=base + abs(amp),
        lip=abs(amp),
        params={"kind": "sin", "base": base, "amp": amp},
    )


def constant_scalar_field(value):
    value = float(value)
    return ScalarField(fn=lambda x: value, lo=value, hi=value, lip=0.0)


def linear_blend_field(w, c0):
    """Blend s(x) = clip(<w, x> + c0, 0, 1); Lipschitz constant ||w||."""
    w = np.asarray(w, dtype=float)
    c0 = float(c0)
    return ScalarField(
        fn=lambda x: np.clip(float(w @ x) + c0, 0.0, 1.0),
        lo=0.0,
        hi=1.0,
        lip=float(np.linalg.norm(w)),
        params={"kind": "linear", "w": w, "c0": c0},
    )


@dataclass(frozen=True)
class ExponentField:
    """x -> E(x), symmetric with eigenvalues in [a, b] and Lipschitz constant lip."""

    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    a: float
    lip: float
    b: Optional[float] = None
    kernel_spec: Optional[KernelFieldSpec] = dc_field(default=None, compare=False)

    def __call__(self, x):
        """E(x) as a dense symmetric ndarray."""
        return self.evaluator(np.asarray(x, dtype=float))


def _check_lower(a, what):
    if a <= _A_STRICT:
        raise AdmissibilityError(
            f"{what}: smallest eigenvalue bound {a} must exceed 1/2 strictly"
        )


def make_constant(E0):
    """Field that is E0 everywhere; bounds read off the spectrum, lip = 0."""
    E0 = as_sym(E0)
    lam, Lam = eigen_bounds(E0)
    _check_lower(lam, "constant field")
    d = E0.dim
    mat = E0.entries
    w, v = np.linalg.eigh(mat)
    spec = KernelFieldSpec(
        kind=_kernels.FIELD_CONSTANT,
        fA=np.ascontiguousarray(v),
        fB=np.zeros((d, d)),
        fvec=np.ascontiguousarray(w),
        fsc=np.zeros(2),
    )
    return ExponentField(
        dim=d, evaluator=lambda x: mat, a=lam, b=Lam, lip=0.0, kernel_spec=spec
    )


def make_stable_like(alpha, dim=1):
    """Field E(x) = (1/alpha(x)) * Id from a scalar index field with range in (0, 2)."""
    if not isinstance(alpha, ScalarField):
        raise TypeError("alpha must be a ScalarField with declared range and lip")
    if not (0.0 < alpha.lo <= alpha.hi < 2.0):
        raise AdmissibilityError(
            f"index range [{alpha.lo}, {alpha.hi}] must sit strictly inside (0, 2)"
        )
    a = 1.0 / alpha.hi
    b = 1.0 / alpha.lo
    _check_lower(a, "stable-like field")
    eye = np.eye(dim)

    def evaluator(x):
        return eye / alpha(x)

    spec = None
    if alpha.params is not None and alpha.params.get("kind") == "sin":
        spec = KernelFieldSpec(
            kind=_kernels.FIELD_STABLE_LIKE_SIN,
            fA=np.zeros((dim, dim)),
            fB=np.zeros((dim, dim)),
            fvec=np.zeros(dim + 1),
            fsc=np.array([alpha.params["base"], alpha.params["amp"]]),
        )
    elif alpha.lip == 0.0:
        return make_constant(eye / alpha(np.zeros(dim)))
    return ExponentField(
        dim=dim,
        evaluator=evaluator,
        a=a,
        b=b,
        lip=alpha.lip / alpha.lo**2,
        kernel_spec=spec,
    )


def make_interpolated(E_low, E_high, blend):
    """Field E(x) = (1 - s(x)) E_low + s(x) E_high for a blend s into [0, 1]."""
    E_low = as_sym(E_low)
    E_high = as_sym(E_high)
    if E_low.dim != E_high.dim:
        raise ValueError("endpoint matrices must share a dimension")
    if not isinstance(blend, ScalarField):
        raise TypeError("blend must be a ScalarField into [0, 1]")
    if blend.lo < -1e-12 or blend.hi > 1.0 + 1e-12:
        raise AdmissibilityError("blend range must sit inside [0, 1]")
    lam_lo, Lam_lo = eigen_bounds(E_low)
    lam_hi, Lam_hi = eigen_bounds(E_high)
    a = min(lam_lo, lam_hi)
    b = max(Lam_lo, Lam_hi)
    _check_lower(a, "interpolated field")
    d = E_low.dim
    ml, mh = E_low.entries, E_high.entries

    def evaluator(x):
        s = blend(x)
        return (1.0 - s) * ml + s * mh

    spec = None
    if blend.params is not None and blend.params.get("kind") == "linear":
        fvec = np.empty(d + 1)
        fvec[:d] = blend.params["w"]
        fvec[d] = blend.params["c0"]
        spec = KernelFieldSpec(
            kind=_kernels.FIELD_INTERPOLATED,
            fA=np.ascontiguousarray(ml),
            fB=np.ascontiguousarray(mh),
            fvec=fvec,
            fsc=np.zeros(2),
        )
    return ExponentField(
        dim=d,
        evaluator=evaluator,
        a=a,
        b=b,
        lip=blend.lip * spectral_norm(mh - ml),
        kernel_spec=spec,
    )


@dataclass(frozen=True)
class ValidationReport:
    """Numerical probe of the field invariants over a box."""

    max_symmetry_defect: float
    min_lambda: float
    max_Lambda: float
    max_lip_ratio: float
    violations: tuple

    @property
    def ok(self):
        return not self.violations


def _box_array(box, dim):
    box = np.asarray(box, dtype=float)
    if box.ndim == 1:
        box = np.tile(box, (dim, 1))
    if box.shape != (dim, 2):
        raise ValueError(f"box must have shape ({dim}, 2), got {box.shape}")
    return box


def validate_admissible(field, box, grid_n=20, pair_m=1000, rng_seed=0):
    """Probe symmetry, eigenvalue bounds and the Lipschitz ratio on a box.

    Violations are collected in the report, never raised.
    """
    if grid_n < 2 or pair_m < 1:
        raise ValueError("grid_n >= 2 and pair_m >= 1 required")
    box = _box_array(box, field.dim)
    axes = [np.linspace(lo, hi, grid_n) for lo, hi in box]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, field.dim)

    max_defect = 0.0
    min_lam = np.inf
    max_Lam = -np.inf
    for x in grid:
        E = np.asarray(field(x), dtype=float)
        max_defect = max(max_defect, float(np.max(np.abs(E - E.T))))
        w = np.linalg.eigvalsh(0.5 * (E + E.T))
        min_lam = min(min_lam, float(w[0]))
        max_Lam = max(max_Lam, float(w[-1]))

    rng = np.random.default_rng(rng_seed)
    lo = box[:, 0]
    span = box[:, 1] - box[:, 0]
    max_ratio = 0.0
    for _ in range(pair_m):
        x = lo + span * rng.random(field.dim)
        y = lo + span * rng.random(field.dim)
        dist = float(np.linalg.norm(x - y))
        if dist < 1e-12:
            continue
        diff = spectral_norm(np.asarray(field(x)) - np.asarray(field(y)))
        max_ratio = max(max_ratio, diff / dist)

    violations = []
    if max_defect > SYM_TOL:
        violations.append(f"symmetry: defect {max_defect:.3e} exceeds {SYM_TOL}")
    if min_lam < field.a - 1e-9:
        violations.append(f"eigenvalue bound: smallest eigenvalue {min_lam:.6g} below declared a = {field.a}")
    if min_lam <= 0.5:
        violations.append(f"eigenvalue bound: smallest eigenvalue {min_lam:.6g} not above 1/2")
    if field.b is not None and max_Lam > field.b + 1e-9:
        violations.append(f"eigenvalue bound: largest eigenvalue {max_Lam:.6g} above declared b = {field.b}")
    if max_ratio > field.lip * (1.0 + 1e-6) + 1e-12:
        violations.append(
            f"lipschitz: empirical ratio {max_ratio:.6g} exceeds declared {field.lip}"
        )
    return ValidationReport(
        max_symmetry_defect=max_defect,
        min_lambda=min_lam,
        max_Lambda=max_Lam,
        max_lip_ratio=max_ratio,
        violations=tuple(violations),
    )
