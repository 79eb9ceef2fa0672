"""Matrix powers r^E of symmetric matrices via eigendecomposition.

Also provides the quantitative checks used by the verification suite:
spectral-norm identities of the power map, the exponential perturbation
identity residual, and the Hölder-type bound on differences of powers.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import expm

from .errors import QuadratureError

SYM_TOL = 1e-12


class SymMatrix:
    """A real symmetric matrix, validated on construction.

    Entries are symmetrized (averaged with the transpose) after passing the
    1e-12 absolute symmetry check, so downstream eigensolves see an exactly
    symmetric array.
    """

    __slots__ = ("entries",)

    def __init__(self, entries):
        m = np.asarray(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        defect = np.max(np.abs(m - m.T)) if m.size else 0.0
        # scale-aware so that extreme matrix powers (entries >> 1) round-trip
        allowed = SYM_TOL * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
        if defect > allowed:
            raise ValueError(f"matrix is not symmetric (defect {defect:.3e} > {allowed:.3e})")
        self.entries = 0.5 * (m + m.T)

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        arr = self.entries
        if dtype is not None:
            arr = arr.astype(dtype)
        return np.array(arr) if copy else arr

    def __repr__(self):
        return f"SymMatrix({self.entries.tolist()!r})"


def as_sym(E):
    """Coerce an array-like (or SymMatrix) to SymMatrix."""
    return E if isinstance(E, SymMatrix) else SymMatrix(E)


@dataclass(frozen=True)
class EigenData:
    """Eigendecomposition E = O diag(eigenvalues) O^T, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def power(self, r):
        """r^E = O diag(r^{a_i}) O^T for r > 0."""
        if r <= 0.0:
            raise ValueError(f"matrix power requires r > 0, got {r}")
        O = self.eigenvectors
        return SymMatrix((O * np.power(r, self.eigenvalues)) @ O.T)

    def apply_power(self, r, v):
        """r^E v without forming the matrix."""
        if r <= 0.0:
            raise ValueError(f"matrix power requires r > 0, got {r}")
        O = self.eigenvectors
        return O @ (np.power(r, self.eigenvalues) * (O.T @ v))


def eigen_data(E):
    E = as_sym(E)
    w, v = np.linalg.eigh(E.entries)
    return EigenData(eigenvalues=w, eigenvectors=v)


def mat_pow(E, r):
    """r^E for symmetric E and r > 0."""
    return eigen_data(E).power(r)


def eigen_bounds(E):
    """(smallest, largest) eigenvalue of symmetric E."""
    w = np.linalg.eigvalsh(as_sym(E).entries)
    return float(w[0]), float(w[-1])


def spectral_norm(M):
    return float(np.linalg.norm(np.asarray(M, dtype=float), 2))


def power_norm_check(E, r):
    """Measured spectral norm of r^E versus the eigenvalue bound.

    Returns (measured, bound) with bound = r^lambda for r <= 1 and r^Lambda
    for r > 1; the two agree up to rounding for symmetric E.
    """
    if r <= 0.0:
        raise ValueError(f"requires r > 0, got {r}")
    lam, Lam = eigen_bounds(E)
    measured = spectral_norm(mat_pow(E, r).entries)
    bound = r**lam if r <= 1.0 else r**Lam
    return measured, float(bound)


def van_loan_residual(A, B, t, quad_tol):
    """Frobenius residual of the exponential perturbation identity.

    Computes ||e^{(A+B)t} - e^{At} - int_0^t e^{A(t-s)} B e^{(A+B)s} ds||_F
    with the integral done by adaptive vectorized quadrature at absolute
    tolerance quad_tol.  Raises QuadratureError (carrying the best value) if
    the quadrature reports an error above 10 * quad_tol.
    """
    if quad_tol <= 0.0:
        raise ValueError("quad_tol must be positive")
    if t <= 0.0:
        raise ValueError("t must be positive")
    A = as_sym(A).entries
    B = as_sym(B).entries

    def integrand(s):
        return expm(A * (t - s)) @ B @ expm((A + B) * s)

    integral, quad_err = quad_vec(integrand, 0.0, t, epsabs=quad_tol, epsrel=0.0)
    residual = float(np.linalg.norm(expm((A + B) * t) - expm(A * t) - integral, "fro"))
    if quad_err > 10.0 * quad_tol:
        raise QuadratureError(
            f"perturbation-identity quadrature achieved {quad_err:.3e} > requested {quad_tol:.3e}",
            best=residual,
            achieved=quad_err,
        )
    return residual


def power_diff_check(E1, E2, r, a, delta):
    """Difference of powers against the Hölder-type shape.

    Returns (lhs, rhs_shape) with lhs = ||r^{E1} - r^{E2}|| (spectral) and
    rhs_shape = ||E1 - E2|| * r^{a - delta}.  The caller fits the constant in
    lhs <= C * rhs_shape over a grid of r in (0, 1).
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"requires r in (0, 1), got {r}")
    if not 0.0 < delta < a - 0.5:
        raise ValueError(f"requires 0 < delta < a - 1/2, got delta={delta}, a={a}")
    E1 = as_sym(E1)
    E2 = as_sym(E2)
    lhs = spectral_norm(mat_pow(E1, r).entries - mat_pow(E2, r).entries)
    rhs_shape = spectral_norm(E1.entries - E2.entries) * r ** (a - delta)
    return lhs, float(rhs_shape)
