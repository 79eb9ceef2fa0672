"""Generalized polar coordinates induced by the radial action of r^E.

Every nonzero xi factors uniquely as xi = tau^E ell with tau > 0 and ell on
the unit sphere, because r -> ||r^{-E} xi|| is strictly decreasing when all
eigenvalues of E are positive.  tau is found by bracketing + bisection.
"""

from dataclasses import dataclass

import numpy as np

from .matexp import as_sym, eigen_data

_DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class PolarDecomposition:
    tau: float
    ell: np.ndarray


def _decompose_from_eigen(ed, xi, tol):
    nrm = float(np.linalg.norm(xi))
    if nrm == 0.0:
        raise ValueError("polar decomposition requires a nonzero vector")
    evals = ed.eigenvalues
    if evals[0] <= 0.0:
        raise ValueError("polar decomposition requires positive eigenvalues")
    z = ed.eigenvectors.T @ xi  # coordinates in the eigenbasis
    z2 = z * z

    def h(tau):
        # ||tau^{-E} xi||^2 - 1, strictly decreasing in tau
        return float(z2 @ np.power(tau, -2.0 * evals)) - 1.0

    lam, Lam = float(evals[0]), float(evals[-1])
    b1 = nrm ** (1.0 / Lam)
    b2 = nrm ** (1.0 / lam)
    lo, hi = (min(b1, b2) * 0.5, max(b1, b2) * 2.0)
    # widen if rounding put the root outside the padded bracket
    for _ in range(200):
        if h(lo) > 0.0:
            break
        lo *= 0.5
        if lo < 1e-30:
            raise ValueError("bracket search failed (tau below 1e-30)")
    for _ in range(200):
        if h(hi) < 0.0:
            break
        hi *= 2.0
        if hi > 1e30:
            raise ValueError("bracket search failed (tau above 1e30)")
    while (hi - lo) > tol * lo:
        mid = 0.5 * (lo + hi)
        if h(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    tau = 0.5 * (lo + hi)
    ell = ed.eigenvectors @ (np.power(tau, -evals) * z)
    ell = ell / np.linalg.norm(ell)
    return PolarDecomposition(tau=tau, ell=ell)


def polar_decompose(E, xi, tol=_DEFAULT_TOL):
    """Unique (tau, ell) with mat_pow(E, tau) ell = xi, ||ell|| = 1."""
    xi = np.asarray(xi, dtype=float)
    return _decompose_from_eigen(eigen_data(as_sym(E)), xi, tol)


def polar_properties_check(E, xi, r):
    """Relative deviations from the algebraic identities of the decomposition.

    Keys: reflect_tau (tau(-xi) vs tau(xi)), reflect_ell (ell(-xi) vs
    -ell(xi)), scale_tau (tau(r^E xi) vs r tau(xi)), scale_ell
    (ell(r^E xi) vs ell(xi)).
    """
    if r <= 0.0:
        raise ValueError("r must be positive")
    xi = np.asarray(xi, dtype=float)
    ed = eigen_data(as_sym(E))
    base = _decompose_from_eigen(ed, xi, _DEFAULT_TOL)
    neg = _decompose_from_eigen(ed, -xi, _DEFAULT_TOL)
    scaled = _decompose_from_eigen(ed, ed.apply_power(r, xi), _DEFAULT_TOL)
    return {
        "reflect_tau": abs(neg.tau - base.tau) / base.tau,
        "reflect_ell": float(np.max(np.abs(neg.ell + base.ell))),
        "scale_tau": abs(scaled.tau - r * base.tau) / (r * base.tau),
        "scale_ell": float(np.max(np.abs(scaled.ell - base.ell))),
    }


def polar_growth_check(E, xi):
    """(tau, lower_shape, upper_shape) for the two-sided growth comparison.

    The shapes are ||xi||^{1/lambda} and ||xi||^{1/Lambda}, ordered so that
    lower_shape <= tau <= upper_shape holds up to regime constants: for
    ||xi|| >= 1 the lower shape uses 1/Lambda, for ||xi|| < 1 it uses
    1/lambda.
    """
    xi = np.asarray(xi, dtype=float)
    ed = eigen_data(as_sym(E))
    dec = _decompose_from_eigen(ed, xi, _DEFAULT_TOL)
    lam, Lam = float(ed.eigenvalues[0]), float(ed.eigenvalues[-1])
    nrm = float(np.linalg.norm(xi))
    if nrm >= 1.0:
        lower, upper = nrm ** (1.0 / Lam), nrm ** (1.0 / lam)
    else:
        lower, upper = nrm ** (1.0 / lam), nrm ** (1.0 / Lam)
    return dec.tau, lower, upper
