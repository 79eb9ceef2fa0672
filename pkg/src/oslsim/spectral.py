"""Finite measures on the unit sphere: integration, sampling, symmetrization.

Two kinds ship: ``discrete`` (weighted unit-vector atoms) and ``uniform``
(rotation-invariant with a given total mass).  Uniform integration is a
deterministic, tolerance-driven quadrature: exact two-point in d=1, composite
trapezoid in the angle for d=2 (spectrally accurate for smooth periodic
integrands), and a product rule in spherical angles for d>=3 — node counts
double until the tolerance is met, capped at 2^16 function evaluations.
"""

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import QuadratureError

_ATOM_TOL = 1e-12
_AUTO_NORM_WARN = 1e-8
_MAX_NODES = 2**16


@dataclass(frozen=True)
class SpectralMeasure:
    dim: int
    kind: str  # "discrete" | "uniform"
    atoms: Optional[np.ndarray] = None  # (k, d) unit rows
    weights: Optional[np.ndarray] = None  # (k,) positive
    mass: float = 0.0
    symmetric: bool = False


def discrete(atoms, weights):
    """Discrete measure from unit-vector atoms and positive weights.

    Atoms off the unit sphere by more than 1e-8 are renormalized with a
    warning; smaller defects are corrected silently.
    """
    atoms = np.atleast_2d(np.asarray(atoms, dtype=float))
    weights = np.asarray(weights, dtype=float).ravel()
    if atoms.shape[0] != weights.shape[0]:
        raise ValueError("atom/weight count mismatch")
    if np.any(weights <= 0.0):
        raise ValueError("weights must be positive")
    norms = np.linalg.norm(atoms, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("atoms must be nonzero vectors")
    if np.any(np.abs(norms - 1.0) > _AUTO_NORM_WARN):
        warnings.warn("atom(s) off the unit sphere; renormalizing", stacklevel=2)
    atoms = atoms / norms[:, None]
    mass = float(weights.sum())
    return SpectralMeasure(
        dim=atoms.shape[1],
        kind="discrete",
        atoms=atoms,
        weights=weights,
        mass=mass,
        symmetric=_is_symmetric(atoms, weights),
    )


def uniform(dim, mass):
    """Rotation-invariant measure of the given total mass (always symmetric)."""
    if mass <= 0.0 or not np.isfinite(mass):
        raise ValueError("mass must be positive and finite")
    return SpectralMeasure(dim=dim, kind="uniform", mass=float(mass), symmetric=True)


def _is_symmetric(atoms, weights):
    k = atoms.shape[0]
    used = np.zeros(k, dtype=bool)
    for i in range(k):
        if used[i]:
            continue
        found = False
        for j in range(k):
            if used[j] or j == i:
                continue
            if (
                np.max(np.abs(atoms[j] + atoms[i])) <= _ATOM_TOL
                and abs(weights[j] - weights[i]) <= _ATOM_TOL
            ):
                used[i] = used[j] = True
                found = True
                break
        if not found:
            return False
    return True


def total_mass(sigma):
    return sigma.mass


def symmetrize(sigma):
    """The even part: atoms plus reflected atoms at half weight; mass preserved."""
    if sigma.kind == "uniform" or sigma.symmetric:
        return sigma
    atoms = np.vstack([sigma.atoms, -sigma.atoms])
    weights = np.concatenate([sigma.weights, sigma.weights]) * 0.5
    out = discrete(atoms, weights)
    # construction is symmetric even if duplicate atoms defeat pair matching
    return SpectralMeasure(
        dim=out.dim,
        kind="discrete",
        atoms=out.atoms,
        weights=out.weights,
        mass=out.mass,
        symmetric=True,
    )


def _sphere_grid(dim, n):
    """Product-rule nodes and weights on S^{d-1}, d >= 3.

    Trapezoid in the azimuthal angle, midpoint in each polar angle with the
    sin-power surface factor; weights normalized to unit total so a constant
    integrand is reproduced exactly.
    """
    polar_axes = []
    polar_wts = []
    for k in range(dim - 2):
        # midpoint rule on [0, pi] with weight sin^{d-2-k}
        phi = (np.arange(n) + 0.5) * (np.pi / n)
        polar_axes.append(phi)
        polar_wts.append(np.sin(phi) ** (dim - 2 - k))
    az = np.arange(2 * n) * (np.pi / n)  # trapezoid on [0, 2pi), periodic
    grids = np.meshgrid(*polar_axes, az, indexing="ij")
    shape = grids[0].shape
    pts = np.empty(shape + (dim,))
    sin_prod = np.ones(shape)
    for k, phi in enumerate(grids[:-1]):
        pts[..., k] = sin_prod * np.cos(phi)
        sin_prod = sin_prod * np.sin(phi)
    pts[..., dim - 2] = sin_prod * np.cos(grids[-1])
    pts[..., dim - 1] = sin_prod * np.sin(grids[-1])
    w = np.ones(shape)
    for k, pw in enumerate(polar_wts):
        w *= pw.reshape((1,) * k + (-1,) + (1,) * (len(shape) - k - 1))
    pts = pts.reshape(-1, dim)
    w = w.ravel()
    return pts, w / w.sum()


def integrate_sphere(sigma, g, tol=1e-10):
    """Integral of g against sigma.

    Discrete measures are exact weighted sums.  Uniform measures use node
    doubling until successive estimates differ by at most tol * mass * sup|g|
    (sup estimated from the sampled values); non-convergence at the node cap
    raises QuadratureError carrying the best estimate.
    """
    if sigma.kind == "discrete":
        return float(sum(w * g(theta) for theta, w in zip(sigma.atoms, sigma.weights)))
    d = sigma.dim
    if d == 1:
        return 0.5 * sigma.mass * (g(np.array([1.0])) + g(np.array([-1.0])))
    if d == 2:
        n = 8
        prev = None
        while True:
            phi = np.arange(n) * (2.0 * np.pi / n)
            vals = np.array([g(np.array([np.cos(p), np.sin(p)])) for p in phi])
            est = sigma.mass * float(vals.mean())
            scale = sigma.mass * max(float(np.max(np.abs(vals))), 1e-300)
            if prev is not None and abs(est - prev) <= tol * scale:
                return est
            if n >= _MAX_NODES:
                raise QuadratureError(
                    "sphere quadrature did not converge",
                    best=est,
                    achieved=abs(est - prev) if prev is not None else np.inf,
                )
            prev = est
            n *= 2
    n = 8
    prev = None
    while True:
        pts, w = _sphere_grid(d, n)
        vals = np.array([g(p) for p in pts])
        est = sigma.mass * float(w @ vals)
        scale = sigma.mass * max(float(np.max(np.abs(vals))), 1e-300)
        if prev is not None and abs(est - prev) <= tol * scale:
            return est
        if pts.shape[0] * 2 ** (d - 1) > _MAX_NODES:
            raise QuadratureError(
                "sphere quadrature did not converge",
                best=est,
                achieved=abs(est - prev) if prev is not None else np.inf,
            )
        prev = est
        n *= 2


def sample_direction(sigma, rng):
    """One draw from sigma normalized to a probability law on the sphere."""
    if sigma.kind == "discrete":
        idx = rng.choice(sigma.atoms.shape[0], p=sigma.weights / sigma.mass)
        return sigma.atoms[idx].copy()
    v = rng.standard_normal(sigma.dim)
    n = np.linalg.norm(v)
    while n == 0.0:  # pragma: no cover
        v = rng.standard_normal(sigma.dim)
        n = np.linalg.norm(v)
    return v / n
