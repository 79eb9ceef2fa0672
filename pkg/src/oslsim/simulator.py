"""Event-driven simulation of the jump SDE dX = r^{E(X_-)} theta dN.

Jumps with radial mark r > eps arrive as a compound-Poisson stream of rate
sigma-mass / eps (the truncated r^{-2} intensity integrates to 1/eps); the
radial mark is sampled exactly by inversion, r = eps / U.  Smaller jumps are
dropped with a certified second-moment budget (``truncation_error_bound``).
For non-symmetric measures the compensator of the (eps, 1) band is a drift,
computed in closed form from the eigendecomposition and applied linearly
between events.

Two granularities ship: full trajectories (``simulate_path`` /
``simulate_ensemble``, python loop, desk scale) and in-kernel online
summaries (``simulate_summaries``) for the large ensembles the statistical
checks need, where storing every event would be infeasible.  Both consume the
same per-path counter-based random streams in the same draw order, so a path
and its summary row agree.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ContractError
from .matexp import eigen_data
from .spectral import integrate_sphere
from .symbol import DEFAULT_QUAD, _adapt_py, _direction_pushforward


@dataclass(frozen=True)
class SimConfig:
    horizon: float
    eps: float = 1e-3
    seed: int = 0
    record_mode: str = "events_only"  # or "grid" with grid_dt set
    grid_dt: Optional[float] = None
    drift_mode: str = "auto"  # auto | force_zero | force_numeric

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if self.horizon <= 0.0:
            raise ValueError("horizon must be positive")
        if self.drift_mode not in ("auto", "force_zero", "force_numeric"):
            raise ValueError(f"unknown drift_mode {self.drift_mode!r}")
        if self.record_mode not in ("events_only", "grid"):
            raise ValueError(f"unknown record_mode {self.record_mode!r}")
        if self.record_mode == "grid" and not (self.grid_dt and self.grid_dt > 0):
            raise ValueError("grid record mode needs a positive grid_dt")


class PathStream:
    """A counter-based random stream owned by one path."""

    __slots__ = ("state",)

    def __init__(self, state):
        self.state = np.uint64(state)

    @classmethod
    def for_path(cls, seed, index):
        return cls(_kernels.stream_init(np.uint64(seed), np.uint64(index)))

    def uniform(self):
        # numba boxes uint64 results as Python ints; re-wrap so the next
        # dispatch does not type a value >= 2**63 as int64.
        state, u = _kernels.stream_next(np.uint64(self.state))
        self.state = np.uint64(state)
        return u


@dataclass(frozen=True)
class PathSample:
    """One trajectory: event times, post-event states, jump marks.

    ``drifts[k]`` is the drift vector active on [times[k-1], times[k])
    (all-zero array when no compensator drift is active); ``final_state`` is
    the state at the horizon.
    """

    x0: np.ndarray
    times: np.ndarray  # (n_events,)
    states: np.ndarray  # (n_events, d), post-jump
    marks_r: np.ndarray  # (n_events,)
    marks_theta: np.ndarray  # (n_events, d)
    drifts: np.ndarray  # (n_events, d)
    final_state: np.ndarray
    horizon: float
    eps_used: float
    seed_used: int

    @property
    def n_events(self):
        return self.times.shape[0]

    def state_at(self, t):
        """Right-continuous state at time t (drift interpolated linearly)."""
        if t < 0.0 or t > self.horizon:
            raise ValueError("t outside [0, horizon]")
        k = int(np.searchsorted(self.times, t, side="right"))
        if k == 0:
            base, t0 = self.x0, 0.0
        else:
            base, t0 = self.states[k - 1], self.times[k - 1]
        if k < self.n_events:
            return base + self.drifts[k] * (t - t0)
        # after the last event the drift of the final segment applies
        if self.n_events:
            seg_drift = (self.final_state - self.states[-1]) / max(
                self.horizon - self.times[-1], 1e-300
            )
            return base + seg_drift * (t - t0)
        return self.final_state if self.horizon == 0 else base + (
            (self.final_state - self.x0) / self.horizon
        ) * (t - t0)


@dataclass(frozen=True)
class Ensemble:
    """Fully recorded paths plus the configuration that produced them."""

    paths: tuple
    config: SimConfig
    x0: np.ndarray

    @property
    def n_paths(self):
        return len(self.paths)

    def states_at(self, t):
        return np.array([p.state_at(t) for p in self.paths])


@dataclass(frozen=True)
class SummaryEnsemble:
    """Online per-path summaries from the compiled kernel.

    states[i, k] is path i at t_checks[k]; maxdisp the running sup of
    ||X - x0|| up to each checkpoint; exits[i, l] the first time the
    displacement exceeded R_levels[l] (inf = censored at the horizon);
    psums[i, p, q] the sum of ||jump||^{p_exps[p]} over jumps with radial
    mark above p_thresholds[q].
    """

    t_checks: np.ndarray
    states: np.ndarray
    maxdisp: np.ndarray
    R_levels: np.ndarray
    exits: np.ndarray
    p_exps: np.ndarray
    p_thresholds: np.ndarray
    psums: np.ndarray
    n_events: np.ndarray
    x0: np.ndarray
    config: SimConfig

    @property
    def n_paths(self):
        return self.states.shape[0]


def truncation_error_bound(model, eps):
    """Second-moment rate (per unit time) of the discarded sub-eps jumps.

    sigma-mass * eps^{2a-1} / (2a-1), using ||r^E theta|| <= r^a for r < 1.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    a = model.field.a
    return model.sigma.mass * eps ** (2.0 * a - 1.0) / (2.0 * a - 1.0)


def _drift_state(model, config):
    """(drift_on, svec): whether compensator drift is active and its angular sum."""
    sigma = model.sigma
    d = model.dim
    if config.drift_mode == "force_zero":
        return False, np.zeros(d)
    if sigma.symmetric and config.drift_mode == "auto":
        return False, np.zeros(d)
    if not sigma.symmetric and config.drift_mode == "auto":
        import warnings

        warnings.warn(
            "non-symmetric measure: compensator drift enabled (numeric mode)",
            stacklevel=3,
        )
    if sigma.kind == "uniform":
        return False, np.zeros(d)  # angular mean vanishes
    svec = (sigma.weights[:, None] * sigma.atoms).sum(axis=0)
    return True, svec


def _drift_vector_py(ed, eps, svec):
    """-int_S int_eps^1 r^{E} theta r^{-2} dr sigma(dtheta), closed form."""
    z = ed.eigenvectors.T @ svec
    evals = ed.eigenvalues
    near_one = np.abs(evals - 1.0) < 1e-12
    denom = np.where(near_one, 1.0, evals - 1.0)  # dummy 1.0 where the limit applies
    f = np.where(near_one, -math.log(eps), (1.0 - eps ** (evals - 1.0)) / denom)
    return -(ed.eigenvectors @ (f * z))


def _draw_direction_py(stream, sigma):
    """Mirror of the kernel's direction draw, same stream consumption."""
    d = sigma.dim
    if sigma.kind == "discrete":
        u = stream.uniform()
        cumw = np.cumsum(sigma.weights)
        target = u * cumw[-1]
        idx = int(np.searchsorted(cumw, target, side="right"))
        idx = min(idx, len(cumw) - 1)
        return sigma.atoms[idx].copy()
    out = np.empty(d)
    i = 0
    while i < d:
        u1 = stream.uniform()
        u2 = stream.uniform()
        rho = math.sqrt(-2.0 * math.log(1.0 - u1))
        out[i] = rho * math.cos(2.0 * math.pi * u2)
        if i + 1 < d:
            out[i + 1] = rho * math.sin(2.0 * math.pi * u2)
        i += 2
    n = float(np.linalg.norm(out))
    if n == 0.0:  # pragma: no cover
        out[:] = 0.0
        out[0] = 1.0
        return out
    return out / n


def simulate_path(model, x0, config, stream=None, path_index=0):
    """One trajectory of the truncated jump SDE.

    ``stream`` defaults to the per-path stream derived from
    (config.seed, path_index); passing the same stream state reproduces the
    path bit for bit.
    """
    if stream is None:
        stream = PathStream.for_path(config.seed, path_index)
    x0 = np.asarray(x0, dtype=float)
    d = model.dim
    sigma = model.sigma
    eps = config.eps
    T = config.horizon
    rate = sigma.mass / eps
    drift_on, svec = _drift_state(model, config)

    times, states, marks_r, marks_theta, drifts = [], [], [], [], []
    x = x0.copy()
    t = 0.0
    zero = np.zeros(d)
    while True:
        u = stream.uniform()
        gap = -math.log(1.0 - u) / rate
        t_ev = t + gap
        if drift_on:
            ed = eigen_data(model.field(x))
            drift = _drift_vector_py(ed, eps, svec)
        else:
            drift = zero
        if t_ev >= T:
            final = x + drift * (T - t) if drift_on else x.copy()
            break
        if drift_on:
            x = x + drift * gap
            ed = eigen_data(model.field(x))
        else:
            ed = eigen_data(model.field(x))
        theta = _draw_direction_py(stream, sigma)
        u = max(stream.uniform(), 1e-300)
        r = eps / u
        x = x + ed.apply_power(r, theta)
        times.append(t_ev)
        states.append(x.copy())
        marks_r.append(r)
        marks_theta.append(theta)
        drifts.append(drift.copy())
        t = t_ev
    n = len(times)
    return PathSample(
        x0=x0,
        times=np.array(times),
        states=np.array(states).reshape(n, d),
        marks_r=np.array(marks_r),
        marks_theta=np.array(marks_theta).reshape(n, d),
        drifts=np.array(drifts).reshape(n, d),
        final_state=final,
        horizon=T,
        eps_used=eps,
        seed_used=int(config.seed),
    )


def simulate_ensemble(model, x0, config, n_paths):
    """n_paths independent fully-recorded paths; order-independent content."""
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    paths = tuple(
        simulate_path(model, x0, config, path_index=i) for i in range(n_paths)
    )
    return Ensemble(paths=paths, config=config, x0=np.asarray(x0, dtype=float))


def replay_check(model, path, config=None):
    """Max reconstruction defect of the stored states from (x0, marks, drifts)."""
    x = path.x0.copy()
    t = 0.0
    worst = 0.0
    for k in range(path.n_events):
        x = x + path.drifts[k] * (path.times[k] - t)
        ed = eigen_data(model.field(x))
        x = x + ed.apply_power(path.marks_r[k], path.marks_theta[k])
        worst = max(worst, float(np.max(np.abs(x - path.states[k]))))
        x = path.states[k]
        t = path.times[k]
    return worst


def _kernel_args(model, config):
    spec = model.field.kernel_spec
    if spec is None:
        raise ContractError(
            "summary simulation needs a field with a kernel encoding "
            "(constant, stable-like-sin or linear-blend interpolated)"
        )
    sigma = model.sigma
    if sigma.kind == "discrete":
        atoms = np.ascontiguousarray(sigma.atoms)
        cumw = np.cumsum(sigma.weights)
        uniform_dim = 0
    else:
        atoms = np.zeros((1, model.dim))
        cumw = np.ones(1)
        uniform_dim = model.dim
    drift_on, svec = _drift_state(model, config)
    return spec, atoms, cumw, uniform_dim, drift_on, svec


def simulate_summaries(
    model,
    x0,
    config,
    n_paths,
    t_checks,
    R_levels=(),
    p_exps=(),
    p_thresholds=(),
    early_stop=False,
):
    """Large-ensemble online summaries (see SummaryEnsemble).

    With ``early_stop`` a path terminates once every R level has been
    exited; checkpoint states are then only valid up to that time and the
    exit columns are the usable output.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    spec, atoms, cumw, uniform_dim, drift_on, svec = _kernel_args(model, config)
    x0 = np.asarray(x0, dtype=float)
    t_checks = np.asarray(t_checks, dtype=float)
    if np.any(np.diff(t_checks) < 0) or np.any(t_checks > config.horizon):
        raise ValueError("t_checks must be nondecreasing and within the horizon")
    R_levels = np.asarray(R_levels, dtype=float)
    if R_levels.size and np.any(np.diff(R_levels) <= 0):
        raise ValueError("R_levels must be strictly increasing")
    p_exps = np.asarray(p_exps, dtype=float)
    p_thresholds = np.asarray(p_thresholds, dtype=float)
    rate = model.sigma.mass / config.eps
    states, maxdisp, exits, psums, nev = _kernels.simulate_summaries_kernel(
        spec.kind,
        spec.fA,
        spec.fB,
        spec.fvec,
        spec.fsc,
        atoms,
        cumw,
        uniform_dim,
        x0,
        float(config.horizon),
        float(config.eps),
        float(rate),
        np.uint64(config.seed),
        int(n_paths),
        t_checks,
        R_levels,
        p_exps,
        p_thresholds,
        drift_on,
        svec,
        early_stop,
    )
    return SummaryEnsemble(
        t_checks=t_checks,
        states=states,
        maxdisp=maxdisp,
        R_levels=R_levels,
        exits=exits,
        p_exps=p_exps,
        p_thresholds=p_thresholds,
        psums=psums,
        n_events=nev,
        x0=x0,
        config=config,
    )


def sde_coefficient_checks(model, x, y, quad=None):
    """(growth_lhs, lipschitz_lhs, lipschitz_rhs_shape) for well-posedness.

    growth_lhs = int_S int_0^1 ||r^{E(x)} theta||^2 r^{-2} dr sigma(dtheta),
    lipschitz_lhs the same with the difference of the two coefficient maps at
    x and y, lipschitz_rhs_shape = ||x - y||^2.  Radial parts by adaptive
    quadrature on [r_min, 1] with an exact analytic head below r_min.
    """
    quad = quad or DEFAULT_QUAD
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ed_x = eigen_data(model.field(x))
    ed_y = eigen_data(model.field(y))
    amin = min(float(ed_x.eigenvalues[0]), float(ed_y.eigenvalues[0]))
    qpow = 2.0 * amin - 1.0
    rm = min(0.25, (0.25 * quad.rel_tol * qpow / 4.0) ** (1.0 / qpow))

    def growth_dir(theta):
        z2 = (ed_x.eigenvectors.T @ theta) ** 2
        head = float(np.sum(z2 * rm ** (2.0 * ed_x.eigenvalues - 1.0)
                            / (2.0 * ed_x.eigenvalues - 1.0)))
        push = _direction_pushforward(ed_x, theta)

        def g(u):
            r = math.exp(u)
            v = push(r)
            return float(v @ v) * math.exp(-u)

        val, _, _ = _adapt_py(g, math.log(rm), 0.0, quad.rel_tol, quad.max_subdivisions)
        return head + val

    def lip_dir(theta):
        push_x = _direction_pushforward(ed_x, theta)
        push_y = _direction_pushforward(ed_y, theta)

        def g(u):
            r = math.exp(u)
            v = push_x(r) - push_y(r)
            return float(v @ v) * math.exp(-u)

        val, _, _ = _adapt_py(g, math.log(rm), 0.0, quad.rel_tol, quad.max_subdivisions)
        return val  # head below rm bounded by 4 rm^{2a-1}/(2a-1), negligible

    growth = integrate_sphere(model.sigma, growth_dir, tol=quad.rel_tol)
    lip = integrate_sphere(model.sigma, lip_dir, tol=quad.rel_tol)
    return growth, lip, float(np.sum((x - y) ** 2))
