"""Estimators and inequality checks on simulated ensembles.

All estimators accept either a fully recorded ``Ensemble`` or the online
``SummaryEnsemble`` (whose checkpoints must contain the requested times).
Everything is a deterministic function of the ensemble and the stated seeds.
"""

import math
from dataclasses import dataclass

import numpy as np

from .simulator import SummaryEnsemble

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


# ---------------------------------------------------------------------------
# per-path functionals
# ---------------------------------------------------------------------------


def max_process(path, t):
    """sup_{s <= t} ||X_s - x0||, exact for piecewise-constant paths.

    On drift segments only the endpoints are evaluated (first-order gap).
    """
    if t < 0.0 or t > path.horizon:
        raise ValueError("t outside the path horizon")
    best = float(np.linalg.norm(path.state_at(t) - path.x0))
    for k in range(path.n_events):
        if path.times[k] > t:
            break
        best = max(best, float(np.linalg.norm(path.states[k] - path.x0)))
    return best


def first_exit_time(path, R):
    """First event time with ||X - x0|| > R; inf when censored at the horizon."""
    if R <= 0.0:
        raise ValueError("R must be positive")
    for k in range(path.n_events):
        if np.linalg.norm(path.states[k] - path.x0) > R:
            return float(path.times[k])
    return math.inf


def path_jumps(path):
    """Jump vectors Delta X_k (drift contribution removed)."""
    if path.n_events == 0:
        return np.zeros((0, path.x0.shape[0]))
    prev = np.vstack([path.x0, path.states[:-1]])
    gaps = np.diff(np.concatenate([[0.0], path.times]))
    return path.states - prev - path.drifts * gaps[:, None]


def p_variation(path, p, mode="jump_sum", max_level=12):
    """p-variation estimators.

    ``jump_sum``: sum of ||Delta X||^p over recorded jumps — the exact strong
    p-variation of a piecewise-constant path when p >= 1, a lower bound
    otherwise.  ``dyadic``: V_p over dyadic partitions of [0, horizon],
    returned as the per-level curve (nondecreasing in level).
    """
    if p <= 0.0:
        raise ValueError("p must be positive")
    if mode == "jump_sum":
        jumps = path_jumps(path)
        return float(np.sum(np.linalg.norm(jumps, axis=1) ** p))
    if mode != "dyadic":
        raise ValueError(f"unknown mode {mode!r}")
    curve = []
    for level in range(1, max_level + 1):
        ts = np.linspace(0.0, path.horizon, 2**level + 1)
        pts = np.array([path.state_at(t) for t in ts])
        curve.append(float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1) ** p)))
    return curve


# ---------------------------------------------------------------------------
# ensemble access (full or summary)
# ---------------------------------------------------------------------------


def _check_index(summary, t):
    idx = np.flatnonzero(np.isclose(summary.t_checks, t, rtol=1e-12, atol=1e-12))
    if idx.size == 0:
        raise ValueError(f"t={t} is not a checkpoint of this summary ensemble")
    return int(idx[0])


def ensemble_maxes(ensemble, t):
    if isinstance(ensemble, SummaryEnsemble):
        return ensemble.maxdisp[:, _check_index(ensemble, t)].copy()
    return np.array([max_process(p, t) for p in ensemble.paths])


def ensemble_states(ensemble, t):
    if isinstance(ensemble, SummaryEnsemble):
        return ensemble.states[:, _check_index(ensemble, t), :].copy()
    return ensemble.states_at(t)


def ensemble_exits(ensemble, R):
    if isinstance(ensemble, SummaryEnsemble):
        idx = np.flatnonzero(np.isclose(ensemble.R_levels, R, rtol=1e-12, atol=1e-12))
        if idx.size == 0:
            raise ValueError(f"R={R} is not a tracked exit level")
        return ensemble.exits[:, int(idx[0])].copy()
    return np.array([first_exit_time(p, R) for p in ensemble.paths])


def _x0(ensemble):
    return ensemble.x0


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------


def wilson_interval(k, n, z=_Z95):
    """Wilson score interval for a binomial proportion: (center, half_width)."""
    if n == 0:
        return 0.5, 0.5
    phat = k / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n))
    return center, half


@dataclass(frozen=True)
class TailReport:
    R_grid: np.ndarray
    probs: np.ndarray
    ci_half: np.ndarray
    fitted_slope: float
    slope_stderr: float
    reference_slope: float
    low_count_warning: bool


def tail_report(ensemble, t, R_grid, reference_slope=-1.0):
    """Exceedance probabilities P(sup_{s<=t} ||X-x0|| > R) with a log-log fit.

    Wilson CIs per grid point; the slope comes from weighted least squares in
    (log R, log p) with weights from the CI half-widths.
    """
    maxes = ensemble_maxes(ensemble, t)
    n = maxes.shape[0]
    R_grid = np.asarray(R_grid, dtype=float)
    counts = np.array([(maxes > R).sum() for R in R_grid])
    probs = counts / n
    ci = np.array([wilson_interval(k, n)[1] for k in counts])
    low = bool(np.any(counts < 100))
    keep = counts > 0
    lx = np.log(R_grid[keep])
    ly = np.log(probs[keep])
    # delta method: sd(log p) ~ ci / p
    w = (probs[keep] / ci[keep]) ** 2
    W = w.sum()
    xbar = (w * lx).sum() / W
    ybar = (w * ly).sum() / W
    sxx = (w * (lx - xbar) ** 2).sum()
    slope = (w * (lx - xbar) * (ly - ybar)).sum() / sxx
    stderr = math.sqrt(1.0 / sxx)
    return TailReport(
        R_grid=R_grid,
        probs=probs,
        ci_half=ci,
        fitted_slope=float(slope),
        slope_stderr=float(stderr),
        reference_slope=float(reference_slope),
        low_count_warning=low,
    )


def empirical_moment(ensemble, p, t, n_boot=200, boot_seed=12345):
    """(estimate, CI half-width, stable) for E[(sup_{s<=t}||X-x0||)^p].

    Bootstrap percentile CI; ``stable`` is False when the single largest term
    contributes more than 20% of the sum (heavy-tail divergence heuristic).
    """
    if p <= 0.0:
        raise ValueError("p must be positive")
    vals = ensemble_maxes(ensemble, t) ** p
    est = float(vals.mean())
    total = float(vals.sum())
    stable = bool(total == 0.0 or vals.max() <= 0.2 * total)
    rng = np.random.default_rng(boot_seed)
    n = vals.shape[0]
    boots = np.empty(n_boot)
    for i in range(n_boot):
        boots[i] = vals[rng.integers(0, n, n)].mean()
    lo, hi = np.percentile(boots, [2.5, 97.5])
    return est, float(0.5 * (hi - lo)), stable


def empirical_cf(ensemble, t, xi):
    """(re, im, stderr) of the characteristic function of X_t - x0."""
    xi = np.asarray(xi, dtype=float)
    if t == 0.0:
        return 1.0, 0.0, 0.0
    states = ensemble_states(ensemble, t)
    phases = (states - _x0(ensemble)) @ xi
    c = np.cos(phases)
    s = np.sin(phases)
    n = phases.shape[0]
    stderr = float(max(c.std(ddof=1), s.std(ddof=1)) / math.sqrt(n))
    return float(c.mean()), float(s.mean()), stderr


@dataclass(frozen=True)
class GrowthReport:
    t_grid: np.ndarray
    median_ratio: np.ndarray
    upper_ratio: np.ndarray
    gamma: float
    verdict: str  # "decreasing" | "increasing" | "inconclusive"


def growth_exponent_check(ensemble, t_grid, gamma, upper_q=0.9):
    """Trend of sup_{s<=t}||X-x0|| / t^{1/gamma} over a t-grid.

    Decreasing medians indicate gamma above the relevant growth index,
    increasing medians gamma below it; mixed signs give "inconclusive".
    """
    t_grid = np.asarray(t_grid, dtype=float)
    med = np.empty(t_grid.shape)
    upp = np.empty(t_grid.shape)
    for i, t in enumerate(t_grid):
        ratios = ensemble_maxes(ensemble, t) / t ** (1.0 / gamma)
        med[i] = np.median(ratios)
        upp[i] = np.quantile(ratios, upper_q)
    diffs = np.diff(med)
    if np.all(diffs <= 0) and med[-1] < med[0]:
        verdict = "decreasing"
    elif np.all(diffs >= 0) and med[-1] > med[0]:
        verdict = "increasing"
    else:
        verdict = "inconclusive"
    return GrowthReport(
        t_grid=t_grid, median_ratio=med, upper_ratio=upp, gamma=gamma, verdict=verdict
    )


@dataclass(frozen=True)
class ExitMomentReport:
    R: float
    mean_exit: float
    ci_half: float
    censored_fraction: float
    lower_shape: float
    upper_shape: float
    heavy_censoring: bool


def exit_time_moment_check(ensemble, R, a, b=None):
    """Mean first-exit time at level R with the scaling comparison shapes.

    Censored paths (never exited before the horizon) enter the mean at the
    horizon, making it a lower bound; more than 5% censoring raises the
    heavy_censoring flag.
    """
    exits = ensemble_exits(ensemble, R)
    horizon = ensemble.config.horizon
    censored = ~np.isfinite(exits)
    frac = float(censored.mean())
    vals = np.where(censored, horizon, exits)
    mean = float(vals.mean())
    ci = float(_Z95 * vals.std(ddof=1) / math.sqrt(vals.shape[0]))
    if b is None:
        b = a
    return ExitMomentReport(
        R=float(R),
        mean_exit=mean,
        ci_half=ci,
        censored_fraction=frac,
        lower_shape=R ** (1.0 / a),
        upper_shape=R ** (1.0 / b),
        heavy_censoring=frac >= 0.05,
    )
