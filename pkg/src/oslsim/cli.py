"""Batch front door: JSON config in, CSV/JSON/JSONL artifacts out.

Commands: validate | symbol-eval | simulate | stats | verify | indices.
Exit codes: 0 success, 1 assertion/contract failure, 2 config error,
3 I/O error.  All floating-point output uses 17 significant digits so
reruns are byte-identical.
"""

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from .errors import AdmissibilityError, ContractError
from .exponent_field import (
    linear_blend_field,
    make_constant,
    make_interpolated,
    make_stable_like,
    sin_alpha_field,
    validate_admissible,
)
from .path_stats import (
    empirical_cf,
    empirical_moment,
    exit_time_moment_check,
    p_variation,
    tail_report,
)
from .simulator import SimConfig, simulate_ensemble, truncation_error_bound
from .spectral import discrete, uniform
from .symbol import (
    OslModel,
    QuadSpec,
    bg_indices_infinity,
    bg_indices_zero,
    symbol_general,
    symbol_symmetric_with_error,
)
from . import verify as verify_mod


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization (17 significant digits)
# ---------------------------------------------------------------------------


def fmt(v):
    if isinstance(v, float):
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        if math.isnan(v):
            return '"nan"'
        return format(v, ".17g")
    raise TypeError(type(v))


def dump_json(obj):
    """Deterministic JSON: sorted keys, 17-significant-digit floats."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ",".join(dump_json(v) for v in seq) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ",".join(json.dumps(str(k)) + ":" + dump_json(v) for k, v in items) + "}"
    raise ConfigError(f"unserializable value of type {type(obj).__name__}")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def _need(cfg, key, where):
    if key not in cfg:
        raise ConfigError(f"missing key {key!r} in {where}")
    return cfg[key]


def build_field(spec):
    kind = _need(spec, "kind", "model.field")
    try:
        if kind == "constant":
            return make_constant(np.asarray(_need(spec, "matrix", "field"), dtype=float))
        if kind == "stable_like_sin":
            return make_stable_like(
                sin_alpha_field(_need(spec, "base", "field"), _need(spec, "amp", "field")),
                dim=int(spec.get("dim", 1)),
            )
        if kind == "interpolated":
            return make_interpolated(
                np.asarray(_need(spec, "E_low", "field"), dtype=float),
                np.asarray(_need(spec, "E_high", "field"), dtype=float),
                linear_blend_field(
                    np.asarray(_need(spec, "w", "field"), dtype=float),
                    float(spec.get("c0", 0.0)),
                ),
            )
    except (AdmissibilityError, ContractError):
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad field parameters: {exc}") from exc
    raise ConfigError(f"unknown field kind {kind!r}")


def build_sigma(spec):
    kind = _need(spec, "kind", "model.sigma")
    try:
        if kind == "discrete":
            entries = _need(spec, "atoms", "sigma")
            atoms = [e[0] for e in entries]
            weights = [e[1] for e in entries]
            return discrete(atoms, weights)
        if kind == "uniform":
            return uniform(int(_need(spec, "dim", "sigma")), float(_need(spec, "mass", "sigma")))
    except (TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad sigma parameters: {exc}") from exc
    raise ConfigError(f"unknown sigma kind {kind!r}")


def build_model(cfg):
    mspec = _need(cfg, "model", "config")
    model = OslModel(field=build_field(_need(mspec, "field", "model")),
                     sigma=build_sigma(_need(mspec, "sigma", "model")))
    return model


def build_quad(cfg):
    q = cfg.get("quad", {})
    try:
        return QuadSpec(
            rel_tol=float(q.get("rel_tol", 1e-8)),
            R_max=float(q.get("R_max", 1e6)),
            max_subdivisions=int(q.get("max_subdivisions", 60000)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad quad spec: {exc}") from exc


def build_sim(cfg, seed_override=None):
    s = _need(cfg, "sim", "config")
    try:
        seed = int(s.get("seed", 0)) if seed_override is None else int(seed_override)
        config = SimConfig(
            horizon=float(_need(s, "T", "sim")),
            eps=float(s.get("eps", 1e-3)),
            seed=seed,
            drift_mode=s.get("drift_mode", "auto"),
        )
    except ValueError as exc:
        raise ConfigError(f"bad sim spec: {exc}") from exc
    n_paths = int(s.get("n_paths", 1))
    if n_paths < 1:
        raise ConfigError("sim.n_paths must be >= 1")
    x0 = np.asarray(s.get("x0", [0.0]), dtype=float)
    return config, n_paths, x0


def model_hash(cfg):
    return hashlib.sha256(dump_json(_need(cfg, "model", "config")).encode()).hexdigest()


def _write(path, text):
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(cfg, args):
    field = build_field(_need(_need(cfg, "model", "config"), "field", "model"))
    v = cfg.get("validate", {})
    box = v.get("box", [[-math.pi, math.pi]] * field.dim)
    report = validate_admissible(
        field,
        box,
        grid_n=int(v.get("grid_n", 25)),
        pair_m=int(v.get("pair_m", 1000)),
        rng_seed=int(v.get("rng_seed", 0)),
    )
    payload = {
        "max_symmetry_defect": report.max_symmetry_defect,
        "min_lambda": report.min_lambda,
        "max_Lambda": report.max_Lambda,
        "max_lip_ratio": report.max_lip_ratio,
        "violations": list(report.violations),
        "ok": report.ok,
    }
    _write(os.path.join(args.out, "validate.json"), dump_json(payload) + "\n")
    if not report.ok:
        for msg in report.violations:
            print(f"violation: {msg}", file=sys.stderr)
        return 1
    return 0


def cmd_symbol_eval(cfg, args):
    model = build_model(cfg)
    quad = build_quad(cfg)
    spec = _need(cfg, "symbol_eval", "config")
    x_grid = [np.asarray(x, dtype=float) for x in _need(spec, "x_grid", "symbol_eval")]
    xi_grid = [np.asarray(v, dtype=float) for v in _need(spec, "xi_grid", "symbol_eval")]
    use_complex = bool(args.complex_symbol)
    if not model.symmetric_model and not use_complex:
        print("non-symmetric measure: rerun with --complex", file=sys.stderr)
        return 1
    d = model.dim
    header = [f"x{i+1}" for i in range(d)] + [f"xi{i+1}" for i in range(d)]
    header += ["q_re", "q_im"] if use_complex else ["q", "err_est"]
    rows = [",".join(header)]
    for x in x_grid:
        for xi in xi_grid:
            cells = [format(float(v), ".17g") for v in x] + [
                format(float(v), ".17g") for v in xi
            ]
            if use_complex:
                z = symbol_general(model, x, xi, quad)
                cells += [format(z.real, ".17g"), format(z.imag, ".17g")]
            else:
                q, err = symbol_symmetric_with_error(model, x, xi, quad)
                cells += [format(q, ".17g"), format(err, ".17g")]
            rows.append(",".join(cells))
    _write(os.path.join(args.out, "symbol_eval.csv"), "\n".join(rows) + "\n")
    return 0


def _run_ensemble(cfg, args):
    model = build_model(cfg)
    config, n_paths, x0 = build_sim(cfg, args.seed)
    return model, config, n_paths, x0, simulate_ensemble(model, x0, config, n_paths)


def cmd_simulate(cfg, args):
    model, config, n_paths, x0, ens = _run_ensemble(cfg, args)
    lines = []
    for p in ens.paths:
        lines.append(
            dump_json(
                {
                    "times": p.times,
                    "states": p.states,
                    "marks_r": p.marks_r,
                    "marks_theta": p.marks_theta,
                    "final_state": p.final_state,
                }
            )
        )
    _write(os.path.join(args.out, "ensemble.jsonl"), "\n".join(lines) + "\n")
    manifest = {
        "seed": config.seed,
        "eps": config.eps,
        "T": config.horizon,
        "n_paths": n_paths,
        "x0": x0,
        "truncation_error_bound": truncation_error_bound(model, config.eps),
        "model_hash": model_hash(cfg),
    }
    _write(os.path.join(args.out, "manifest.json"), dump_json(manifest) + "\n")
    return 0


def cmd_stats(cfg, args):
    model, config, n_paths, x0, ens = _run_ensemble(cfg, args)
    reports = []
    for item in _need(cfg, "stats", "config"):
        stat = _need(item, "statistic", "stats[]")
        if stat == "empirical_cf":
            re, im, se = empirical_cf(ens, float(_need(item, "t", stat)),
                                      np.asarray(_need(item, "xi", stat), dtype=float))
            est = {"re": re, "im": im, "stderr": se}
        elif stat == "tail_report":
            rep = tail_report(ens, float(_need(item, "t", stat)),
                              _need(item, "R_grid", stat),
                              reference_slope=float(item.get("reference_slope", -1.0)))
            est = {
                "R_grid": rep.R_grid,
                "probs": rep.probs,
                "ci_half": rep.ci_half,
                "fitted_slope": rep.fitted_slope,
                "reference_slope": rep.reference_slope,
            }
        elif stat == "empirical_moment":
            e, ci, stable = empirical_moment(ens, float(_need(item, "p", stat)),
                                             float(_need(item, "t", stat)))
            est = {"estimate": e, "ci_half": ci, "stable": stable}
        elif stat == "p_variation":
            vals = [
                p_variation(p, float(_need(item, "p", stat)), item.get("mode", "jump_sum"))
                for p in ens.paths
            ]
            arr = np.asarray(vals, dtype=float)
            est = {"mean": float(arr.mean()), "median": float(np.median(arr))}
        elif stat == "exit_time":
            rep = exit_time_moment_check(ens, float(_need(item, "R", stat)),
                                         a=model.field.a, b=model.field.b)
            est = {
                "mean_exit": rep.mean_exit,
                "ci_half": rep.ci_half,
                "censored_fraction": rep.censored_fraction,
                "lower_shape": rep.lower_shape,
                "upper_shape": rep.upper_shape,
            }
        else:
            raise ConfigError(f"unknown statistic {stat!r}")
        reports.append({"statistic": stat, "params": {k: v for k, v in item.items() if k != "statistic"}, "estimate": est})
    _write(os.path.join(args.out, "stats.json"), dump_json(reports) + "\n")
    return 0


def cmd_verify(cfg, args):
    sel = cfg.get("verify", {}).get("checks") if cfg else None
    if sel is not None:
        if not sel:
            print("empty check selection", file=sys.stderr)
            return 2
        unknown = [n for n in sel if n not in verify_mod.CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks: {unknown}")
    results = verify_mod.run_suite(sel)
    payload = [
        {"check": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
        for r in results
    ]
    _write(os.path.join(args.out, "verify.json"), dump_json(payload) + "\n")
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.1f}s): {r.detail}")
    return 0 if all(r.passed for r in results) else 1


def cmd_indices(cfg, args):
    model = build_model(cfg)
    spec = cfg.get("indices", {})
    x = np.asarray(spec.get("x", [0.0] * model.dim), dtype=float)
    beta, delta = bg_indices_infinity(model, x)
    payload = {"x": x, "beta_infinity": beta, "delta_infinity": delta}
    if model.field.b is not None:
        box = spec.get("box", [[-math.pi, math.pi]] * model.dim)
        payload["beta_zero"] = bg_indices_zero(model, box, grid_n=int(spec.get("grid_n", 50)))
    _write(os.path.join(args.out, "indices.json"), dump_json(payload) + "\n")
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "symbol-eval": cmd_symbol_eval,
    "simulate": cmd_simulate,
    "stats": cmd_stats,
    "verify": cmd_verify,
    "indices": cmd_indices,
}


def main(argv=None):
    parser = argparse.ArgumentParser(prog="oslsim", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="path to the JSON run config")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--complex", dest="complex_symbol", action="store_true",
                        help="emit the complex symbol (required for non-symmetric measures)")
    args = parser.parse_args(argv)

    threads = args.threads or os.environ.get("OSLSIM_THREADS")
    if threads:
        try:
            import numba

            numba.set_num_threads(int(threads))
        except (ImportError, ValueError):
            pass

    cfg = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except OSError as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return 3
        except json.JSONDecodeError as exc:
            print(f"config parse error: {exc}", file=sys.stderr)
            return 2
    elif args.command != "verify":
        print("--config is required for this command", file=sys.stderr)
        return 2

    try:
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AdmissibilityError, ContractError) as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 1
    except IOError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
