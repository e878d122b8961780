"""Config-driven experiment runner.

    geowalk <sample|couple|budget|diagnose> --config <path> [--seed <u64>] [--out <dir>]

Exit codes: 0 success, 2 configuration error, 3 numerical-contract error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__, _backend
from .budget import accuracy_budget, budget_report
from .diagnostics import (one_step_sphere_contraction_reference, uniformity_stats,
                          wasserstein1, MAX_ASSIGNMENT_SIZE, MIN_UNIFORMITY_SAMPLES)
from .errors import ContractViolation, NumericalContractError
from .integrator import make_integrator
from .manifolds import CurvatureBounds, SphereModel, ellipsoid_model
from .rng import RngStream
from .walk import WalkConfig, run_coupled, run_walk

MODES = ("sample", "couple", "budget", "diagnose")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

_number = {"type": "number"}
_positive = {"type": "number", "exclusiveMinimum": 0}
_count = {"type": "integer", "minimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["model"],
    "properties": {
        "model": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind"],
                    "properties": {
                        "kind": {"const": "sphere"},
                        "radius": _positive,
                        "dim": {"type": "integer", "minimum": 1},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["kind", "semi_axes"],
                    "properties": {
                        "kind": {"const": "ellipsoid"},
                        "semi_axes": {"type": "array", "items": _positive, "minItems": 2},
                    },
                },
            ]
        },
        "mode": {"enum": list(MODES)},
        "walk": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "T": _positive,
                "N": {"type": "integer", "minimum": 1},
                "theta": {"type": "number", "minimum": 0},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
                "burn_in": _count,
            },
        },
        "chains": {"type": "integer", "minimum": 1},
        "start": {"type": "array", "items": _number},
        "eps": _positive,
        "D": _positive,
        "bounds": {
            "type": "object",
            "additionalProperties": False,
            "required": ["m2", "M2"],
            "properties": {"m2": _positive, "M2": _positive},
        },
        "couple": {
            "type": "object",
            "additionalProperties": False,
            "required": ["d0"],
            "properties": {"d0": _positive},
        },
        "diagnose": {
            "type": "object",
            "additionalProperties": False,
            "required": ["trace_a", "trace_b"],
            "properties": {
                "trace_a": {"type": "string"},
                "trace_b": {"type": "string"},
                "metric": {"enum": ["geodesic", "chord"]},
                "burn_in": _count,
                "final_only": {"type": "boolean"},
            },
        },
        "output_dir": {"type": "string"},
    },
}


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits: exact round trip for float64."""
    return format(float(x), ".17g")


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc
    return config


def build_model(section: dict):
    if section["kind"] == "sphere":
        return SphereModel(section.get("radius", 1.0), section.get("dim", 2))
    return ellipsoid_model(section["semi_axes"])


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()


def _threads(chains: int) -> int:
    cap = os.environ.get("GEOWALK_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError as exc:
            raise ConfigError(f"GEOWALK_THREADS must be an integer, got {cap!r}") from exc
    return max(1, min(chains, limit))


def _walk_config(config: dict, model) -> WalkConfig:
    w = config.get("walk", {})
    eps = config.get("eps")
    b = model.bounds
    theta = w.get("theta")
    burn_in = w.get("burn_in")
    if eps is not None and (theta is None or burn_in is None):
        acc = accuracy_budget(b, b.alpha, b.beta, eps)
        if theta is None and not model.exact_geodesic:
            theta = acc.theta_eps
        if burn_in is None:
            burn_in = acc.I_eps
    if theta is None:
        theta = 0.0
    if theta == 0.0 and not model.exact_geodesic:
        raise ConfigError("model has no exact geodesics: set walk.theta > 0 or eps")
    return WalkConfig(
        T=w.get("T", b.t_max),
        N=w.get("N", 1000),
        theta=float(theta),
        seed=w.get("seed", 0),
        burn_in=int(burn_in or 0),
    ).validate(b)


def run_sample(config: dict, out: Path) -> list[str]:
    model = build_model(config["model"])
    wc = _walk_config(config, model)
    chains = config.get("chains", 1)
    integrator = make_integrator(model, wc.theta)
    start = np.asarray(config["start"], dtype=float) if "start" in config else model.start_point()
    if start.size != model.ambient_dim:
        raise ConfigError(f"start has {start.size} coordinates, model needs {model.ambient_dim}")

    def one(chain_id):
        cfg = WalkConfig(wc.T, wc.N, wc.theta, wc.seed, wc.burn_in, stream_id=chain_id)
        return run_walk(model, integrator, cfg, start)

    with ThreadPoolExecutor(max_workers=_threads(chains)) as pool:
        traces = list(pool.map(one, range(chains)))

    dim = model.ambient_dim
    with open(out / "trace.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["chain_id", "step"] + [f"coord_{k}" for k in range(dim)] + ["star_calls"])
        for cid, tr in enumerate(traces):
            for step, p in enumerate(tr.points):
                calls = 0 if step == 0 else int(tr.star_calls_per_step[step - 1])
                writer.writerow([cid, step] + [fmt(c) for c in p] + [calls])

    samples = np.concatenate([tr.samples for tr in traces])
    uniformity = None
    if isinstance(model, SphereModel) and len(samples) >= MIN_UNIFORMITY_SAMPLES:
        uniformity = uniformity_stats(samples, model).to_dict()
    summary = {
        "chains": chains,
        "N": wc.N,
        "T": wc.T,
        "theta": wc.theta,
        "burn_in": wc.burn_in,
        "samples_after_burn_in": int(len(samples)),
        "uniformity": uniformity,
        "total_star_calls": int(sum(tr.total_star_calls for tr in traces)),
        "star_calls_per_chain": [tr.total_star_calls for tr in traces],
    }
    _write_json(out / "summary.json", summary)
    return ["trace.csv", "summary.json"]


def run_couple(config: dict, out: Path) -> list[str]:
    model = build_model(config["model"])
    if not isinstance(model, SphereModel):
        raise ConfigError("couple mode needs a sphere model (exact parallel transport)")
    if "couple" not in config:
        raise ConfigError("couple mode needs a 'couple' section with d0")
    wc = _walk_config(config, model)
    d0 = config["couple"]["d0"]
    if not d0 < math.pi * model.radius:
        raise ConfigError("couple.d0 must be below pi * radius")
    x = np.zeros(model.ambient_dim)
    x[0] = model.radius
    angle = d0 / model.radius
    y = np.zeros(model.ambient_dim)
    y[0], y[1] = model.radius * math.cos(angle), model.radius * math.sin(angle)
    tx, _ = run_coupled(model, x, y, wc.T, wc.N, RngStream(wc.seed, 0))
    dist = tx.distances
    with open(out / "distances.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "dist", "ratio"])
        for step, d in enumerate(dist):
            if step == 0:
                ratio = ""
            else:
                ratio = fmt(1.0 if dist[step - 1] < 1e-12 else d / dist[step - 1])
            writer.writerow([step, fmt(d), ratio])
    reference = None
    if model.dim == 2 and model.radius == 1.0 and wc.T <= math.pi / 2:
        reference = one_step_sphere_contraction_reference(angle, wc.T)
    _write_json(out / "couple.json", {
        "d0": d0,
        "T": wc.T,
        "N": wc.N,
        "one_step_mean_ratio_reference": reference,
        "worst_case_factor": math.cos(math.sqrt(model.bounds.m2) * wc.T),
        "final_dist": float(dist[-1]),
    })
    return ["distances.csv", "couple.json"]


def run_budget(config: dict, out: Path) -> list[str]:
    if "eps" not in config:
        raise ConfigError("budget mode needs eps")
    if "bounds" in config:
        b = CurvatureBounds(config["bounds"]["m2"], config["bounds"]["M2"])
    else:
        b = build_model(config["model"]).bounds
    T = config.get("walk", {}).get("T", b.t_max)
    report = budget_report(b, config["eps"], T=T, D=config.get("D"))
    payload = report.to_dict()
    payload.update({"m2": b.m2, "M2": b.M2, "T": T, "eps": config["eps"], "D": config.get("D", b.d_bound)})
    _write_json(out / "budget.json", payload)
    return ["budget.json"]


def _read_trace(path, burn_in: int, final_only: bool) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read trace {path}: {exc}") from exc
    if not rows:
        raise ConfigError(f"trace {path} is empty")
    coords = sorted((k for k in rows[0] if k.startswith("coord_")), key=lambda k: int(k.split("_")[1]))
    by_chain: dict[int, list] = {}
    for r in rows:
        by_chain.setdefault(int(r["chain_id"]), []).append((int(r["step"]), [float(r[k]) for k in coords]))
    pts = []
    for cid in sorted(by_chain):
        chain = sorted(by_chain[cid])
        if final_only:
            pts.append(chain[-1][1])
        else:
            pts.extend(p for step, p in chain if step >= burn_in)
    return np.asarray(pts)


def run_diagnose(config: dict, out: Path) -> list[str]:
    section = config.get("diagnose")
    if section is None:
        raise ConfigError("diagnose mode needs a 'diagnose' section")
    burn_in = section.get("burn_in", 0)
    final_only = section.get("final_only", False)
    a = _read_trace(section["trace_a"], burn_in, final_only)
    b = _read_trace(section["trace_b"], burn_in, final_only)
    n = min(len(a), len(b), MAX_ASSIGNMENT_SIZE)
    if a.shape[1] != b.shape[1]:
        raise ConfigError("traces have different ambient dimensions")
    model = build_model(config["model"])
    metric = section.get("metric", "geodesic")
    if metric == "geodesic":
        if not isinstance(model, SphereModel):
            raise ConfigError("geodesic metric needs a sphere model; use metric 'chord'")
        metric = model
    w = wasserstein1(a[:n], b[:n], metric)
    _write_json(out / "wasserstein.json", {
        "wasserstein1": w,
        "n": int(n),
        "metric": section.get("metric", "geodesic"),
        "trace_a": section["trace_a"],
        "trace_b": section["trace_b"],
    })
    return ["wasserstein.json"]


RUNNERS = {"sample": run_sample, "couple": run_couple, "budget": run_budget, "diagnose": run_diagnose}


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run(mode: str, config_path, seed: int | None = None, out_dir=None) -> int:
    """Run one experiment; returns the process exit code."""
    try:
        config = load_config(config_path)
        if config.get("mode", mode) != mode:
            raise ConfigError(f"config mode {config['mode']!r} does not match subcommand {mode!r}")
        if seed is not None:
            if not 0 <= seed < 2 ** 64:
                raise ConfigError("seed must be an unsigned 64-bit integer")
            config.setdefault("walk", {})["seed"] = seed
        out = Path(out_dir or config.get("output_dir") or ".")
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
        files = RUNNERS[mode](config, out)
        _write_json(out / "manifest.json", {
            "config_sha256": config_hash(config),
            "seed": config.get("walk", {}).get("seed", 0),
            "version": __version__,
            "backend": _backend.BACKEND,
            "mode": mode,
            "files": files,
        })
    except (ConfigError, ContractViolation) as exc:
        print(f"geowalk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalContractError as exc:
        print(f"geowalk: numerical contract violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="geowalk", description=__doc__.splitlines()[0])
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", required=True, help="JSON experiment config")
    parser.add_argument("--seed", type=int, default=None, help="override walk.seed")
    parser.add_argument("--out", default=None, help="override output_dir")
    args = parser.parse_args(argv)
    return run(args.mode, args.config, args.seed, args.out)


if __name__ == "__main__":
    sys.exit(main())
