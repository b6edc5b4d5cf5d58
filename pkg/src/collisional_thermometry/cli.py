"""Experiment runner: declarative JSON config in, CSV tables plus a JSON
manifest out.

Exit codes: 0 success, 1 invalid config, 2 numerical invariant violation,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import copy
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .channels import CollisionCouplings, ThermalParams
from .estimation import (
    NonUnimodalError,
    checkpoint_family,
    max_over_temperature,
    protocol_ancilla_family,
    qfi_sld,
    sweep_fig2,
    thermal_qfi,
    thermal_qfi_max,
)
from .infoflow import blp_measure, distinguishability, flow, mutual_information
from .linops import PROJ_0, PROJ_1, DensityOperator, InvariantViolation, QubitRegister, partial_trace_matrix
from .protocol import (
    AA_CONVENTIONS,
    RESET_MODES,
    RESET_NONE,
    MAX_QUBITS,
    ProtocolParams,
    run_protocol,
    run_time_resolved,
)

EXPERIMENTS = (
    "qfi-sweep",
    "qfi-vs-chains",
    "qfi-vs-rounds",
    "infoflow",
    "fullswap-qfi",
    "partialswap-qfi",
    "mutual-info",
)

DEFAULT_SMALL_ANGLE = math.pi / 100

DEFAULT_CONFIG = {
    "experiment": "qfi-sweep",
    "protocol": {
        "n_chains": 3,
        "n_rounds": 1,
        "temperature": 1.0,
        "omega": 1.0,
        "gamma": 1.0,
        "g_tau_sa": DEFAULT_SMALL_ANGLE,
        "j_tau_a": math.pi / 2,
        "reset_mode": "exact-gibbs",
        "tau_se": 1.0,
        "time_steps_per_collision": 200,
        "aa_collision": "isotropic",
    },
    "T_grid": {"min": 0.05, "max": 2.0, "count": 100, "spacing": "linear"},
    "N_list": [1, 2, 3, 4, 5, 6, 7, 8],
    "n_list": [1],
    "output": "results",
    "seed": 0,
    "threads": None,
}


@dataclass
class Diagnostic:
    field: str
    message: str

    def __str__(self):
        return f"{self.field}: {self.message}"


def merge_config(overrides: dict) -> dict:
    """Defaults overlaid with a (possibly partial) user config."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            cfg[key].update(value)
        else:
            cfg[key] = value
    return cfg


def validate(config: dict) -> list:
    """Empty list iff the config is runnable."""
    diags = []
    if config.get("experiment") not in EXPERIMENTS:
        diags.append(Diagnostic("experiment", f"must be one of {', '.join(EXPERIMENTS)}"))
    proto = config.get("protocol", {})
    n_chains = proto.get("n_chains", 0)
    if not isinstance(n_chains, int) or n_chains < 1:
        diags.append(Diagnostic("protocol.n_chains", "must be a positive integer"))
    elif n_chains + 1 > MAX_QUBITS:
        diags.append(
            Diagnostic("protocol.n_chains", f"n_chains exceeds memory cap {MAX_QUBITS - 1}")
        )
    if not isinstance(proto.get("n_rounds", 0), int) or proto.get("n_rounds", 0) < 1:
        diags.append(Diagnostic("protocol.n_rounds", "must be a positive integer"))
    for field in ("temperature", "omega", "gamma"):
        if not proto.get(field, 0) > 0:
            diags.append(Diagnostic(f"protocol.{field}", "must be > 0"))
    for field in ("g_tau_sa", "j_tau_a", "tau_se"):
        if proto.get(field, 0) < 0:
            diags.append(Diagnostic(f"protocol.{field}", "must be >= 0"))
    if proto.get("reset_mode") not in RESET_MODES:
        diags.append(Diagnostic("protocol.reset_mode", f"must be one of {', '.join(RESET_MODES)}"))
    if proto.get("aa_collision") not in AA_CONVENTIONS:
        diags.append(
            Diagnostic("protocol.aa_collision", f"must be one of {', '.join(AA_CONVENTIONS)}")
        )
    if proto.get("time_steps_per_collision", 0) < 1:
        diags.append(Diagnostic("protocol.time_steps_per_collision", "must be >= 1"))
    grid = config.get("T_grid", {})
    if not grid.get("min", 0) > 0:
        diags.append(Diagnostic("T_grid.min", "must be > 0"))
    if grid.get("max", 0) <= grid.get("min", 0):
        diags.append(Diagnostic("T_grid.max", "must be > T_grid.min"))
    if grid.get("count", 0) < 1:
        diags.append(Diagnostic("T_grid.count", "must be >= 1"))
    if grid.get("spacing") not in ("linear", "log"):
        diags.append(Diagnostic("T_grid.spacing", "must be 'linear' or 'log'"))
    for key in ("N_list", "n_list"):
        values = config.get(key, [])
        if not values:
            diags.append(Diagnostic(key, "must be nonempty"))
        elif any((not isinstance(v, int)) or v < 1 for v in values):
            diags.append(Diagnostic(key, "entries must be positive integers"))
        elif key == "N_list" and any(v + 1 > MAX_QUBITS for v in values):
            diags.append(Diagnostic(key, f"entries exceed memory cap {MAX_QUBITS - 1}"))
    if not isinstance(config.get("seed", 0), int):
        diags.append(Diagnostic("seed", "must be an integer"))
    return diags


def _protocol_params(config: dict) -> ProtocolParams:
    proto = config["protocol"]
    return ProtocolParams(
        n_chains=proto["n_chains"],
        n_rounds=proto["n_rounds"],
        thermal=ThermalParams(proto["temperature"], proto["omega"], proto["gamma"]),
        couplings=CollisionCouplings(proto["g_tau_sa"], proto["j_tau_a"]),
        reset_mode=proto["reset_mode"],
        tau_se=proto["tau_se"],
        time_steps_per_collision=proto["time_steps_per_collision"],
        aa_collision=proto["aa_collision"],
    )


def _temperature_grid(config: dict) -> np.ndarray:
    grid = config["T_grid"]
    if grid["spacing"] == "log":
        return np.geomspace(grid["min"], grid["max"], grid["count"])
    return np.linspace(grid["min"], grid["max"], grid["count"])


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return ""
    if math.isinf(x):
        raise InvariantViolation("non-finite value in result table")
    return format(x, ".12g")


def _write_csv(path: str, columns, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def _pool(config):
    threads = config.get("threads") or os.cpu_count() or 1
    return ThreadPoolExecutor(max_workers=threads)


def _exp_qfi_sweep(config):
    params = _protocol_params(config)
    t_grid = _temperature_grid(config)
    rows = sweep_fig2(params, t_grid, config["N_list"], config["n_list"])
    columns = ["temperature", "n_chains", "round_j", "qfi", "qfi_thermal", "ratio",
               "cumulative_fi"]
    rows.sort(key=lambda r: (r["n_chains"], r["round_j"], r["temperature"]))
    return columns, rows


def _exp_qfi_vs_chains(config):
    params = _protocol_params(config)
    grid = config["T_grid"]
    omega = params.thermal.omega
    qfi_th_max = thermal_qfi_max(omega)[1]

    def one(n_chains):
        p = dataclasses.replace(params, n_chains=n_chains)
        family = protocol_ancilla_family(p)
        f = lambda t: qfi_sld(family, t, omega=omega).qfi
        try:
            t_star, q_max = max_over_temperature(
                f, (grid["min"], grid["max"]), coarse_points=grid["count"]
            )
        except NonUnimodalError as err:
            t_star, q_max = max(err.maxima, key=lambda m: m[1])
        return {
            "n_chains": n_chains,
            "T_star": t_star,
            "qfi_max": q_max,
            "ratio": q_max / qfi_th_max,
        }

    with _pool(config) as pool:
        rows = list(pool.map(one, config["N_list"]))
    rows.sort(key=lambda r: r["n_chains"])
    return ["n_chains", "T_star", "qfi_max", "ratio"], rows


def _exp_qfi_vs_rounds(config):
    columns, rows = _exp_qfi_vs_chains(config)
    qfi_th_max = thermal_qfi_max(config["protocol"]["omega"])[1]
    out = []
    for row in rows:
        for n_rounds in config["n_list"]:
            cumulative = n_rounds * row["qfi_max"]
            out.append(
                {
                    "n_rounds": n_rounds,
                    "n_chains": row["n_chains"],
                    "qfi_max": row["qfi_max"],
                    "ratio": row["ratio"],
                    "cumulative_fi": cumulative,
                    "cumulative_ratio": cumulative / qfi_th_max,
                }
            )
    out.sort(key=lambda r: (r["n_chains"], r["n_rounds"]))
    return ["n_rounds", "n_chains", "qfi_max", "ratio", "cumulative_fi",
            "cumulative_ratio"], out


def _exp_infoflow(config):
    params = _protocol_params(config)
    # preparations evolve through the collisions; the thermal reset is not
    # applied to them (it would erase the distinguishability immediately)
    traces = run_time_resolved(params, (PROJ_0, PROJ_1), apply_thermalization=False)
    subjects = ["S"] + [f"A{k}" for k in range(1, params.n_chains + 1)] + ["joint"]
    rows = []
    for subject in subjects:
        series = distinguishability(traces[0], traces[1], subject)
        sigma = flow(series).sigma
        for seg in series.segments:
            chain = 0
            for label in seg.participants:
                if label.startswith("A"):
                    chain = int(label[1:])
            for i in range(seg.start, seg.stop):
                rows.append(
                    {
                        "time": series.times[i],
                        "subject": subject if subject != "joint" else "joint",
                        "distance": series.distance[i],
                        "sigma": sigma[i],
                        "event_kind": seg.kind,
                        "round_j": seg.round_index,
                        "chain_k": chain,
                    }
                )
    return ["time", "subject", "distance", "sigma", "event_kind", "round_j",
            "chain_k"], rows


def _checkpoint_rows(config, params):
    """QFI per participant at every post-collision checkpoint, over T_grid."""
    omega = params.thermal.omega
    plan = run_protocol(params, collect_joint=True).events
    t_grid = _temperature_grid(config)
    rows = []
    for idx, ev in enumerate(plan):
        if ev.kind == "thermalization":
            continue
        for party in ev.participants:
            family = checkpoint_family(params, idx, party)
            for t in t_grid:
                res = qfi_sld(family, t, omega=omega)
                rows.append(
                    {
                        "temperature": float(t),
                        "checkpoint": idx,
                        "event_kind": ev.kind,
                        "round_j": ev.round_index,
                        "party": party,
                        "qfi": res.qfi,
                    }
                )
    return ["temperature", "checkpoint", "event_kind", "round_j", "party", "qfi"], rows


def _exp_fullswap_qfi(config):
    params = _protocol_params(config)
    full = CollisionCouplings(math.pi / 2, math.pi / 2)
    params = dataclasses.replace(params, couplings=full)
    return _checkpoint_rows(config, params)


def _exp_partialswap_qfi(config):
    params = _protocol_params(config)
    return _checkpoint_rows(config, params)


def _exp_mutual_info(config):
    params = _protocol_params(config)
    rows = []
    for n_chains in config["N_list"]:
        p = dataclasses.replace(params, n_chains=n_chains)
        trace = run_protocol(p, collect_joint=True)
        reg = p.register
        for idx, ev in enumerate(trace.events):
            if ev.kind != "system-ancilla" or ev.round_index != p.n_rounds:
                continue
            ancilla = ev.participants[1]
            joint = DensityOperator(ev.post_state, reg)
            rows.append(
                {
                    "checkpoint": idx,
                    "n_chains": n_chains,
                    "chain_k": int(ancilla[1:]),
                    "mutual_information": mutual_information(joint, "S", ancilla),
                }
            )
    return ["checkpoint", "n_chains", "chain_k", "mutual_information"], rows


_RUNNERS = {
    "qfi-sweep": _exp_qfi_sweep,
    "qfi-vs-chains": _exp_qfi_vs_chains,
    "qfi-vs-rounds": _exp_qfi_vs_rounds,
    "infoflow": _exp_infoflow,
    "fullswap-qfi": _exp_fullswap_qfi,
    "partialswap-qfi": _exp_partialswap_qfi,
    "mutual-info": _exp_mutual_info,
}

THERMAL_QFI_MAX_REFERENCE = 3.80  # reported benchmark value for comparison


def run(config: dict, quiet: bool = False) -> int:
    """Execute one experiment; returns the process exit code."""
    diags = validate(config)
    if diags:
        for d in diags:
            print(f"invalid config -- {d}", file=sys.stderr)
        return 1
    experiment = config["experiment"]
    start = time.time()
    try:
        columns, rows = _RUNNERS[experiment](config)
    except InvariantViolation as err:
        print(f"numerical invariant violation: {err}", file=sys.stderr)
        return 2
    out_dir = config["output"]
    omega = config["protocol"]["omega"]
    t_star, qfi_max = thermal_qfi_max(omega)
    manifest = {
        "version": __version__,
        "experiment": experiment,
        "config": config,
        "wall_time_s": round(time.time() - start, 3),
        "derived": {
            "thermal_qfi_max": qfi_max,
            "thermal_qfi_max_T": t_star,
            "thermal_qfi_max_reference": THERMAL_QFI_MAX_REFERENCE,
            "small_angle_default": DEFAULT_SMALL_ANGLE,
        },
    }
    try:
        os.makedirs(out_dir, exist_ok=True)
        csv_path = os.path.join(out_dir, f"{experiment}.csv")
        _write_csv(csv_path, columns, rows)
        with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as err:
        print(f"I/O failure: {err}", file=sys.stderr)
        return 3
    if not quiet:
        print(f"{experiment}: {len(rows)} rows -> {csv_path}")
        print(
            f"thermal QFI max: computed {qfi_max:.6g} at T = {t_star:.6g} "
            f"(reference value {THERMAL_QFI_MAX_REFERENCE})"
        )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="colltherm",
        description="Layered collisional thermometer experiment runner",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="override experiment")
    parser.add_argument("--out", help="override output directory")
    parser.add_argument("--threads", type=int, help="worker pool size")
    parser.add_argument("--quiet", action="store_true")
    args = parser.parse_args(argv)
    overrides = {}
    if args.config:
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except OSError as err:
            print(f"I/O failure: {err}", file=sys.stderr)
            return 3
        except json.JSONDecodeError as err:
            print(f"invalid config -- could not parse JSON: {err}", file=sys.stderr)
            return 1
    config = merge_config(overrides)
    if args.experiment:
        config["experiment"] = args.experiment
    if args.out:
        config["output"] = args.out
    if args.threads:
        config["threads"] = args.threads
    return run(config, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
