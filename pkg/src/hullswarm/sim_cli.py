"""Command-line runner: generate or load a scenario, simulate, verify, export.

Exit codes: 0 all requested checks hold, 1 usage or configuration error,
2 at least one check failed, 3 the simulation diverged.

Outputs (per run directory): ``trajectory.csv``, ``metrics.csv``,
``certificates.json``, ``verdicts.json`` and optionally ``plot.svg``.  The
output directory defaults to ``$HULLSWARM_OUT`` or ``./hullswarm_out``.
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    BoundVerdict,
    check_dini_bound,
    check_frozen_hull_drift,
    check_input_norm_sandwich,
    compute_metrics,
    detect_set_tracking,
    metrics_to_csv,
    save_verdicts,
    ujlc_siiss_envelope,
    verify_siiss,
    verify_siiss_marks,
    verify_siss,
    siss_envelope,
)
from .certificates import build_certificates, save_certificates
from .dynamics import simulate, trajectory_to_csv
from .errors import (
    DivergenceError,
    HullswarmError,
    InvalidInputError,
    PreconditionError,
    WeightBoundError,
)
from .scenarios import (
    Scenario,
    generator,
    load_scenario,
    make_counterexample,
    make_jlc_acyclic,
    make_jlc_bidirectional,
    make_ujlc,
)

CHECK_NAMES = ("dini", "g2", "lemma7", "siss", "siiss", "tracking")
SCENARIO_NAMES = ("ujlc", "counterexample", "jlc_bidirectional", "jlc_acyclic")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise UsageError(message)


@dataclass
class RunConfig:
    scenario: str = "ujlc"
    n: int | None = None
    k: int | None = None
    d: int | None = None
    T: float | None = None
    tau_d: float | None = None
    seed: int = 0
    input_family: str | None = None
    scale: float | None = None
    dt: float | None = None
    horizon: float | None = None
    checks: list = field(default_factory=list)
    eps: float = 1e-3
    out: str = ""
    plot: bool = False
    batch: str | None = None


def build_parser() -> _Parser:
    p = _Parser(prog="hullswarm", description=__doc__)
    p.add_argument("--scenario", help="generator name or scenario JSON path")
    p.add_argument("--config", help="INI config file with [run] and [scenario]")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--T", type=float, help="uniform connectivity window")
    p.add_argument("--tau-d", type=float, dest="tau_d", help="dwell time")
    p.add_argument("--seed", type=int)
    p.add_argument("--input", dest="input_family",
                   choices=("zero", "bounded", "c1", "c2"))
    p.add_argument("--scale", type=float, help="input family magnitude")
    p.add_argument("--dt", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--check", action="append", choices=CHECK_NAMES, default=None)
    p.add_argument("--eps", type=float, help="set-tracking threshold")
    p.add_argument("--out", help="output directory")
    p.add_argument("--plot", action="store_true", default=None)
    p.add_argument("--batch", help="comma-separated scenario names, run concurrently")
    return p


def _load_config_file(path: str) -> RunConfig:
    cfg = RunConfig()
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise UsageError(f"cannot read config file {path}")
    try:
        if parser.has_section("run"):
            run = parser["run"]
            if "dt" in run:
                cfg.dt = run.getfloat("dt")
            if "horizon" in run:
                cfg.horizon = run.getfloat("horizon")
            if "checks" in run:
                cfg.checks = [c.strip() for c in run["checks"].split(",") if c.strip()]
            if "eps" in run:
                cfg.eps = run.getfloat("eps")
            if "out" in run:
                cfg.out = run["out"]
            if "plot" in run:
                cfg.plot = run.getboolean("plot")
            if "seed" in run:
                cfg.seed = run.getint("seed")
        if parser.has_section("scenario"):
            sc = parser["scenario"]
            if "file" in sc:
                cfg.scenario = sc["file"]
            elif "name" in sc:
                cfg.scenario = sc["name"]
            for key in ("n", "k", "d"):
                if key in sc:
                    setattr(cfg, key, sc.getint(key))
            if "t" in sc:
                cfg.T = sc.getfloat("t")
            if "tau_d" in sc:
                cfg.tau_d = sc.getfloat("tau_d")
            if "seed" in sc:
                cfg.seed = sc.getint("seed")
            if "input" in sc:
                cfg.input_family = sc["input"]
            if "scale" in sc:
                cfg.scale = sc.getfloat("scale")
    except (ValueError, configparser.Error) as exc:
        raise UsageError(f"malformed config file {path}: {exc}") from exc
    unknown = set(cfg.checks) - set(CHECK_NAMES)
    if unknown:
        raise UsageError(f"unknown checks in config: {sorted(unknown)}")
    return cfg


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = _load_config_file(args.config) if args.config else RunConfig()
    if args.scenario is not None:
        cfg.scenario = args.scenario
    for key in ("n", "k", "d", "T", "tau_d", "seed", "input_family", "scale",
                "dt", "horizon", "eps", "out", "batch"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    if args.check is not None:
        cfg.checks = args.check
    if args.plot is not None:
        cfg.plot = args.plot
    if not cfg.out:
        cfg.out = os.environ.get("HULLSWARM_OUT", "hullswarm_out")
    return cfg


_DEFAULT_SCALES = {"zero": 0.0, "bounded": 0.3, "c1": 0.5, "c2": 0.5}


def build_scenario(cfg: RunConfig) -> Scenario:
    name = cfg.scenario
    if name not in SCENARIO_NAMES:
        path = Path(name)
        if path.suffix == ".json" or path.exists():
            try:
                return load_scenario(path)
            except (OSError, ValueError, InvalidInputError) as exc:
                raise UsageError(f"cannot load scenario file {name}: {exc}") from exc
        generator(name)  # raises with the list of known names
    n = cfg.n or 4
    k = cfg.k or 3
    d = cfg.d or 2
    seed = cfg.seed
    if name == "ujlc":
        tau_d = cfg.tau_d or 0.25
        T = cfg.T or n * tau_d
        fam = cfg.input_family or "zero"
        scale = cfg.scale if cfg.scale is not None else _DEFAULT_SCALES[fam]
        return make_ujlc(
            n, k, d, T=T, tau_D=tau_d, seed=seed, input_family=fam,
            scale=scale, horizon=cfg.horizon,
        )
    if name == "counterexample":
        return make_counterexample(n, k, d, tau_D=cfg.tau_d or 0.5)
    maker = make_jlc_bidirectional if name == "jlc_bidirectional" else make_jlc_acyclic
    fam = cfg.input_family or "c1"
    scale = cfg.scale if cfg.scale is not None else _DEFAULT_SCALES.get(fam, 0.4)
    return maker(n, k, d, tau_D=cfg.tau_d or 0.5, seed=seed,
                 input_family=fam, scale=scale)


def _failed_verdict(reason_time=0.0) -> BoundVerdict:
    return BoundVerdict(
        holds=False,
        max_violation=math.inf,
        first_violation_time=reason_time,
        margin_series=np.array([]),
        tolerance=0.0,
    )


def _run_checks(cfg, sc, traj, metrics, bundle):
    verdicts = {}
    for check in cfg.checks:
        if check == "dini":
            verdicts[check] = check_dini_bound(metrics)
        elif check == "g2":
            verdicts[check] = check_input_norm_sandwich(metrics, sc.spec.n, sc.spec.k)
        elif check == "lemma7":
            verdicts[check] = check_frozen_hull_drift(traj, sc.spec, t0=0.0)
        elif check == "siss":
            if sc.ujlc_T is None:
                verdicts[check] = _failed_verdict()
                continue
            try:
                verdicts[check] = verify_siss(
                    traj, sc.spec, bundle, z_sup=sc.inputs.z_sup, metrics=metrics
                )
            except PreconditionError:
                verdicts[check] = _failed_verdict()
        elif check == "siiss":
            kind = sc.meta.get("kind")
            try:
                if sc.marks is not None and kind in ("bidirectional", "acyclic"):
                    verdicts[check] = verify_siiss_marks(
                        traj, sc.spec, bundle.delta_hat, sc.marks, kind,
                        z_integral_fn=sc.inputs.z_integral, metrics=metrics,
                    )
                elif sc.ujlc_T is not None:
                    verdicts[check] = verify_siiss(
                        traj, sc.spec, ujlc_siiss_envelope(bundle),
                        z_integral_fn=sc.inputs.z_integral, metrics=metrics,
                    )
                else:
                    verdicts[check] = _failed_verdict()
            except PreconditionError:
                verdicts[check] = _failed_verdict()
        elif check == "tracking":
            achieved, entry = detect_set_tracking(metrics, cfg.eps)
            verdicts[check] = BoundVerdict(
                holds=achieved,
                max_violation=float(metrics.dist[-1] - cfg.eps),
                first_violation_time=None if achieved else float(metrics.times[-1]),
                margin_series=cfg.eps - metrics.dist,
                tolerance=0.0,
            )
    return verdicts


def emit_plots(metrics, envelope_series, out_path) -> None:
    """Write a vector-graphics summary: error, envelope, input rate."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(metrics.times, metrics.dist, label="hull distance", lw=1.5)
    if envelope_series is not None:
        ax.plot(metrics.times, envelope_series, label="envelope", ls="--", lw=1.2)
    ax.plot(metrics.times, metrics.q, label="input rate q", lw=0.9, alpha=0.7)
    ax.set_xlabel("t")
    ax.set_yscale("symlog", linthresh=1e-6)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)


def run(cfg: RunConfig) -> int:
    if cfg.batch:
        return _run_batch(cfg)
    if cfg.dt is not None and cfg.dt <= 0:
        print("error: dt must be positive", file=sys.stderr)
        return 1
    if cfg.horizon is not None and cfg.horizon <= 0:
        print("error: horizon must be positive", file=sys.stderr)
        return 1
    if cfg.eps <= 0:
        print("error: eps must be positive", file=sys.stderr)
        return 1
    try:
        sc = build_scenario(cfg)
    except (UsageError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {out}: {exc}", file=sys.stderr)
        return 1

    t_end = min(cfg.horizon, sc.horizon) if cfg.horizon else sc.horizon
    dt = cfg.dt or sc.dt
    try:
        traj = simulate(sc.spec, sc.x0, sc.y0, dt, t_end)
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3
    except (WeightBoundError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    metrics = compute_metrics(traj, sc.spec)
    T_cert = sc.ujlc_T if sc.ujlc_T is not None else sc.spec.n * sc.spec.schedule.tau_D
    bundle = build_certificates(
        sc.spec.bounds, sc.spec.n, sc.spec.schedule.tau_D, T_cert
    )

    trajectory_to_csv(traj, out / "trajectory.csv")
    metrics_to_csv(metrics, out / "metrics.csv")
    save_certificates(bundle, out / "certificates.json")

    verdicts = _run_checks(cfg, sc, traj, metrics, bundle)
    save_verdicts(verdicts, out / "verdicts.json")

    if cfg.plot:
        envelope = None
        if sc.ujlc_T is not None:
            beta, gamma = siss_envelope(bundle)
            envelope = beta(metrics.dist[0], metrics.times) + gamma(sc.inputs.z_sup)
        emit_plots(metrics, envelope, out / "plot.svg")

    for name, verdict in verdicts.items():
        state = "ok" if verdict.holds else "FAIL"
        print(f"{sc.name}: check {name}: {state} "
              f"(max violation {verdict.max_violation:.3g})")
    if verdicts and not all(v.holds for v in verdicts.values()):
        return 2
    return 0


def _run_batch(cfg: RunConfig) -> int:
    names = [s.strip() for s in cfg.batch.split(",") if s.strip()]
    if not names:
        print("error: empty batch list", file=sys.stderr)
        return 1

    def one(name: str) -> int:
        from dataclasses import replace

        sub = replace(cfg, batch=None, scenario=name,
                      out=str(Path(cfg.out) / name))
        return run(sub)

    with ThreadPoolExecutor(max_workers=min(4, len(names))) as pool:
        codes = list(pool.map(one, names))
    return max(codes)


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except HullswarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
