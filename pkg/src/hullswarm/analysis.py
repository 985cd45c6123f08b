"""Derived error metrics along trajectories and numerical bound verification.

``compute_metrics`` projects every follower onto the instantaneous leader
hull and records the input magnitudes; the ``check_*`` / ``verify_*``
functions then test each analytic bound sample-by-sample and return a
``BoundVerdict`` with the worst violation and the full margin series.

Verification is empirical: a bound is confirmed on the sampled trajectory
at the stated tolerance, over the scenarios actually run, not proved for
all initial conditions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .certificates import SQRT2, CertificateBundle, jlc_discrete_bound, siss_envelope
from .dynamics import SystemSpec, Trajectory
from .errors import InvalidInputError, PreconditionError
from .hull import project
from .topology import classify_jlc, classify_ujlc, is_bidirectional, union_acyclic

__all__ = [
    "MetricSeries",
    "BoundVerdict",
    "SiissEnvelope",
    "compute_metrics",
    "check_input_norm_sandwich",
    "check_dini_bound",
    "check_frozen_hull_drift",
    "check_window_contraction",
    "verify_siss",
    "ujlc_siiss_envelope",
    "verify_siiss",
    "verify_siiss_marks",
    "detect_set_tracking",
    "metrics_to_csv",
    "metrics_from_csv",
    "verdicts_to_json",
    "save_verdicts",
    "load_verdicts",
]


@dataclass
class MetricSeries:
    """Per-sample tracking error and input magnitudes.

    ``psi`` holds squared follower-to-hull distances, ``Psi`` their max,
    ``dist`` its square root.  ``r`` is the largest leader speed, ``q`` adds
    the largest disturbance, and ``z_norm`` is the Euclidean norm of all
    inputs stacked (with ``u_norm``/``w_norm`` the two halves).
    """

    times: np.ndarray
    psi: np.ndarray
    Psi: np.ndarray
    dist: np.ndarray
    r: np.ndarray
    q: np.ndarray
    z_norm: np.ndarray
    u_norm: np.ndarray
    w_norm: np.ndarray


@dataclass
class BoundVerdict:
    """Outcome of one sampled-bound check.

    ``margin_series`` is bound-plus-tolerance minus observed (nonnegative
    everywhere iff the bound held); ``max_violation`` is the largest raw
    excess of observed over bound.
    """

    holds: bool
    max_violation: float
    first_violation_time: float | None
    margin_series: np.ndarray
    tolerance: float


def _verdict(times, observed, bound, tol) -> BoundVerdict:
    observed = np.asarray(observed, dtype=float)
    bound = np.asarray(bound, dtype=float)
    tol_arr = np.broadcast_to(np.asarray(tol, dtype=float), observed.shape)
    excess = observed - bound
    margin = bound + tol_arr - observed
    bad = np.flatnonzero(margin < 0.0)
    return BoundVerdict(
        holds=bad.size == 0,
        max_violation=float(excess.max()) if excess.size else 0.0,
        first_violation_time=float(times[bad[0]]) if bad.size else None,
        margin_series=margin,
        tolerance=float(np.max(tol_arr)) if observed.size else float(np.max(tol)),
    )


def compute_metrics(traj: Trajectory, spec: SystemSpec) -> MetricSeries:
    """Project every follower on the instantaneous hull and log input sizes."""
    m = len(traj.times)
    psi = np.empty((m, spec.n))
    r = np.empty(m)
    q = np.empty(m)
    u_norm = np.empty(m)
    w_norm = np.empty(m)
    for idx, t in enumerate(traj.times):
        hull = traj.y[idx]
        for i in range(spec.n):
            psi[idx, i] = project(traj.x[idx, i], hull).distance ** 2
        u_sq = w_sq = 0.0
        u_max = w_max = 0.0
        for j in range(1, spec.k + 1):
            mag = float(np.linalg.norm(spec.leader_input_u(j, traj.y[idx], t)))
            u_sq += mag * mag
            u_max = max(u_max, mag)
        for i in range(1, spec.n + 1):
            mag = float(np.linalg.norm(spec.disturbance_w(i, t)))
            w_sq += mag * mag
            w_max = max(w_max, mag)
        r[idx] = u_max
        q[idx] = u_max + w_max
        u_norm[idx] = np.sqrt(u_sq)
        w_norm[idx] = np.sqrt(w_sq)
    Psi = psi.max(axis=1)
    return MetricSeries(
        times=traj.times.copy(),
        psi=psi,
        Psi=Psi,
        dist=np.sqrt(Psi),
        r=r,
        q=q,
        z_norm=np.sqrt(u_norm**2 + w_norm**2),
        u_norm=u_norm,
        w_norm=w_norm,
    )


def check_input_norm_sandwich(
    metrics: MetricSeries, n: int, k: int, tol: float = 1e-9
) -> BoundVerdict:
    """Chain ``q <= |u| + |w| <= sqrt(2) |z| <= sqrt(2) max(sqrt n, sqrt k) q``.

    All three links are checked at every sample; the verdict reports the
    worst single-link excess.
    """
    split = metrics.u_norm + metrics.w_norm
    cap = SQRT2 * max(np.sqrt(n), np.sqrt(k)) * metrics.q
    # worst per-sample excess over the three links of the chain
    worst = np.stack(
        [
            metrics.q - split,
            split - SQRT2 * metrics.z_norm,
            SQRT2 * metrics.z_norm - cap,
        ]
    ).max(axis=0)
    return _verdict(metrics.times, worst, np.zeros_like(worst), tol)


def check_dini_bound(metrics: MetricSeries, tol_abs: float = 1e-7) -> BoundVerdict:
    """Forward-difference growth of the error never exceeds the input rate.

    Checks ``(dist(t+h) - dist(t)) / h <= max(q(t), q(t+h)) + C h`` for every
    consecutive sample pair.  ``C`` is a curvature allowance, twice the
    largest second-difference magnitude of the sampled series; the bound is
    exact only in the vanishing-step limit so a discrete check needs this
    slack.
    """
    t = metrics.times
    h = np.diff(t)
    if np.any(h <= 0):
        raise InvalidInputError("sample times must be strictly increasing")
    slopes = np.diff(metrics.dist) / h
    if len(slopes) >= 2:
        curv = np.abs(np.diff(slopes)) / (0.5 * (h[1:] + h[:-1]))
        C = 2.0 * float(curv.max())
    else:
        C = 0.0
    bound = np.maximum(metrics.q[:-1], metrics.q[1:])
    return _verdict(t[:-1], slopes, bound, C * h + tol_abs)


def check_frozen_hull_drift(
    traj: Trajectory, spec: SystemSpec, t0: float, tol: float = 1e-6
) -> BoundVerdict:
    """Swapping the moving hull for the hull frozen at ``t0`` moves any
    follower's distance by at most the integrated leader speed.

    For every follower and sample ``t >= t0`` checks
    ``| |x_i(t)|_now - |x_i(t)|_frozen | <= integral of r over [t0, t]``
    with the integral taken by the trapezoid rule on the sample grid.
    """
    idx0 = int(np.argmin(np.abs(traj.times - t0)))
    if abs(traj.times[idx0] - t0) > 1e-9:
        raise InvalidInputError("t0 must be a sample instant")
    frozen = traj.y[idx0]
    times = traj.times[idx0:]
    r = np.empty(len(times))
    for off, t in enumerate(times):
        u_max = 0.0
        for j in range(1, spec.k + 1):
            u_max = max(
                u_max, float(np.linalg.norm(spec.leader_input_u(j, traj.y[idx0 + off], t)))
            )
        r[off] = u_max
    integral = np.concatenate(
        [[0.0], np.cumsum(0.5 * (r[1:] + r[:-1]) * np.diff(times))]
    )
    gaps = np.empty((len(times), spec.n))
    for off in range(len(times)):
        hull_now = traj.y[idx0 + off]
        for i in range(spec.n):
            d_now = project(traj.x[idx0 + off, i], hull_now).distance
            d_frozen = project(traj.x[idx0 + off, i], frozen).distance
            gaps[off, i] = abs(d_now - d_frozen)
    worst = gaps.max(axis=1)
    return _verdict(times, worst, integral, tol)


def check_window_contraction(
    metrics: MetricSeries,
    eta_star: float,
    T_star: float,
    tol: float = 1e-6,
) -> BoundVerdict:
    """With zero inputs, one full window contracts the error by ``eta_star``.

    Checks ``dist(t + T_star) <= eta_star * dist(t) + tol`` at every sample
    ``t`` for which ``t + T_star`` is still on the grid.
    """
    t = metrics.times
    targets = t + T_star
    idx = np.searchsorted(t, targets - 1e-9)
    ok = idx < len(t)
    idx = idx[ok]
    base = np.flatnonzero(ok)
    aligned = np.abs(t[idx] - targets[ok]) <= 1e-6 + 1e-9 * T_star
    base, idx = base[aligned], idx[aligned]
    if base.size == 0:
        raise InvalidInputError("horizon too short: no sample pair spans one window")
    return _verdict(
        t[base], metrics.dist[idx], eta_star * metrics.dist[base], tol
    )


def verify_siss(
    traj: Trajectory,
    spec: SystemSpec,
    bundle: CertificateBundle,
    z_sup: float,
    metrics: MetricSeries | None = None,
    tol: float = 1e-6,
) -> BoundVerdict:
    """Sup-norm envelope check: ``dist(t) <= beta(dist(0), t) + gamma(z_sup)``.

    Requires the schedule to be uniformly jointly leader-connected with the
    bundle's window; otherwise the envelope is not in force and a
    precondition error is raised.
    """
    if not classify_ujlc(spec.schedule, bundle.T):
        raise PreconditionError(
            f"schedule is not uniformly jointly leader-connected with window {bundle.T}"
        )
    if metrics is None:
        metrics = compute_metrics(traj, spec)
    beta, gamma = siss_envelope(bundle)
    bound = beta(metrics.dist[0], metrics.times) + gamma(z_sup)
    return _verdict(metrics.times, metrics.dist, bound, tol)


@dataclass(frozen=True)
class SiissEnvelope:
    """Integral-gain envelope: decay factor per window plus gain integrand."""

    decay: float
    window: float
    gain_coeff: float
    requires: str
    ujlc_T: float | None = None


def ujlc_siiss_envelope(bundle: CertificateBundle) -> SiissEnvelope:
    return SiissEnvelope(
        decay=bundle.c_hat,
        window=bundle.T_star,
        gain_coeff=(4.0 * bundle.n + 1.0) * SQRT2,
        requires="ujlc",
        ujlc_T=bundle.T,
    )


def verify_siiss(
    traj: Trajectory,
    spec: SystemSpec,
    envelope: SiissEnvelope,
    z_integral_fn=None,
    metrics: MetricSeries | None = None,
    tol: float = 1e-6,
) -> BoundVerdict:
    """Integral envelope check:
    ``dist(t) <= decay^floor(t/window) dist(0) + gain_coeff * int_0^t |z|``.

    ``z_integral_fn(t1, t2)`` may supply the exact input integral; otherwise
    the trapezoid rule on the sampled ``|z|`` is used.
    """
    if envelope.requires == "ujlc":
        if envelope.ujlc_T is None or not classify_ujlc(
            spec.schedule, envelope.ujlc_T
        ):
            raise PreconditionError(
                "schedule is not uniformly jointly leader-connected"
            )
    if metrics is None:
        metrics = compute_metrics(traj, spec)
    t = metrics.times
    if z_integral_fn is not None:
        integral = np.array([z_integral_fn(0.0, ti) for ti in t])
    else:
        steps = 0.5 * (metrics.z_norm[1:] + metrics.z_norm[:-1]) * np.diff(t)
        integral = np.concatenate([[0.0], np.cumsum(steps)])
    decay = envelope.decay ** np.floor(t / envelope.window)
    bound = decay * metrics.dist[0] + envelope.gain_coeff * integral
    return _verdict(t, metrics.dist, bound, tol)


def verify_siiss_marks(
    traj: Trajectory,
    spec: SystemSpec,
    delta_hat: float,
    marks,
    kind: str,
    z_integral_fn=None,
    metrics: MetricSeries | None = None,
    tol: float = 1e-6,
) -> BoundVerdict:
    """Mark-recursion envelope check at the interval boundaries ``marks``.

    ``kind`` is ``"bidirectional"`` or ``"acyclic"``; the schedule must be
    jointly leader-connected on the horizon and of the stated class.
    """
    if not classify_jlc(spec.schedule):
        raise PreconditionError("schedule is not jointly leader-connected")
    if kind == "bidirectional":
        if not all(is_bidirectional(g) for _, g in spec.schedule.pieces):
            raise PreconditionError("follower graphs are not bidirectional")
    elif kind == "acyclic":
        if not union_acyclic(spec.schedule):
            raise PreconditionError("follower union graph is not acyclic")
    else:
        raise InvalidInputError(f"unknown schedule class {kind!r}")
    if metrics is None:
        metrics = compute_metrics(traj, spec)
    marks = np.asarray(marks, dtype=float)
    if len(marks) < 2 or abs(marks[0]) > 1e-9 or np.any(np.diff(marks) <= 0):
        raise InvalidInputError("marks must increase strictly from 0")

    t = metrics.times
    idx = np.array([int(np.argmin(np.abs(t - m))) for m in marks])
    if np.max(np.abs(t[idx] - marks)) > 1e-6:
        raise InvalidInputError("every mark must be (near) a sample instant")
    if z_integral_fn is not None:
        interval_integrals = [
            float(z_integral_fn(marks[i], marks[i + 1])) for i in range(len(marks) - 1)
        ]
    else:
        steps = 0.5 * (metrics.z_norm[1:] + metrics.z_norm[:-1]) * np.diff(t)
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        interval_integrals = [
            float(cum[idx[i + 1]] - cum[idx[i]]) for i in range(len(marks) - 1)
        ]
    observed = metrics.dist[idx[1:]]
    bound = np.array(
        [
            jlc_discrete_bound(
                delta_hat, spec.n, metrics.dist[idx[0]], interval_integrals[: K + 1]
            )
            for K in range(len(marks) - 1)
        ]
    )
    return _verdict(marks[1:], observed, bound, tol)


def detect_set_tracking(metrics: MetricSeries, eps: float):
    """Whether the error enters and stays below ``eps`` until the horizon end.

    Returns ``(achieved, entry_time)``; the entry time is the first sample
    after which the error never again reaches ``eps``.
    """
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    above = np.flatnonzero(metrics.dist >= eps)
    if above.size == 0:
        return True, float(metrics.times[0])
    if above[-1] == len(metrics.dist) - 1:
        return False, None
    return True, float(metrics.times[above[-1] + 1])


def metrics_to_csv(metrics: MetricSeries, path) -> None:
    n = metrics.psi.shape[1]
    cols = ["t", "dist", "Psi", "r", "q", "z_norm", "u_norm", "w_norm"]
    cols += [f"psi_{i}" for i in range(1, n + 1)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for idx in range(len(metrics.times)):
            row = [
                metrics.times[idx],
                metrics.dist[idx],
                metrics.Psi[idx],
                metrics.r[idx],
                metrics.q[idx],
                metrics.z_norm[idx],
                metrics.u_norm[idx],
                metrics.w_norm[idx],
            ] + metrics.psi[idx].tolist()
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def metrics_from_csv(path) -> MetricSeries:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [list(map(float, line.split(","))) for line in fh if line.strip()]
    if header[:8] != ["t", "dist", "Psi", "r", "q", "z_norm", "u_norm", "w_norm"]:
        raise InvalidInputError(f"malformed metrics file {path}")
    data = np.array(rows)
    return MetricSeries(
        times=data[:, 0],
        psi=data[:, 8:],
        Psi=data[:, 2],
        dist=data[:, 1],
        r=data[:, 3],
        q=data[:, 4],
        z_norm=data[:, 5],
        u_norm=data[:, 6],
        w_norm=data[:, 7],
    )


def verdicts_to_json(verdicts: dict) -> list:
    """Order-stable list of verdict records keyed by check name."""
    return [
        {
            "check_name": name,
            "holds": bool(v.holds),
            "max_violation": float(v.max_violation),
            "first_violation_time": (
                None if v.first_violation_time is None else float(v.first_violation_time)
            ),
        }
        for name, v in verdicts.items()
    ]


def save_verdicts(verdicts: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(verdicts_to_json(verdicts), fh, indent=2)
        fh.write("\n")


def load_verdicts(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
