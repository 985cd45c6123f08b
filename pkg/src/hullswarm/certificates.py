"""Closed-form contraction rates and disturbance gains for the tracking error.

Everything here is derived from four numbers: the weight bounds, the number
of followers ``n``, the dwell time ``tau_D``, and a uniform connectivity
window ``T``.  Two families of curves describe how the worst follower
distance to the leader hull evolves across a dwell/window cycle:

* ``direct_link_gain`` (and its single-dwell sibling ``dwell_gain``) bound
  the contraction earned while a leader arc is continuously present;
* ``relay_link_gain`` (and ``relay_dwell_gain``) propagate a contraction
  already earned by one follower to a downstream follower.

Chaining these per-follower contractions across one window of length
``T_star = n * (T + 2 * tau_D)`` yields a per-window factor strictly inside
(0, 1); geometric iteration of that factor plus a linear disturbance gain
gives the sup-norm envelope, while the dwell-only chains give the
integral-gain envelopes and the mark-recursion bound.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import WeightBounds
from .errors import CertificateError, InvalidInputError

__all__ = [
    "CertificateBundle",
    "direct_link_gain",
    "relay_link_gain",
    "gamma_constants",
    "window_contraction_chain",
    "build_certificates",
    "siss_envelope",
    "dwell_gain",
    "holdover_gain",
    "relay_dwell_gain",
    "siiss_functions",
    "siiss_envelope_ujlc",
    "siiss_recursion_jlc",
    "ujlc_discrete_bound",
    "jlc_discrete_bound",
    "certificate_report",
    "save_certificates",
    "load_certificates",
]

SQRT2 = math.sqrt(2.0)

# Chain values are provably inside (0, 1) but can round to 1.0 at double
# precision when the relaxation exponents are large; clamping to the largest
# representable double below 1 keeps every envelope finite and only makes the
# certified factor more conservative by one ulp.
ONE_BELOW = float(np.nextafter(1.0, 0.0))


def _require(cond: bool, msg: str):
    if not cond:
        raise InvalidInputError(msg)


def _domain(s, lo, hi, what):
    s = np.asarray(s, dtype=float)
    if np.any(s < lo - 1e-12) or np.any(s > hi + 1e-12):
        raise InvalidInputError(f"{what} must lie in [{lo}, {hi}]")
    return s


def direct_link_gain(s, bounds: WeightBounds, n: int, tau_D: float, T_star: float):
    """Distance contraction profile when a leader arc holds for one dwell.

    Decays from 1 over the dwell [0, tau_D] at rate b_lo + (n-1) a_hi, then
    relaxes back toward 1 (but never reaches it) over [tau_D, T_star] while
    the arc may be gone.  Accepts scalars or arrays.
    """
    _require(n >= 2, "need n >= 2")
    _require(0 < tau_D < T_star, "need 0 < tau_D < T_star")
    s = _domain(s, 0.0, T_star, "s")
    lam = bounds.b_lo + (n - 1) * bounds.a_hi
    decay = (bounds.b_lo * np.exp(-lam * s) + (n - 1) * bounds.a_hi) / lam
    floor = (bounds.b_lo * math.exp(-lam * tau_D) + (n - 1) * bounds.a_hi) / lam
    relax = 1.0 - np.exp(-(n - 1) * bounds.a_hi * (s - tau_D)) * (1.0 - floor)
    out = np.where(s < tau_D, decay, relax)
    return float(out) if out.ndim == 0 else out


def relay_link_gain(
    s, mu0: float, bounds: WeightBounds, n: int, tau_D: float, T_star: float
):
    """Contraction profile relayed through a follower already at level ``mu0``.

    Same two-branch shape as ``direct_link_gain`` with the dwell decay run at
    rate (n-2) a_hi + a_lo and seeded by ``mu0`` in (0, 1); the relaxation
    branch uses rate (n-1) a_hi.
    """
    _require(n >= 2, "need n >= 2")
    _require(0.0 < mu0 < 1.0, "seed contraction must lie in (0, 1)")
    _require(0 < tau_D < T_star, "need 0 < tau_D < T_star")
    s = _domain(s, 0.0, T_star, "s")
    lam1 = (n - 2) * bounds.a_hi + bounds.a_lo
    decay = (
        (n - 2) * bounds.a_hi
        + (mu0 + (1.0 - mu0) * np.exp(-lam1 * s)) * bounds.a_lo
    ) / lam1
    floor = (
        (n - 2) * bounds.a_hi
        + (mu0 + (1.0 - mu0) * math.exp(-lam1 * tau_D)) * bounds.a_lo
    ) / lam1
    relax = 1.0 - np.exp(-(n - 1) * bounds.a_hi * (s - tau_D)) * (1.0 - floor)
    out = np.where(s < tau_D, decay, relax)
    return float(out) if out.ndim == 0 else out


def gamma_constants(
    bounds: WeightBounds, n: int, tau_D: float, T_star: float
) -> tuple[float, float]:
    """Linear sup-norm disturbance gains paired with the two link gains."""
    _require(n >= 2, "need n >= 2")
    top = SQRT2 * (1.0 + (n - 1) * bounds.a_hi * T_star)
    gamma1 = top / ((n - 1) * bounds.a_hi)
    gamma2 = top / ((n - 2) * bounds.a_hi + bounds.a_lo)
    return gamma1, gamma2


def window_contraction_chain(
    bounds: WeightBounds, n: int, tau_D: float, T: float
) -> np.ndarray:
    """Per-follower contraction levels accumulated across one window.

    The first entry is the direct-link level at the window end; each later
    entry relays the previous level over the remaining sub-windows.  The
    chain is strictly increasing and stays inside (0, 1); its last entry is
    the per-window contraction factor of the whole group.
    """
    _require(n >= 2, "need n >= 2")
    T0 = T + 2.0 * tau_D
    T_star = n * T0
    chain = [min(float(direct_link_gain(T_star, bounds, n, tau_D, T_star)), ONE_BELOW)]
    for j in range(2, n + 1):
        nxt = relay_link_gain((n - j + 1) * T0, chain[-1], bounds, n, tau_D, T_star)
        chain.append(min(float(nxt), ONE_BELOW))
    return np.array(chain)


def dwell_gain(s, bounds: WeightBounds, n: int, tau_D: float):
    """Single-dwell contraction for a continuously present leader arc.

    Strictly decreasing on [0, tau_D] with value 1 at 0.
    """
    _require(n >= 2, "need n >= 2")
    s = _domain(s, 0.0, tau_D, "s")
    lam = bounds.b_lo + (n - 1) * bounds.a_hi
    out = (bounds.b_lo * np.exp(-lam * s) + (n - 1) * bounds.a_hi) / lam
    return float(out) if out.ndim == 0 else out


def holdover_gain(s, eps0: float, bounds: WeightBounds, n: int):
    """Forward-propagation of an earned contraction level ``eps0``.

    Strictly increasing from ``eps0`` at 0 with limit 1; defined for all
    s >= 0.
    """
    _require(n >= 2, "need n >= 2")
    if not 0.0 < eps0 < 1.0:
        raise InvalidInputError("contraction level must lie in (0, 1)")
    s = _domain(np.asarray(s, dtype=float), 0.0, math.inf, "s")
    out = 1.0 - np.exp(-(n - 1) * bounds.a_hi * s) * (1.0 - eps0)
    return float(out) if out.ndim == 0 else out


def relay_dwell_gain(s, delta0: float, bounds: WeightBounds, n: int, tau_D: float):
    """Single-dwell relay of a contraction level ``delta0`` to a neighbor.

    Strictly decreasing on [0, tau_D] with value 1 at 0; mirrors the dwell
    branch of ``relay_link_gain`` seeded at ``delta0``.
    """
    _require(n >= 2, "need n >= 2")
    if not 0.0 < delta0 < 1.0:
        raise InvalidInputError("contraction level must lie in (0, 1)")
    s = _domain(s, 0.0, tau_D, "s")
    lam1 = (n - 2) * bounds.a_hi + bounds.a_lo
    out = (
        (n - 2) * bounds.a_hi
        + (delta0 + (1.0 - delta0) * np.exp(-lam1 * s)) * bounds.a_lo
    ) / lam1
    return float(out) if out.ndim == 0 else out


def siiss_functions(bounds: WeightBounds, n: int, tau_D: float):
    """The (decreasing, increasing) gain pair used by the integral envelopes."""

    def delta(s):
        return dwell_gain(s, bounds, n, tau_D)

    def phi(eps, s):
        return holdover_gain(s, eps, bounds, n)

    return delta, phi


@dataclass(frozen=True)
class CertificateBundle:
    """Every constant and chain needed to evaluate the error envelopes."""

    n: int
    T: float
    tau_D: float
    bounds: WeightBounds
    lambda_: float
    lambda1: float
    c0: float
    T0: float
    T_star: float
    eta_chain: np.ndarray
    eta_star: float
    gamma1: float
    gamma2: float
    c_chain: np.ndarray
    c_hat: float
    delta_chain: np.ndarray
    delta_hat: float


def build_certificates(
    bounds: WeightBounds, n: int, tau_D: float, T: float
) -> CertificateBundle:
    """Assemble and validate the full constant/chain bundle."""
    _require(n >= 2, "need n >= 2")
    _require(tau_D > 0, "need tau_D > 0")
    _require(T > 0, "need T > 0")
    T0 = T + 2.0 * tau_D
    T_star = n * T0
    lam = bounds.b_lo + (n - 1) * bounds.a_hi
    lam1 = (n - 2) * bounds.a_hi + bounds.a_lo
    c0 = (1.0 + (n - 1) * bounds.a_hi * tau_D) / lam
    gamma1, gamma2 = gamma_constants(bounds, n, tau_D, T_star)

    eta_chain = window_contraction_chain(bounds, n, tau_D, T)
    eta_star = float(eta_chain[-1])

    delta1 = float(dwell_gain(tau_D, bounds, n, tau_D))
    c_chain = [min(float(holdover_gain(T_star, delta1, bounds, n)), ONE_BELOW)]
    for _ in range(2, n + 1):
        relayed = min(
            float(relay_dwell_gain(tau_D, c_chain[-1], bounds, n, tau_D)), ONE_BELOW
        )
        c_chain.append(min(float(holdover_gain(T_star, relayed, bounds, n)), ONE_BELOW))
    c_chain = np.array(c_chain)

    delta_chain = [delta1]
    for _ in range(2, n + 1):
        held = min(float(holdover_gain(tau_D, delta_chain[-1], bounds, n)), ONE_BELOW)
        delta_chain.append(
            min(float(relay_dwell_gain(tau_D, held, bounds, n, tau_D)), ONE_BELOW)
        )
    delta_chain = np.array(delta_chain)

    bundle = CertificateBundle(
        n=n,
        T=T,
        tau_D=tau_D,
        bounds=bounds,
        lambda_=lam,
        lambda1=lam1,
        c0=c0,
        T0=T0,
        T_star=T_star,
        eta_chain=eta_chain,
        eta_star=eta_star,
        gamma1=gamma1,
        gamma2=gamma2,
        c_chain=c_chain,
        c_hat=float(c_chain[-1]),
        delta_chain=delta_chain,
        delta_hat=float(delta_chain[-1]),
    )
    _validate(bundle)
    return bundle


def _validate(bundle: CertificateBundle):
    for name, chain in (
        ("eta", bundle.eta_chain),
        ("c", bundle.c_chain),
        ("delta", bundle.delta_chain),
    ):
        if not (np.all(chain > 0.0) and np.all(chain < 1.0)):
            raise CertificateError(f"{name}-chain left (0, 1): {chain}")
        if np.any(np.diff(chain) < -1e-15):
            raise CertificateError(f"{name}-chain is not nondecreasing: {chain}")
    if not bundle.gamma1 > bundle.c0:
        raise CertificateError("gamma1 must dominate c0")


def siss_envelope(bundle: CertificateBundle):
    """Sup-norm envelope: decaying term plus a linear gain on ``sup |z|``.

    ``beta(r, t)`` applies the per-window factor once per completed window;
    ``gamma(s)`` is linear with the accumulated per-window gain divided by
    the contraction deficit.
    """
    if not 0.0 < bundle.eta_star < 1.0:
        raise CertificateError("per-window contraction factor must lie in (0, 1)")
    eta, T_star, n = bundle.eta_star, bundle.T_star, bundle.n
    coeff = (
        ((1.0 + 2.0 * SQRT2) * eta * T_star + (n - 1) * bundle.gamma2 + bundle.gamma1)
        / (1.0 - eta)
        + T_star
    )

    def beta(r, t):
        return eta ** np.floor(np.asarray(t, dtype=float) / T_star) * r

    def gamma(s):
        return coeff * s

    return beta, gamma


def siiss_envelope_ujlc(bounds: WeightBounds, n: int, tau_D: float, T: float):
    """Integral-gain envelope under uniform-window connectivity.

    Returns the per-window contraction factor and the linear integrand gain
    ``gamma(s) = (4n + 1) * sqrt(2) * s``.
    """
    bundle = build_certificates(bounds, n, tau_D, T)

    def gamma(s):
        return (4.0 * n + 1.0) * SQRT2 * s

    return bundle.c_hat, gamma


def ujlc_discrete_bound(
    c_hat: float, n: int, x0_dist: float, window_integrals
) -> float:
    """Window-sampled envelope value after ``K = len(window_integrals)`` windows.

    ``window_integrals[j]`` is the integral of ``|z|`` over the (j+1)-th
    window of length ``T_star``.
    """
    integrals = np.asarray(window_integrals, dtype=float)
    K = len(integrals)
    powers = c_hat ** np.arange(K - 1, -1, -1)
    return c_hat**K * x0_dist + (4.0 * n + 1.0) * SQRT2 * float(powers @ integrals)


def jlc_discrete_bound(
    delta_hat: float, n: int, x0_dist: float, interval_integrals
) -> float:
    """Mark-sampled envelope value after ``K = len(interval_integrals)`` marks.

    ``interval_integrals[i]`` is the integral of ``|z|`` over the (i+1)-th
    inter-mark interval.
    """
    integrals = np.asarray(interval_integrals, dtype=float)
    K = len(integrals)
    powers = delta_hat ** np.arange(K - 1, -1, -1)
    return delta_hat**K * x0_dist + (4.0 * n + 1.0) * SQRT2 * float(
        powers @ integrals
    )


def siiss_recursion_jlc(
    bounds: WeightBounds, n: int, tau_D: float, time_marks
):
    """Mark-recursion integral envelope for jointly connected schedules.

    ``time_marks`` is the increasing sequence of interval boundaries
    (starting at 0) at which the recursion is evaluated; each inter-mark
    interval must contain ``n`` leader-connected sub-windows for the bound
    to apply.  Returns the per-interval contraction factor and a callable
    ``discrete_bound(x0_dist, interval_integrals)``.
    """
    marks = np.asarray(time_marks, dtype=float)
    if marks.ndim != 1 or len(marks) < 2:
        raise InvalidInputError("need at least two time marks")
    if abs(marks[0]) > 1e-12:
        raise InvalidInputError("mark sequence must start at 0")
    if np.any(np.diff(marks) <= 0):
        raise InvalidInputError("marks must be strictly increasing")
    bundle = build_certificates(bounds, n, tau_D, T=max(tau_D, marks[1]))
    delta_hat = bundle.delta_hat

    def discrete_bound(x0_dist, interval_integrals):
        if len(interval_integrals) > len(marks) - 1:
            raise InvalidInputError("more integrals than inter-mark intervals")
        return jlc_discrete_bound(delta_hat, n, x0_dist, interval_integrals)

    return delta_hat, discrete_bound


def certificate_report(bundle: CertificateBundle) -> dict:
    """Flat document with every derived constant, suitable for JSON export."""
    return {
        "n": bundle.n,
        "T": bundle.T,
        "tau_D": bundle.tau_D,
        "a_lo": bundle.bounds.a_lo,
        "a_hi": bundle.bounds.a_hi,
        "b_lo": bundle.bounds.b_lo,
        "lambda": bundle.lambda_,
        "lambda1": bundle.lambda1,
        "c0": bundle.c0,
        "T0": bundle.T0,
        "T_star": bundle.T_star,
        "eta_chain": bundle.eta_chain.tolist(),
        "eta_star": bundle.eta_star,
        "gamma1": bundle.gamma1,
        "gamma2": bundle.gamma2,
        "c_chain": bundle.c_chain.tolist(),
        "c_hat": bundle.c_hat,
        "delta_chain": bundle.delta_chain.tolist(),
        "delta_hat": bundle.delta_hat,
    }


def save_certificates(bundle: CertificateBundle, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(certificate_report(bundle), fh, indent=2)
        fh.write("\n")


def load_certificates(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
