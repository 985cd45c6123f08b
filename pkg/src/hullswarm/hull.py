"""Exact nearest-point projection onto polytopes spanned by finitely many points.

The polytope is given by its spanning points (the "vertices", which need not
be in general position, distinct, or affinely independent).  Projection is
computed by an active-set search over barycentric weights: the classic
min-norm-point iteration, which terminates with the unique nearest point and
a convex weight vector reproducing it.  Everything here is a pure function;
nothing is cached or mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "Projection",
    "project",
    "distance",
    "sq_distance_gradient",
    "alignment_bound",
]


@dataclass(frozen=True)
class Projection:
    """Nearest hull point, its distance to the query, and convex weights.

    ``nearest`` equals ``weights @ vertices`` by construction and ``weights``
    is a probability vector over the spanning points.
    """

    nearest: np.ndarray
    distance: float
    weights: np.ndarray


def _checked(x, vertices):
    x = np.asarray(x, dtype=float)
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[0] == 0:
        raise InvalidInputError("vertex set must be a nonempty (k, d) array")
    if x.ndim != 1 or x.shape[0] != verts.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: point has shape {x.shape}, vertices {verts.shape}"
        )
    if not (np.isfinite(x).all() and np.isfinite(verts).all()):
        raise InvalidInputError("nonfinite coordinates")
    return x, verts


def _affine_weights(sub):
    """Weights of the min-norm point in the affine hull of the rows of ``sub``.

    Solves the bordered Gram system; a least-squares solve keeps the result
    well defined (and deterministic) for rank-deficient vertex sets.
    """
    m = sub.shape[0]
    a = np.zeros((m + 1, m + 1))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    a[1:, 1:] = sub @ sub.T
    rhs = np.zeros(m + 1)
    rhs[0] = 1.0
    sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return sol[1:]


def _min_norm_weights(p, sq):
    """Convex weights of the min-norm point of the rows of ``p``.

    Active-set ("corral") iteration.  Ties in vertex selection and removal
    are broken by the lowest vertex index so the result is deterministic.
    """
    k = p.shape[0]
    tol = 1e-13 * max(1.0, float(sq.max()))
    corral = [int(np.argmin(sq))]
    lam = np.ones(1)
    z = p[corral[0]].copy()

    for _ in range(60 * k + 240):
        zz = float(z @ z)
        dots = p @ z
        j = int(np.argmin(dots))
        if dots[j] >= zz - tol or j in corral:
            break
        corral.append(j)
        lam = np.append(lam, 0.0)
        while True:
            sub = p[corral]
            alpha = _affine_weights(sub)
            if alpha.min() > 1e-12:
                lam = alpha
                z = alpha @ sub
                break
            # Step from lam toward alpha until a coordinate hits zero,
            # then evict that vertex and re-solve.
            shrink = lam - alpha
            mask = (alpha <= 1e-12) & (shrink > 1e-15)
            theta = float(np.min(lam[mask] / shrink[mask])) if mask.any() else 0.0
            theta = min(1.0, max(0.0, theta))
            lam = theta * alpha + (1.0 - theta) * lam
            lam[np.abs(lam) < 1e-12] = 0.0
            zero = np.flatnonzero(lam <= 0.0)
            if zero.size == 0:
                zero = np.array([int(np.argmin(lam))])
            drop = min(zero, key=lambda pos: corral[pos])
            corral.pop(drop)
            lam = np.delete(lam, drop)
            total = lam.sum()
            lam = lam / total if total > 0.0 else np.full(len(corral), 1.0 / len(corral))

    weights = np.zeros(k)
    weights[corral] = np.clip(lam, 0.0, None)
    weights /= weights.sum()
    return weights


def project(x, vertices) -> Projection:
    """Project ``x`` onto the convex hull of ``vertices`` (rows of a (k, d) array).

    The returned point minimizes the Euclidean distance and satisfies the
    variational inequality: the residual ``nearest - x`` makes a nonpositive
    inner product with ``nearest - v`` for every spanning point ``v``.
    """
    x, verts = _checked(x, vertices)
    if verts.shape[0] == 1:
        weights = np.ones(1)
    else:
        p = verts - x
        sq = np.einsum("ij,ij->i", p, p)
        weights = _min_norm_weights(p, sq)
    nearest = weights @ verts
    dist = float(np.linalg.norm(x - nearest))
    return Projection(nearest=nearest, distance=dist, weights=weights)


def distance(x, vertices) -> float:
    """Euclidean distance from ``x`` to the hull of ``vertices``."""
    return project(x, vertices).distance


def sq_distance_gradient(x, vertices) -> np.ndarray:
    """Gradient of the squared hull distance at ``x``: ``2 * (x - nearest)``."""
    proj = project(x, vertices)
    return 2.0 * (np.asarray(x, dtype=float) - proj.nearest)


def alignment_bound(x_a, x_b, vertices) -> tuple[float, float]:
    """Inner-product bound relating the projection residual to a distance gap.

    Returns ``(lhs, rhs)`` with ``lhs = <x_a - P(x_a), x_b - x_a>`` and
    ``rhs = d_a * |d_a - d_b|`` where ``d_a, d_b`` are the hull distances of
    the two points.  ``lhs <= rhs`` always holds; when ``d_a > d_b`` the
    sharper bound ``lhs <= -d_a * (d_a - d_b)`` holds as well.
    """
    xa, verts = _checked(x_a, vertices)
    xb, _ = _checked(x_b, verts)
    proj = project(xa, verts)
    lhs = float((xa - proj.nearest) @ (xb - xa))
    d_b = project(xb, verts).distance
    rhs = proj.distance * abs(proj.distance - d_b)
    return lhs, rhs
