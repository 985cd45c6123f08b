"""Projecting points onto a polytope spanned by a handful of leaders.

The projector returns the nearest hull point together with convex weights
over the spanning points, so the result can be fed straight back into
leader-coordinate computations.  This script walks through the basic calls
and checks the optimality certificate by hand.
"""

import numpy as np

from hullswarm import alignment_bound, distance, project, sq_distance_gradient

rng = np.random.default_rng(0)

# A flat triangle in the plane and a point outside it.
verts = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
x = np.array([2.0, 2.0])

proj = project(x, verts)
print("query point:        ", x)
print("nearest hull point: ", proj.nearest)
print("distance:           ", proj.distance)
print("barycentric weights:", proj.weights)

# The optimality certificate: the residual x - nearest makes a nonpositive
# inner product with every direction that stays inside the hull.
residuals = (verts - proj.nearest) @ (x - proj.nearest)
print("per-vertex optimality residuals (all <= 0):", residuals)

# The squared distance is differentiable; its gradient is twice the residual.
grad = sq_distance_gradient(x, verts)
print("squared-distance gradient:", grad, "= 2 * (x - nearest)?",
      np.allclose(grad, 2 * (x - proj.nearest)))

# Degenerate spans are fine: duplicated vertices, collinear points.
needle = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [1.0, 1.0]])
print("\ncollinear span, projecting (2, 0):",
      project(np.array([2.0, 0.0]), needle).nearest)

# The inner-product bound that powers the convergence analysis: the
# projection residual of one point, paired with a displacement toward
# another point, is controlled by how their hull distances differ.
print("\nrandom alignment-bound spot checks (lhs <= rhs):")
for _ in range(5):
    xa = rng.uniform(-4, 4, size=2)
    xb = rng.uniform(-4, 4, size=2)
    lhs, rhs = alignment_bound(xa, xb, verts)
    print(f"  lhs = {lhs:+8.4f}  rhs = {rhs:8.4f}  "
          f"gap = {rhs - lhs:8.4f}  (d_a = {distance(xa, verts):.3f})")
