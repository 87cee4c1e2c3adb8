"""Brownian bridge by conditioning the min-kernel process on its endpoint.

The posterior of Brownian motion given its value at time 1 has mean t * y
and variance t * (1 - t); the exact formulas fall out of the generic
Gaussian conditioning, and reproducible sampling confirms them.
"""

import numpy as np

from gaussradon import BrownianMin, condition, noise_augmented_joint, sample

kernel = BrownianMin(horizon=1.0)
y_end = 1.5
t = np.linspace(0.05, 0.95, 19)

joint = noise_augmented_joint(kernel, [[1.0]], t.reshape(-1, 1), 0.0)
bridge = condition(joint, [len(t)], [y_end])

print("posterior vs exact bridge formulas (endpoint pinned at", y_end, ")")
print("max |mean - t*y|:        ", np.abs(bridge.mean - t * y_end).max())
print("max |var  - t*(1-t)|:    ",
      np.abs(np.diag(bridge.covariance.entries) - t * (1.0 - t)).max())

draws = sample(bridge, 50_000, seed=11)
print()
print("50k sampled paths, largest moment gaps across the grid:")
print("mean gap:", np.abs(draws.mean(axis=0) - t * y_end).max())
print("var gap: ", np.abs(draws.var(axis=0, ddof=1) - t * (1.0 - t)).max())

mid = len(t) // 2
print()
print(f"at t = {t[mid]:.2f}: mean {draws[:, mid].mean():+.4f}"
      f" (exact {t[mid] * y_end:+.4f}),"
      f" var {draws[:, mid].var(ddof=1):.4f} (exact {t[mid] * (1 - t[mid]):.4f})")
