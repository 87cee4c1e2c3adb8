"""Predicting a path maximum is not the maximum of predictions.

Two experiments. First, the running maximum of unconditioned Brownian
motion on [0, 1]: the continuum mean is sqrt(2/pi) ~ 0.7979, and the
Monte Carlo estimate over a fine grid lands just below it (a grid sup
never sees the excursions between grid points). Second, a Brownian bridge
pinned to zero at both ends: every pointwise prediction is zero, yet the
predicted maximum is solidly positive.
"""

import numpy as np

from gaussradon import (
    AffineConditioning,
    BrownianMin,
    FunctionalSpec,
    grt_mc,
    predicted_sup_vs_sup_of_predictions,
)

free = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[], targets=[], lam=0.0)
grid = np.linspace(0.002, 1.0, 500).reshape(-1, 1)
est = grt_mc(free, FunctionalSpec.sup(grid), samples=40_000, seed=2)
print("unconditioned Brownian maximum on a 500-point grid:")
print(f"  estimate {est.value:.4f} +/- {1.96 * est.std_error:.4f} (approximate 95% CI)")
print(f"  continuum value sqrt(2/pi) = {np.sqrt(2.0 / np.pi):.4f};"
      " the grid estimate biases low")

bridge = AffineConditioning(kernel=BrownianMin(horizon=1.0), train_points=[[1.0]],
                            targets=[0.0], lam=0.0)
bridge_grid = np.linspace(0.005, 0.995, 199).reshape(-1, 1)
est, sup_means = predicted_sup_vs_sup_of_predictions(bridge, bridge_grid,
                                                     samples=40_000, seed=3)
print()
print("bridge pinned at zero:")
print(f"  sup of pointwise predictions: {sup_means:+.6f}")
print(f"  predicted sup of the path:    {est.value:+.4f} +/- {1.96 * est.std_error:.4f}")
print(f"  continuum mean of the bridge maximum sqrt(pi/8) = {np.sqrt(np.pi / 8.0):.4f}")
