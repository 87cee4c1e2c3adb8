"""Path geometry behind the min kernel.

The covariance sections min(s, .) are piecewise-linear ramps, and their
slope-product inner product reproduces min(s, t) exactly. Sampling the
process on a grid with the generic Gaussian machinery gives standard
Brownian motion: variance t, independent increments.
"""

import numpy as np

from gaussradon import BrownianMin, bm_section, cm_inner, gram, sample_bm_paths

times = [0.2, 0.45, 0.7, 1.0]
sections = [bm_section(s, 1.0) for s in times]

inner = np.array([[cm_inner(f, g) for g in sections] for f in sections])
kernel_gram = gram(BrownianMin(horizon=1.0), times).entries
print("slope-product Gram of the sections:")
print(inner)
print("entrywise gap to the min-kernel Gram:", np.abs(inner - kernel_gram).max())

draws = sample_bm_paths(times, count=100_000, seed=17)
print()
print("sampled process on the grid (100k paths):")
print("variances:      ", np.round(draws.var(axis=0, ddof=1), 4), " expected", times)
increments = np.diff(np.column_stack([np.zeros(draws.shape[0]), draws]), axis=1)
corr = np.corrcoef(increments.T) - np.eye(len(times))
print("max |increment correlation|:", np.abs(corr).max())
