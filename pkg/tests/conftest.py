import numpy as np
import pytest

from gaussradon import RBF, Dataset, gram


def make_instances(count, seed, n_max=20, d_max=3, lam_range=(1e-3, 10.0)):
    """Seeded random ridge problems: RBF kernel, modest size, varied lambda."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        d = int(rng.integers(1, d_max + 1))
        points = rng.normal(size=(n, d))
        targets = rng.normal(size=n)
        lam = float(np.exp(rng.uniform(np.log(lam_range[0]), np.log(lam_range[1]))))
        scale = float(rng.uniform(0.3, 3.0))
        out.append((Dataset(points=points, targets=targets), RBF(scale=scale), lam))
    return out


def well_conditioned_instances(count, seed):
    """Separated jittered grids: Gram condition numbers well inside 1e4."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(5, 15))
        base = np.arange(n) * 0.7
        pts = (base + rng.uniform(-0.2, 0.2, size=n)).reshape(-1, 1)
        kernel = RBF(scale=float(rng.uniform(0.2, 0.8)))
        K = gram(kernel, pts).entries
        w = np.linalg.eigvalsh(K)
        if w[0] <= 0 or w[-1] / w[0] > 1e4:
            continue
        out.append((Dataset(points=pts, targets=rng.normal(size=n)), kernel))
    return out


@pytest.fixture(scope="session")
def ridge_instances():
    """The 200 shared instances used by several equivalence checks."""
    return make_instances(200, seed=20240817)
