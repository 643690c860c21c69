import numpy as np
import pytest

from warpcheck.ode import OdeRhs, integrate_ivp


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger kernel compilation once so timed tests measure steady state."""
    sol = integrate_ivp(OdeRhs.power(0.5, -2.0), 0.0, 1.0, 1.0, 0.0, 1e-8)
    sol.eval(np.linspace(0.0, 1.0, 8))


def random_block_metrics(count: int, seed: int = 7):
    """Deterministic random block-diagonal metrics on [0.5, 1.5] with positive
    cubic-polynomial warps; the shared generator for oracle-equivalence runs."""
    from warpcheck.curvature import MultiWarpedMetric
    from warpcheck.factors import abstract_factor
    from warpcheck.profiles import profile_from_callable

    rng = np.random.default_rng(seed)
    probe = np.linspace(0.45, 1.55, 301)
    metrics = []
    while len(metrics) < count:
        n_blocks = int(rng.integers(1, 4))
        blocks = []
        ok = True
        for b in range(n_blocks):
            # coefficient ranges keep a'''' /a of a = f^2 small enough that
            # the oracle's second differences stay within the agreement bound
            c = np.array([rng.uniform(0.7, 1.4), rng.uniform(-0.3, 0.3),
                          rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25)])
            vals = c[0] + c[1] * probe + c[2] * probe ** 2 + c[3] * probe ** 3
            if vals.min() < 0.5:
                ok = False
                break
            dim = int(rng.integers(1, 5))
            if dim == 1:
                interval = (0.0, 0.0)
            else:
                pair = np.sort(rng.uniform(-2.0, 3.0, size=2))
                interval = (float(pair[0]), float(pair[1]))
            factor = abstract_factor(f"B{b}", dim, interval)
            c0, c1, c2, c3 = map(float, c)
            profile = profile_from_callable(
                (0.45, 1.55),
                lambda t, c0=c0, c1=c1, c2=c2, c3=c3:
                    c0 + c1 * t + c2 * t ** 2 + c3 * t ** 3,
                lambda t, c1=c1, c2=c2, c3=c3: c1 + 2 * c2 * t + 3 * c3 * t ** 2,
                lambda t, c2=c2, c3=c3: 2 * c2 + 6 * c3 * t)
            blocks.append((factor, profile))
        if ok:
            metrics.append(MultiWarpedMetric((0.5, 1.5), tuple(blocks)))
    return metrics
