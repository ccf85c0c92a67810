import pytest

from keyforest import from_edges
from keyforest.oracle import PolicyGenerator, random_policy

# 0 = bottom, 1/2 = incomparable middle pair, 3 = top
DIAMOND_EDGES = [(3, 1), (3, 2), (1, 0), (2, 0)]

DENSITIES = (0.0, 0.15, 0.3, 0.45, 0.6, 0.8, 1.0)


@pytest.fixture
def diamond():
    return from_edges(4, DIAMOND_EDGES)


def seeded_corpus(count, max_n, seed0):
    """Deterministic mix of sizes and densities for oracle comparisons."""
    out = []
    for k in range(count):
        n = 1 + k % max_n
        density = DENSITIES[k % len(DENSITIES)]
        out.append(random_policy(PolicyGenerator(seed=seed0 + k, n=n, density=density)))
    return out
