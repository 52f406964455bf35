import numpy as np
import pytest

import quasirand as q


@pytest.fixture
def k44():
    return q.complete_bipartite(4, 4)


@pytest.fixture
def k5():
    return q.complete_graph(5)


def random_graph(n: int, p: float, seed: int) -> q.Graph:
    return q.generate_gnp(n, p, seed)


def random_disjoint_sets(n: int, sizes, seed: int):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    out = []
    pos = 0
    for s in sizes:
        out.append(sorted(int(v) for v in perm[pos:pos + s]))
        pos += s
    return out
