import random

import numpy as np
import pytest

from l1cert import build_m_ell1, kuratowski_embed, distortion
from l1cert.backend import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation before any timed assertion runs."""
    space, graph = build_m_ell1(3)
    indptr, indices = graph.csr()
    kernels.bfs_all_pairs(indptr, indices)
    kernels.first_triangle_violation(space.num.astype(np.int64))
    pm = kuratowski_embed(space, "0")
    distortion(pm)
    sets = np.ascontiguousarray(pm.image_num[4:].astype(np.int64))
    kernels.partition_normings(sets, 3)
    kernels.grid_min_abs(
        np.array([[1, 0, 0], [0, 1, -1]], dtype=np.int64),
        pm.image_num[1:4].astype(np.int64),
    )


@pytest.fixture
def rng():
    return random.Random(20260809)
