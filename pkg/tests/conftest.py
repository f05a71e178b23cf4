import numpy as np
import pytest

from kazhdan_lab.subspaces import Subspace, orthonormalize


def random_subspace(rng: np.random.Generator, ambient: int, dim: int) -> Subspace:
    vecs = rng.standard_normal((dim, ambient)) + 1j * rng.standard_normal((dim, ambient))
    sub = orthonormalize(list(vecs), ambient_dim=ambient)
    assert sub.dim == dim  # random vectors are independent almost surely
    return sub


@pytest.fixture
def rng():
    return np.random.default_rng(0xA2)
