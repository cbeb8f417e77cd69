import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from spin1geom.oracles import sample_random_states


@pytest.fixture
def rng():
    return np.random.default_rng(20111030)


def random_rotations(n, seed):
    return Rotation.random(n, random_state=seed).as_matrix()


def random_orthogonal(n, seed):
    """Rotations and reflections."""
    R = random_rotations(n, seed)
    flip = np.random.default_rng(seed).integers(0, 2, size=n) * 2 - 1
    return R * flip[:, None, None]


def random_states(n, seed):
    return sample_random_states(n, seed)
