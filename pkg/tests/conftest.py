import pytest

from symkilling.curvature import curvature_tensor
from symkilling.liealg import parse_space

_pairs = {}
_curvs = {}


def get_pair(spec):
    if spec not in _pairs:
        _pairs[spec] = parse_space(spec)
    return _pairs[spec]


def get_curv(spec):
    if spec not in _curvs:
        _curvs[spec] = curvature_tensor(get_pair(spec))
    return _curvs[spec]


@pytest.fixture
def pair_of():
    return get_pair


@pytest.fixture
def curv_of():
    return get_curv
