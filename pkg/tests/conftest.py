import dataclasses

import pytest

from configuration.configuration import Configuration
from services.corpus import boundary_simplex, cross_polytope, cycle, rp2


@pytest.fixture
def config():
    return dataclasses.replace(Configuration(), seed=0, characteristic=2, field_bits=20, trials=100)


@pytest.fixture
def tetrahedron():
    return boundary_simplex(3)


@pytest.fixture
def octahedron():
    return cross_polytope(3)


@pytest.fixture
def square():
    return cycle(4)


@pytest.fixture
def projective_plane():
    return rp2()
