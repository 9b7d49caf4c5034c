import numpy as np
import pytest

from netcube.generators import GeneratorSpec, generate
from netcube.nets import assign_parents, build_nets
from netcube.cubes import build_cubes


@pytest.fixture
def grid8():
    return generate(GeneratorSpec("grid1d", {"n": 8}))


@pytest.fixture
def grid8_tree(grid8):
    nets = build_nets(grid8, 1 / 7)
    return build_cubes(nets, assign_parents(grid8, nets))


@pytest.fixture
def binary_ultrametric12():
    return generate(GeneratorSpec("mary_ultrametric", {"m": 2, "h": 12, "ratio": 0.5}))


def make_tree(space, r, allow_large_r=False):
    nets = build_nets(space, r, allow_large_r=allow_large_r)
    return build_cubes(nets, assign_parents(space, nets))
