import numpy as np
import pytest

from abelframes.group import GroupSpec, all_subgroups, subgroup_closure

TEST_MODULI = [(6,), (8,), (2, 4), (3, 3), (2, 2, 2)]
TEST_GROUPS = [GroupSpec(m) for m in TEST_MODULI]


def group_id(G):
    return "x".join(map(str, G.moduli))


def all_pairs():
    return [(G, H) for G in TEST_GROUPS for H in all_subgroups(G)]


def pair_id(pair):
    G, H = pair
    return f"{group_id(G)}-H{H.order}-{'.'.join(map(str, H.indices.tolist()))}"


def random_signal(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def z2z4():
    G = GroupSpec((2, 4))
    return G, subgroup_closure(G, [(0, 2)])
