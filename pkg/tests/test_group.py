import pytest
from hypothesis import given, strategies as st

from abelframes.group import (
    GroupSpec,
    add,
    all_subgroups,
    contains,
    element_at,
    element_index,
    full_subgroup,
    negate,
    subgroup_closure,
    trivial_subgroup,
)

from conftest import TEST_GROUPS, group_id


@pytest.mark.parametrize(
    "moduli, x, y, expected",
    [((4,), (3,), (2,), (1,)), ((2, 4), (1, 2), (1, 2), (0, 0)), ((3,), (0,), (2,), (2,))],
)
def test_add(moduli, x, y, expected):
    assert add(GroupSpec(moduli), x, y) == expected


@pytest.mark.parametrize(
    "moduli, x, expected", [((4,), (1,), (3,)), ((2, 4), (1, 3), (1, 1)), ((5,), (0,), (0,))]
)
def test_negate(moduli, x, expected):
    assert negate(GroupSpec(moduli), x) == expected


def test_element_index_examples():
    assert element_index(GroupSpec((2, 4)), (1, 2)) == 6
    assert element_at(GroupSpec((2, 4)), 0) == (0, 0)
    assert element_index(GroupSpec((3, 3)), (2, 1)) == 7


def test_dimension_and_range_errors():
    G = GroupSpec((2, 4))
    with pytest.raises(ValueError):
        add(G, (1,), (1, 1))
    with pytest.raises(ValueError):
        negate(G, (1, 1, 1))
    with pytest.raises(IndexError):
        element_at(G, 8)
    with pytest.raises(ValueError):
        GroupSpec((0, 3))
    with pytest.raises(ValueError):
        subgroup_closure(G, [(1,)])


@pytest.mark.parametrize(
    "moduli, gens, elements, order, index",
    [
        ((4,), [(2,)], [(0,), (2,)], 2, 2),
        ((2, 4), [(1, 2)], [(0, 0), (1, 2)], 2, 4),
        ((2, 4), [], [(0, 0)], 1, 8),
    ],
)
def test_subgroup_closure_examples(moduli, gens, elements, order, index):
    H = subgroup_closure(GroupSpec(moduli), gens)
    assert list(H.elements) == elements
    assert H.order == order and H.index == index


def test_contains_examples():
    Z4 = GroupSpec((4,))
    H = subgroup_closure(Z4, [(2,)])
    assert contains(H, (2,))
    assert not contains(H, (1,))
    G = GroupSpec((2, 4))
    assert not contains(subgroup_closure(G, [(1, 2)]), (1, 0))


moduli_st = st.lists(st.integers(1, 6), min_size=1, max_size=3)


@given(moduli_st, st.data())
def test_group_law(moduli, data):
    G = GroupSpec(tuple(moduli))
    elem = st.integers(0, G.order - 1).map(lambda i: element_at(G, i))
    x, y, z = data.draw(elem), data.draw(elem), data.draw(elem)
    assert add(G, x, y) == add(G, y, x)
    assert add(G, add(G, x, y), z) == add(G, x, add(G, y, z))
    assert add(G, x, G.identity) == x
    assert add(G, x, negate(G, x)) == G.identity
    assert element_at(G, element_index(G, x)) == x


@given(moduli_st)
def test_index_bijection(moduli):
    G = GroupSpec(tuple(moduli))
    assert sorted(element_index(G, element_at(G, i)) for i in range(G.order)) == list(range(G.order))


@given(moduli_st, st.data())
def test_closure_properties(moduli, data):
    G = GroupSpec(tuple(moduli))
    gens = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    H = subgroup_closure(G, [element_at(G, i) for i in gens])
    assert G.order % H.order == 0
    assert H.order * H.index == G.order
    assert G.identity in H.elements
    members = set(H.elements)
    for x in H.elements:
        assert negate(G, x) in members
        for y in H.elements:
            assert add(G, x, y) in members
    assert H.indices.tolist() == sorted(set(H.indices.tolist()))
    again = subgroup_closure(G, H.elements)
    assert again.elements == H.elements


@pytest.mark.parametrize("G", TEST_GROUPS, ids=group_id)
def test_trivial_and_full(G):
    assert trivial_subgroup(G).index == G.order
    assert full_subgroup(G).index == 1


def test_all_subgroups_counts():
    # Z/6: 4 subgroups, Z/8: 4, Z/2+Z/4: 8, Z/3+Z/3: 6, (Z/2)^3: 16
    counts = [len(all_subgroups(G)) for G in TEST_GROUPS]
    assert counts == [4, 4, 8, 6, 16]
