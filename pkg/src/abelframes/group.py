"""Finite abelian groups Z/m_1 + ... + Z/m_r in additive coordinates.

Elements are tuples of ints reduced mod the moduli. Every array indexed by a
group (signals, spectra, character tables) uses the canonical mixed-radix order:
element ``x`` sits at ``sum_j x_j * prod_{k>j} m_k``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm, prod
from typing import Iterable, Sequence

import numpy as np

Element = tuple[int, ...]


@dataclass(frozen=True)
class GroupSpec:
    moduli: tuple[int, ...]

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if len(moduli) == 0:
            raise ValueError("a group needs at least one cyclic factor")
        if any(m < 1 for m in moduli):
            raise ValueError(f"moduli must be >= 1, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @cached_property
    def order(self) -> int:
        return prod(self.moduli)

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        for j in range(self.rank - 2, -1, -1):
            s[j] = s[j + 1] * self.moduli[j + 1]
        return s

    @cached_property
    def exponent(self) -> int:
        return lcm(*self.moduli)

    @cached_property
    def coords(self) -> np.ndarray:
        """``(|G|, r)`` array of all elements in canonical order."""
        grids = np.indices(self.moduli).reshape(self.rank, -1)
        return grids.T.astype(np.int64)

    @cached_property
    def diff_table(self) -> np.ndarray:
        """``D[x, y]`` = canonical index of ``x - y``."""
        c = self.coords
        d = (c[:, None, :] - c[None, :, :]) % np.asarray(self.moduli)
        return d @ self.strides

    @cached_property
    def neg_index(self) -> np.ndarray:
        return ((-self.coords) % np.asarray(self.moduli)) @ self.strides

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def element(self, coords: Iterable[int]) -> Element:
        """Validate the length of ``coords`` and reduce them mod the moduli."""
        x = tuple(int(c) for c in coords)
        if len(x) != self.rank:
            raise ValueError(
                f"element {x} has {len(x)} coordinates, group {self.moduli} needs {self.rank}"
            )
        return tuple(c % m for c, m in zip(x, self.moduli))

    def basis(self) -> list[Element]:
        out = []
        for j in range(self.rank):
            e = [0] * self.rank
            e[j] = 1
            out.append(self.element(e))
        return out

    def to_json(self) -> dict:
        return {"moduli": list(self.moduli)}


def add(spec: GroupSpec, x: Sequence[int], y: Sequence[int]) -> Element:
    x, y = spec.element(x), spec.element(y)
    return tuple((a + b) % m for a, b, m in zip(x, y, spec.moduli))


def negate(spec: GroupSpec, x: Sequence[int]) -> Element:
    return tuple((-a) % m for a, m in zip(spec.element(x), spec.moduli))


def scale(spec: GroupSpec, k: int, x: Sequence[int]) -> Element:
    return tuple((k * a) % m for a, m in zip(spec.element(x), spec.moduli))


def element_index(spec: GroupSpec, x: Sequence[int]) -> int:
    x = spec.element(x)
    return int(np.dot(x, spec.strides))


def element_at(spec: GroupSpec, index: int) -> Element:
    index = int(index)
    if not 0 <= index < spec.order:
        raise IndexError(f"index {index} out of range for group of order {spec.order}")
    return tuple(int(c) for c in spec.coords[index])


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored extensionally: members sorted by canonical index."""

    ambient: GroupSpec
    generators: tuple[Element, ...]
    elements: tuple[Element, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.ambient.order // self.order

    @cached_property
    def indices(self) -> np.ndarray:
        """Canonical ambient indices of the members, strictly increasing."""
        return np.array([element_index(self.ambient, e) for e in self.elements], dtype=np.int64)

    @cached_property
    def membership(self) -> np.ndarray:
        mask = np.zeros(self.ambient.order, dtype=bool)
        mask[self.indices] = True
        return mask

    @cached_property
    def position(self) -> dict[Element, int]:
        return {e: k for k, e in enumerate(self.elements)}

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators]}


def subgroup_closure(spec: GroupSpec, generators: Iterable[Sequence[int]]) -> Subgroup:
    """Smallest subgroup containing ``generators`` (breadth-first closure)."""
    gens = tuple(spec.element(g) for g in generators)
    seen = {spec.identity}
    queue = deque([spec.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = add(spec, x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    # finite group: closure under + alone already gives closure under negation
    ordered = sorted(seen, key=lambda e: element_index(spec, e))
    return Subgroup(spec, gens, tuple(ordered))


def full_subgroup(spec: GroupSpec) -> Subgroup:
    return subgroup_closure(spec, spec.basis())


def trivial_subgroup(spec: GroupSpec) -> Subgroup:
    return subgroup_closure(spec, [])


def contains(H: Subgroup, x: Sequence[int]) -> bool:
    return bool(H.membership[element_index(H.ambient, x)])


def all_subgroups(spec: GroupSpec) -> list[Subgroup]:
    """Every subgroup of a small group, found as closures of pairs of elements.

    Pairs are not enough for groups needing three generators, so closures are
    grown until no new subgroup appears. Intended for test-sized groups only.
    """
    found: dict[tuple[Element, ...], Subgroup] = {}
    frontier = [trivial_subgroup(spec)]
    found[frontier[0].elements] = frontier[0]
    elems = [element_at(spec, i) for i in range(spec.order)]
    while frontier:
        nxt = []
        for H in frontier:
            for x in elems:
                if contains(H, x):
                    continue
                K = subgroup_closure(spec, H.generators + (x,))
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda K: (K.order, K.indices.tolist()))
