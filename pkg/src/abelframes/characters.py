"""Characters of G, their restrictions to a subgroup, and the fibers over them.

A character of G is labelled by an element ``a`` of G itself:
``chi_a(x) = prod_j exp(2 pi i a_j x_j / m_j)``. Characters of a subgroup H are
kept as value tables over ``H.elements`` so H never needs a cyclic decomposition.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .group import (
    Element,
    GroupSpec,
    Subgroup,
    add,
    contains,
    element_at,
    element_index,
    scale,
    subgroup_closure,
)

MATCH_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SubgroupCharacter:
    subgroup: Subgroup
    values: np.ndarray

    def __call__(self, x: Sequence[int]) -> complex:
        return complex(self.values[self.subgroup.position[self.subgroup.ambient.element(x)]])

    def matches(self, other: "SubgroupCharacter", tol: float = MATCH_TOL) -> bool:
        return bool(np.max(np.abs(self.values - other.values)) <= tol)


def _phases(spec: GroupSpec, labels: np.ndarray, points: np.ndarray) -> np.ndarray:
    # exact integer phase in units of 1/exponent; keeps the angles reduced before exp
    L = spec.exponent
    weights = np.array([L // m for m in spec.moduli], dtype=np.int64)
    return ((labels * weights) @ points.T) % L


def char_eval(spec: GroupSpec, a: Sequence[int], x: Sequence[int]) -> complex:
    a, x = spec.element(a), spec.element(x)
    L = spec.exponent
    k = sum(ai * xi * (L // m) for ai, xi, m in zip(a, x, spec.moduli)) % L
    return cmath.exp(2j * cmath.pi * k / L)


@lru_cache(maxsize=64)
def character_table(spec: GroupSpec) -> np.ndarray:
    """``T[a, x] = chi_a(x)`` with both axes in canonical order."""
    k = _phases(spec, spec.coords, spec.coords)
    T = np.exp(2j * np.pi * k / spec.exponent)
    T.setflags(write=False)
    return T


def restrict(spec: GroupSpec, a: Sequence[int], H: Subgroup) -> SubgroupCharacter:
    row = character_table(spec)[element_index(spec, a)]
    return SubgroupCharacter(H, row[H.indices].copy())


@lru_cache(maxsize=64)
def _fiber_partition(spec: GroupSpec, H: Subgroup) -> tuple[tuple[int, ...], ...]:
    # restrictions agree iff the integer phase rows agree, so grouping is exact
    k = _phases(spec, spec.coords, spec.coords[H.indices])
    groups: dict[bytes, list[int]] = {}
    for a in range(spec.order):
        groups.setdefault(k[a].tobytes(), []).append(a)
    return tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: g[0]))


def fibers(spec: GroupSpec, H: Subgroup) -> np.ndarray:
    """``(|H|, [G:H])`` array of character labels (canonical indices).

    Row ``l`` is the fiber over the l-th character of H. Fibers are ordered by
    their smallest label and labels ascend within a fiber; this fixes the
    enumeration of the characters of H for the whole package.
    """
    return np.array(_fiber_partition(spec, H), dtype=np.int64)


def subgroup_characters(spec: GroupSpec, H: Subgroup) -> list[SubgroupCharacter]:
    """Characters of H in fiber order."""
    T = character_table(spec)
    return [SubgroupCharacter(H, T[row[0]][H.indices].copy()) for row in fibers(spec, H)]


def subgroup_character_table(spec: GroupSpec, H: Subgroup) -> np.ndarray:
    """``(|H|, |H|)`` matrix, row l = values of chi_l on ``H.elements``."""
    T = character_table(spec)
    return T[np.ix_(fibers(spec, H)[:, 0], H.indices)]


def character_fiber(spec: GroupSpec, H: Subgroup, chi: SubgroupCharacter) -> list[Element]:
    """All labels a whose restriction to H equals ``chi`` (brute force)."""
    T = character_table(spec)[:, H.indices]
    hits = np.nonzero(np.max(np.abs(T - chi.values[None, :]), axis=1) <= MATCH_TOL)[0]
    if hits.size == 0:
        raise ValueError("no character of G restricts to chi; chi is not a character of H")
    return [element_at(spec, a) for a in hits]


def extend_characters(
    spec: GroupSpec, H: Subgroup, x: Sequence[int], chi: SubgroupCharacter
) -> list[SubgroupCharacter]:
    """The ``m_x`` extensions of ``chi`` to the subgroup generated by H and x.

    ``m_x`` is the least n >= 1 with ``n x`` in H. With ``w = chi(m_x x)`` the
    extensions are ``chi_j(k x + h) = alpha_j**k * chi(h)`` where alpha_j runs over
    the m_x-th roots of w, principal root first.
    """
    x = spec.element(x)
    if contains(H, x):
        raise ValueError(f"{x} already lies in the subgroup")
    m = 1
    while not contains(H, scale(spec, m, x)):
        m += 1
    omega = chi(scale(spec, m, x))
    root = cmath.exp(1j * cmath.phase(omega) / m)
    alphas = [root * cmath.exp(2j * cmath.pi * j / m) for j in range(m)]

    Hx = subgroup_closure(spec, H.generators + (x,))
    # each element of Hx is uniquely k*x + h with 0 <= k < m
    k_of = np.empty(Hx.order, dtype=np.int64)
    chi_h = np.empty(Hx.order, dtype=complex)
    for pos, e in enumerate(Hx.elements):
        for k in range(m):
            h = add(spec, e, scale(spec, -k, x))
            if contains(H, h):
                k_of[pos] = k
                chi_h[pos] = chi(h)
                break
    return [SubgroupCharacter(Hx, np.power(alpha, k_of) * chi_h) for alpha in alphas]


def fiber_sum(spec: GroupSpec, H: Subgroup, chi: SubgroupCharacter, g: Sequence[int]) -> complex:
    labels = character_fiber(spec, H, chi)
    return complex(sum(char_eval(spec, a, g) for a in labels))
