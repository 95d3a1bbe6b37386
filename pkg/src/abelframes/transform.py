"""DFT on l(G), convolution, involution and translation.

Signals are 1-D complex arrays of length |G| in canonical element order;
spectra are indexed by character label in the same order. The transform is the
naive character-table product, which is also what the identities are checked
against.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .characters import character_table
from .group import GroupSpec, element_index


def _check(spec: GroupSpec, f) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != spec.order:
        raise ValueError(f"signal of length {f.shape[-1]} does not live on a group of order {spec.order}")
    return f


def inner(f1, f2) -> complex:
    """<f1, f2> = sum f1 * conj(f2)."""
    return complex(np.vdot(np.asarray(f2), np.asarray(f1)))


def dft(spec: GroupSpec, f) -> np.ndarray:
    """``F[a] = sum_x f(x) conj(chi_a(x))``. Works row-wise on stacked signals."""
    f = _check(spec, f)
    return f @ character_table(spec).conj().T


def idft(spec: GroupSpec, F) -> np.ndarray:
    F = _check(spec, F)
    return (F @ character_table(spec)) / spec.order


def convolve(spec: GroupSpec, f1, f2) -> np.ndarray:
    """``(f1 * f2)(x) = sum_y f1(y) f2(x - y)``."""
    f1, f2 = _check(spec, f1), _check(spec, f2)
    return (f2[spec.diff_table] * f1[None, :]).sum(axis=1)


def involution(spec: GroupSpec, f) -> np.ndarray:
    """``f~(g) = conj(f(-g))``."""
    f = _check(spec, f)
    return np.conj(f[..., spec.neg_index])


def translate(spec: GroupSpec, f, g: Sequence[int]) -> np.ndarray:
    """``(T_g f)(x) = f(x - g)``."""
    f = _check(spec, f)
    gi = element_index(spec, g)
    return f[..., spec.diff_table[:, gi]]
