"""Sampling and upsampling over a subgroup H, and the DFT on l(H).

Signals on H are arrays over ``H.elements``. Their spectra are indexed by the
characters of H in fiber order (see :func:`abelframes.characters.fibers`).
"""

from __future__ import annotations

import numpy as np

from .characters import fibers, subgroup_character_table
from .group import GroupSpec, Subgroup


def _check_subgroup(spec: GroupSpec, H: Subgroup) -> None:
    if H.ambient != spec:
        raise ValueError(f"subgroup lives in {H.ambient.moduli}, not {spec.moduli}")


def downsample(spec: GroupSpec, f, H: Subgroup) -> np.ndarray:
    _check_subgroup(spec, H)
    f = np.asarray(f, dtype=complex)
    if f.shape[-1] != spec.order:
        raise ValueError("signal length does not match the group order")
    return f[..., H.indices]


def upsample(spec: GroupSpec, y, H: Subgroup) -> np.ndarray:
    _check_subgroup(spec, H)
    y = np.asarray(y, dtype=complex)
    if y.shape[-1] != H.order:
        raise ValueError(f"expected {H.order} samples on H, got {y.shape[-1]}")
    out = np.zeros(y.shape[:-1] + (spec.order,), dtype=complex)
    out[..., H.indices] = y
    return out


def dft_subgroup(spec: GroupSpec, H: Subgroup, y) -> np.ndarray:
    """``y^(chi_l) = sum_h y(h) conj(chi_l(h))`` for l in fiber order."""
    _check_subgroup(spec, H)
    y = np.asarray(y, dtype=complex)
    return y @ subgroup_character_table(spec, H).conj().T


def idft_subgroup(spec: GroupSpec, H: Subgroup, Y) -> np.ndarray:
    _check_subgroup(spec, H)
    Y = np.asarray(Y, dtype=complex)
    return (Y @ subgroup_character_table(spec, H)) / H.order


def downsample_spectrum(spec: GroupSpec, F, H: Subgroup) -> np.ndarray:
    """Spectrum of the sampled signal, read off the spectrum on G.

    Entry l is the mean of ``F`` over the fiber of labels restricting to chi_l.
    """
    _check_subgroup(spec, H)
    F = np.asarray(F, dtype=complex)
    return F[..., fibers(spec, H)].mean(axis=-1)
