"""n-channel filterbanks on l(G) with sampling over a subgroup H.

The bank's filters ``f_0 .. f_{n-1}`` generate the convolutional system
``X_H = {T_h f_m : h in H}``; the filterbank frame operator is the frame
operator of that system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .group import GroupSpec, Subgroup, element_at, full_subgroup
from .sampling import downsample, upsample
from .transform import convolve, involution, translate

ZERO_EIG_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class FilterBank:
    group: GroupSpec
    subgroup: Subgroup
    filters: np.ndarray

    def __post_init__(self):
        f = np.atleast_2d(np.asarray(self.filters, dtype=complex))
        if f.ndim != 2 or f.shape[0] < 1:
            raise ValueError("a filterbank needs at least one filter")
        if f.shape[1] != self.group.order:
            raise ValueError(f"filters have length {f.shape[1]}, group order is {self.group.order}")
        if self.subgroup.ambient != self.group:
            raise ValueError("subgroup is not a subgroup of the bank's group")
        f = f.copy()
        f.setflags(write=False)
        object.__setattr__(self, "filters", f)

    @property
    def n(self) -> int:
        return self.filters.shape[0]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.filters, axis=1)

    def with_filters(self, filters) -> "FilterBank":
        return FilterBank(self.group, self.subgroup, filters)


def standard_bank(spec: GroupSpec, copies: int = 1) -> FilterBank:
    """``copies`` copies of delta_0 with H = G; X_H is the standard basis repeated."""
    delta = np.zeros(spec.order, dtype=complex)
    delta[0] = 1.0
    return FilterBank(spec, full_subgroup(spec), np.tile(delta, (copies, 1)))


def expand_system(fb: FilterBank) -> np.ndarray:
    """The ``n|H|`` vectors ``T_h f_m`` as rows, m-major, h in subgroup order."""
    G, H = fb.group, fb.subgroup
    # column x of the gathered table is x - h for each h in H
    shift = G.diff_table[:, H.indices].T  # (|H|, |G|)
    return fb.filters[:, shift].reshape(fb.n * H.order, G.order)


def analyze(fb: FilterBank, f) -> np.ndarray:
    """``(Lf)_m = S_H(f * f~_m)``, shape ``(n, |H|)``."""
    G = fb.group
    return np.stack(
        [downsample(G, convolve(G, f, involution(G, fm)), fb.subgroup) for fm in fb.filters]
    )


def synthesize(fb: FilterBank, y) -> np.ndarray:
    """``L* y = sum_m (S*_H y_m) * f_m``."""
    G, H = fb.group, fb.subgroup
    y = np.asarray(y, dtype=complex)
    if y.shape != (fb.n, H.order):
        raise ValueError(f"expected coefficients of shape {(fb.n, H.order)}, got {y.shape}")
    out = np.zeros(G.order, dtype=complex)
    for ym, fm in zip(y, fb.filters):
        out += convolve(G, upsample(G, ym, H), fm)
    return out


def frame_operator_apply(fb: FilterBank, f) -> np.ndarray:
    return synthesize(fb, analyze(fb, f))


def frame_operator_matrix(fb: FilterBank) -> np.ndarray:
    """Dense ``sum_x x x^*`` over the expanded system."""
    X = expand_system(fb)
    return X.T @ X.conj()


def _snap(eigs: np.ndarray) -> np.ndarray:
    eigs = np.sort(np.real(eigs))
    scale = max(float(np.max(np.abs(eigs))), 1.0) if eigs.size else 1.0
    eigs[np.abs(eigs) <= ZERO_EIG_RTOL * scale] = 0.0
    return eigs


def frame_spectrum(fb: FilterBank, method: str = "blocks") -> np.ndarray:
    """All |G| eigenvalues of the frame operator, ascending."""
    if method == "dense":
        return _snap(np.linalg.eigvalsh(frame_operator_matrix(fb)))
    if method == "blocks":
        from .modrep import block_spectrum, build_modrep

        return _snap(block_spectrum(build_modrep(fb)))
    raise ValueError(f"unknown method {method!r}")


def frame_bounds(fb: FilterBank, method: str = "blocks") -> tuple[float, float]:
    eigs = frame_spectrum(fb, method)
    return float(eigs[0]), float(eigs[-1])


def frame_potential(X) -> float:
    """Sum of ``|<x_j, x_k>|^2`` over all ordered pairs of rows of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    gram = X.conj() @ X.T
    return float(np.sum(np.abs(gram) ** 2))


def frame_potential_fb(fb: FilterBank) -> float:
    from .modrep import block_frame_potential, build_modrep

    return block_frame_potential(build_modrep(fb))


def is_tight(fb: FilterBank, eps: float = 1e-8) -> tuple[bool, float]:
    A, B = frame_bounds(fb)
    return bool(A > 0 and B / A <= 1 + eps), (A + B) / 2


def translation_defect(fb: FilterBank, f) -> float:
    """Max over h in H of ``|F(T_h f) - T_h(F f)|``; zero up to rounding."""
    G = fb.group
    Ff = frame_operator_apply(fb, f)
    worst = 0.0
    for hi in fb.subgroup.indices:
        h = element_at(G, hi)
        lhs = frame_operator_apply(fb, translate(G, f, h))
        worst = max(worst, float(np.max(np.abs(lhs - translate(G, Ff, h)))))
    return worst
