"""Modulated filter representation.

For each character chi_l of H the bank contributes a ``[G:H] x n`` block whose
(j, m) entry is ``f_m^(psi_{l,j}) / sqrt([G:H])``, psi_{l,j} running over the
fiber of chi_l. The synthesis operator is block diagonal in these coordinates,
so the frame operator of X_H is unitarily equivalent to ``diag(B_l B_l^*)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import fibers
from .filterbank import FilterBank, frame_potential, synthesize
from .sampling import dft_subgroup
from .transform import dft, idft


@dataclass(frozen=True, eq=False)
class SpectralBlocks:
    bank: FilterBank
    blocks: np.ndarray  # (|H|, [G:H], n)
    fiber_labels: np.ndarray  # (|H|, [G:H]) canonical label indices

    @property
    def ell_count(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_rows(self) -> int:
        return self.blocks.shape[1]

    def to_json(self) -> dict:
        G = self.bank.group
        return {
            "ell_count": self.ell_count,
            "block_rows": self.block_rows,
            "n": int(self.blocks.shape[2]),
            "blocks": [
                {
                    "fiber_labels": [G.coords[a].tolist() for a in labels],
                    "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in B],
                }
                for B, labels in zip(self.blocks, self.fiber_labels)
            ],
        }


def _blocks_from_spectra(spectra: np.ndarray, fib: np.ndarray) -> np.ndarray:
    # spectra (n, |G|) -> (|H|, N, n)
    N = fib.shape[1]
    return spectra[:, fib].transpose(1, 2, 0) / np.sqrt(N)


def build_modrep(fb: FilterBank) -> SpectralBlocks:
    fib = fibers(fb.group, fb.subgroup)
    blocks = _blocks_from_spectra(dft(fb.group, fb.filters), fib)
    return SpectralBlocks(fb, blocks, fib)


def block_apply(blocks: SpectralBlocks, y) -> np.ndarray:
    """Right-hand side of the factorization ``L* = U1^{-1} H*_mod (+)_l U2``."""
    fb = blocks.bank
    G, H = fb.group, fb.subgroup
    y = np.asarray(y, dtype=complex)
    u2y = dft_subgroup(G, H, y) / np.sqrt(H.order)  # (n, |H|), column l is chi_l
    per_block = np.einsum("ljm,ml->lj", blocks.blocks, u2y)
    u1_out = np.empty(G.order, dtype=complex)
    u1_out[blocks.fiber_labels] = per_block
    return idft(G, u1_out) * np.sqrt(G.order)


def verify_factorization(fb: FilterBank, blocks: SpectralBlocks, y) -> float:
    """Max-entry gap between ``synthesize(fb, y)`` and the block route."""
    left = synthesize(fb, y)
    right = block_apply(blocks, y)
    return float(np.max(np.abs(left - right)))


def block_gram(blocks: SpectralBlocks) -> np.ndarray:
    """``B_l B_l^*`` for every l: the frame operators of the collections Y_l."""
    B = blocks.blocks
    return B @ B.conj().transpose(0, 2, 1)


def block_spectrum(blocks: SpectralBlocks) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(block_gram(blocks)).ravel())


def block_frame_bounds(blocks: SpectralBlocks) -> tuple[float, float]:
    eigs = np.linalg.eigvalsh(block_gram(blocks))  # ascending per block
    return float(np.min(eigs[:, 0])), float(np.max(eigs[:, -1]))


def block_frame_potential(blocks: SpectralBlocks) -> float:
    return float(sum(frame_potential(B.T) for B in blocks.blocks))


def block_column_norms(blocks: SpectralBlocks) -> np.ndarray:
    """``(|H|, n)`` array of ``||y_{m,l}||``."""
    return np.linalg.norm(blocks.blocks, axis=1)
