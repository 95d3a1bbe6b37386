"""Frame-potential minimization over filters of prescribed norms.

Local minimizers split into an orthogonal part (the first ``m0`` generators and
their translates) and a part that is tight on its span; in the regime
``m0 = 0`` the whole system is a tight frame for l(G). This module finds such
minimizers numerically and measures how far a bank is from that structure.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .characters import fibers
from .filterbank import FilterBank, expand_system, frame_bounds, frame_operator_matrix, is_tight
from .group import GroupSpec, Subgroup
from .modrep import block_column_norms, build_modrep, _blocks_from_spectra
from .transform import dft, idft

log = logging.getLogger(__name__)

ARMIJO_C = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60
STALL_LIMIT = 50
MAX_RESTARTS = 3
FLOOR_RTOL = 1e-6
# FP of a feasible point is only known to a few ulps: every retracted iterate is
# off its spheres by rounding and FP has a large radial derivative. Armijo gets
# this much relative slack so descent is not blocked by noise near a minimizer.
ARMIJO_SLACK = 1e-14


class Underdetermined(ValueError):
    """No split index exists: fewer generators than the index [G:H]."""


def validate_norms(norms) -> np.ndarray:
    a = np.asarray(norms, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError("norms must be a non-empty list")
    if np.any(a <= 0):
        raise ValueError("norms must be strictly positive")
    if np.any(np.diff(a) > 0):
        raise ValueError("norms must be nonincreasing")
    return a


def compute_m0(norms, N: int, rtol: float = 1e-12) -> int:
    """Smallest m in [0, N-1] with ``(N - m) a_m^2 <= sum_{j>=m} a_j^2``.

    Boundary cases are equalities (norms (2, 1, 1, 1) with N = 4 give 3 <= 3 at
    m = 1), so the comparison allows ``rtol`` relative slack for norms that went
    through floating point.
    """
    a2 = validate_norms(norms) ** 2
    tails = np.cumsum(a2[::-1])[::-1]
    for m in range(min(N, a2.size)):
        if (N - m) * a2[m] <= tails[m] * (1 + rtol):
            return m
    raise Underdetermined(f"{a2.size} generators for index {N}: underdetermined regime")


def fundamental_frame_inequality(norms, d: int) -> bool:
    a2 = validate_norms(norms) ** 2
    return bool(d * a2[0] <= a2.sum())


def fp_floor(norms, H_order: int, N: int, m0: int) -> float:
    """Minimum frame potential of X_H for the given norms.

    ``m0 >= n`` (in particular ``m0 = n``) denotes the underdetermined regime,
    where the floor is that of an orthogonal sequence.
    """
    a2 = np.asarray(norms, dtype=float) ** 2
    if m0 >= a2.size:
        return float(H_order * np.sum(a2**2))
    head = np.sum(a2[:m0] ** 2)
    tail = np.sum(a2[m0:]) ** 2 / (N - m0)
    return float(H_order * (head + tail))


def _fp_and_frame_applied(G: GroupSpec, H: Subgroup, filters: np.ndarray):
    """FP(X_H), ``F f_m`` for every generator, and the block Gram matrices."""
    fib = fibers(G, H)
    spectra = dft(G, filters)
    B = _blocks_from_spectra(spectra, fib)
    gram = B @ B.conj().transpose(0, 2, 1)  # (|H|, N, N)
    cols = B.conj().transpose(0, 2, 1) @ B  # (|H|, n, n)
    fp = float(np.sum(np.abs(cols) ** 2))
    # hat(F f) on fiber l is (B_l B_l^*) hat(f) on fiber l
    v = spectra[:, fib]  # (n, |H|, N)
    out = np.einsum("ljk,nlk->nlj", gram, v)
    Ff_hat = np.empty_like(spectra)
    Ff_hat[:, fib] = out
    return fp, idft(G, Ff_hat), gram


def fp_gradient(fb: FilterBank) -> np.ndarray:
    """Euclidean gradient ``4|H| F f_m`` of FP(X_H), as real gradient on C^|G|."""
    _, Ff, _ = _fp_and_frame_applied(fb.group, fb.subgroup, np.asarray(fb.filters))
    return 4 * fb.subgroup.order * Ff


def riemannian_gradient(filters: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Remove from each ``grad_m`` its real component along ``f_m``."""
    radial = np.real(np.sum(grad * filters.conj(), axis=1)) / np.sum(np.abs(filters) ** 2, axis=1)
    return grad - radial[:, None] * filters


def _renormalize(filters: np.ndarray, norms: np.ndarray) -> np.ndarray:
    return filters * (norms / np.linalg.norm(filters, axis=1))[:, None]


@dataclass
class DesignProblem:
    group: GroupSpec
    subgroup: Subgroup
    norms: list[float]
    seed: int = 0
    max_iters: int = 50_000
    grad_tol: float = 1e-8
    tight_eps: float = 1e-8

    def __post_init__(self):
        self.norms = [float(a) for a in validate_norms(self.norms)]
        if self.subgroup.ambient != self.group:
            raise ValueError("subgroup is not contained in the group")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if self.grad_tol <= 0 or self.tight_eps <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def n(self) -> int:
        return len(self.norms)

    @property
    def N(self) -> int:
        return self.subgroup.index

    def regime(self) -> tuple[str, int]:
        """("tight" | "split" | "underdetermined", m0)."""
        try:
            m0 = compute_m0(self.norms, self.N)
        except Underdetermined:
            return "underdetermined", self.n
        return ("tight" if m0 == 0 else "split"), m0


@dataclass
class DesignReport:
    bank: FilterBank
    fp_trajectory: list[float]
    grad_norm: float
    bounds: tuple[float, float]
    m0: int
    regime: str
    fp_floor: float
    partition_check: dict
    converged: bool
    iterations: int
    restarts: list[int] = field(default_factory=list)
    tight: bool = False

    @property
    def fp(self) -> float:
        return self.fp_trajectory[-1]


def minimize_fp(problem: DesignProblem, verify_tol: float = 1e-5) -> DesignReport:
    """Riemannian gradient descent with Armijo backtracking on a product of spheres.

    Each step moves along the negative Riemannian gradient and retracts every
    filter back to its prescribed norm. The trial step starts at
    ``1 / (8 |H| B)``, the reciprocal of the curvature bound of FP on the
    spheres (B = upper frame bound). ``fp_trajectory`` is nonincreasing between
    restarts up to ``ARMIJO_SLACK`` relative rounding; a restart (recorded in ``restarts`` by iteration) is a
    small seeded perturbation taken after ``STALL_LIMIT`` iterations without
    Armijo progress while the gradient is still above tolerance.
    """
    G, H = problem.group, problem.subgroup
    norms = np.asarray(problem.norms)
    rng = np.random.default_rng(problem.seed)
    f = rng.standard_normal((problem.n, G.order)) + 1j * rng.standard_normal((problem.n, G.order))
    f = _renormalize(f, norms)

    regime, m0 = problem.regime()
    floor = fp_floor(norms, H.order, problem.N, m0)
    scale4 = 4 * H.order

    fp, Ff, gram = _fp_and_frame_applied(G, H, f)
    rgrad = riemannian_gradient(f, scale4 * Ff)
    gnorm = float(np.linalg.norm(rgrad))
    trajectory = [fp]
    restarts: list[int] = []
    stalled = 0
    it = 0
    while it < problem.max_iters and gnorm > problem.grad_tol:
        it += 1
        B_est = float(np.max(np.linalg.eigvalsh(gram)))
        step = 1.0 / (2 * scale4 * max(B_est, 1e-300))
        g2 = gnorm**2
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            trial = _renormalize(f - step * rgrad, norms)
            fp_trial, Ff_trial, gram_trial = _fp_and_frame_applied(G, H, trial)
            if fp_trial <= fp - ARMIJO_C * step * g2 + ARMIJO_SLACK * abs(fp):
                accepted = True
                break
            step *= BACKTRACK
        if accepted:
            f, fp, Ff, gram = trial, fp_trial, Ff_trial, gram_trial
            stalled = 0
        else:
            stalled += 1
        trajectory.append(fp)
        rgrad = riemannian_gradient(f, scale4 * Ff)
        gnorm = float(np.linalg.norm(rgrad))
        if stalled >= STALL_LIMIT and gnorm > problem.grad_tol:
            if len(restarts) >= MAX_RESTARTS:
                log.warning("no Armijo progress and restart budget spent at iteration %d", it)
                break
            restarts.append(it)
            noise = rng.standard_normal(f.shape) + 1j * rng.standard_normal(f.shape)
            f = _renormalize(f + 1e-3 * norms[:, None] * noise / np.sqrt(G.order), norms)
            fp, Ff, gram = _fp_and_frame_applied(G, H, f)
            rgrad = riemannian_gradient(f, scale4 * Ff)
            gnorm = float(np.linalg.norm(rgrad))
            trajectory.append(fp)
            stalled = 0

    bank = FilterBank(G, H, f)
    if regime == "underdetermined":
        check = verify_underdetermined(bank, verify_tol)
    else:
        check = verify_theorem(bank, m0, verify_tol)
    converged = gnorm <= problem.grad_tol and abs(fp - floor) <= FLOOR_RTOL * floor
    if not converged:
        log.info("not converged after %d iterations: grad %.3e, fp %.12g, floor %.12g", it, gnorm, fp, floor)
    return DesignReport(
        bank=bank,
        fp_trajectory=trajectory,
        grad_norm=gnorm,
        bounds=frame_bounds(bank),
        m0=m0,
        regime=regime,
        fp_floor=floor,
        partition_check=check,
        converged=bool(converged),
        iterations=it,
        restarts=restarts,
        tight=is_tight(bank, problem.tight_eps)[0],
    )


def _rank(eigs: np.ndarray, rtol: float) -> int:
    top = float(np.max(eigs)) if eigs.size else 0.0
    return int(np.sum(eigs > rtol * top)) if top > 0 else 0


def verify_theorem(fb: FilterBank, m0: int, tol: float = 1e-5) -> dict:
    """Measure how far ``fb`` is from the orthogonal/tight split at ``m0``.

    Filters must be ordered by nonincreasing norm. Every entry is a defect that
    vanishes for a minimizer; ``passed`` compares each against ``tol``.
    """
    n, H = fb.n, fb.subgroup
    N = H.index
    if not 0 <= m0 <= n:
        raise ValueError(f"m0={m0} outside [0, {n}]")
    X = expand_system(fb).reshape(n, H.order, -1)
    d = fb.group.order
    head = X[:m0].reshape(m0 * H.order, d)
    tail = X[m0:].reshape((n - m0) * H.order, d)

    gram_head = head.conj() @ head.T
    off = gram_head - np.diag(np.diag(gram_head))
    orth = float(np.max(np.abs(off))) if off.size else 0.0
    cross = float(np.max(np.abs(head.conj() @ tail.T))) if head.size and tail.size else 0.0

    if tail.size:
        eigs = np.linalg.eigvalsh(tail.T @ tail.conj())
        rank = _rank(eigs, tol)
        nonzero = np.sort(eigs)[-rank:] if rank else np.zeros(0)
        tight_defect = float((nonzero[-1] - nonzero[0]) / nonzero[-1]) if rank else 0.0
    else:
        rank, tight_defect = 0, 0.0
    expected_rank = H.order * (N - m0) if n - m0 > 0 else 0

    a = fb.norms
    colnorms = block_column_norms(build_modrep(fb))  # (|H|, n)
    head_norm_res = float(np.max(np.abs(colnorms[:, :m0] - a[None, :m0]))) if m0 else 0.0
    tail_energy = np.sum(colnorms[:, m0:] ** 2, axis=1)
    tail_norm_res = float(np.max(np.abs(tail_energy - np.sum(a[m0:] ** 2)))) if m0 < n else 0.0

    # each f_m should be an eigenvector of F, with eigenvalue a_m^2 on the head
    # and the common tight bound on the tail
    F = frame_operator_matrix(fb)
    tail_bound = float(np.sum(a[m0:] ** 2) / (N - m0)) if m0 < min(n, N) else 0.0
    lam = np.where(np.arange(n) < m0, a**2, tail_bound)
    Ff = fb.filters @ F.T
    eigvec = float(np.max(np.linalg.norm(Ff - lam[:, None] * fb.filters, axis=1) / a))

    defects = {
        "orthogonality": orth,
        "cross_orthogonality": cross,
        "tightness": tight_defect,
        "head_block_norms": head_norm_res,
        "tail_block_energy": tail_norm_res,
        "eigenvector": eigvec,
    }
    return {
        "m0": int(m0),
        "defects": defects,
        "tail_rank": rank,
        "expected_tail_rank": expected_rank,
        "tail_bound": tail_bound,
        "passed": bool(all(v <= tol for v in defects.values()) and rank == expected_rank),
    }


def verify_underdetermined(fb: FilterBank, tol: float = 1e-5) -> dict:
    """Pairwise orthogonality of X_H and the eigenvector property ``F f_m = a_m^2 f_m``."""
    X = expand_system(fb)
    gram = X.conj() @ X.T
    off = gram - np.diag(np.diag(gram))
    orth = float(np.max(np.abs(off))) if off.size else 0.0
    a = fb.norms
    Ff = fb.filters @ frame_operator_matrix(fb).T
    eigvec = float(np.max(np.linalg.norm(Ff - (a**2)[:, None] * fb.filters, axis=1) / a))
    defects = {"orthogonality": orth, "eigenvector": eigvec}
    return {
        "m0": int(fb.n),
        "defects": defects,
        "passed": bool(all(v <= tol for v in defects.values())),
    }
