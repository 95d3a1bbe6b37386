"""Acceptance criteria, each at its stated tolerance.

Every check returns ``(ok, detail)``; the test prints one PASS/FAIL line per
criterion. Run directly with ``python3 tests/test_acceptance.py`` for a bare
summary.
"""

import json
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np
import pytest

from abelframes.characters import (
    character_fiber,
    character_table,
    extend_characters,
    fiber_sum,
    fibers,
    restrict,
    subgroup_characters,
)
from abelframes.filterbank import FilterBank, expand_system, frame_potential, frame_potential_fb, frame_spectrum
from abelframes.group import GroupSpec, all_subgroups, contains, element_at, subgroup_closure, trivial_subgroup
from abelframes.modrep import build_modrep, verify_factorization
from abelframes.potential_opt import (
    DesignProblem,
    compute_m0,
    fp_gradient,
    fundamental_frame_inequality,
    minimize_fp,
    verify_theorem,
    verify_underdetermined,
)
from abelframes.sampling import downsample, downsample_spectrum, dft_subgroup, upsample
from abelframes.transform import convolve, dft, idft, inner

GROUPS = [GroupSpec(m) for m in [(6,), (8,), (2, 4), (3, 3), (2, 2, 2)]]
G24 = GroupSpec((2, 4))
H02 = subgroup_closure(G24, [(0, 2)])
SEEDS = range(5)


def _cplx(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def c1_small_example():
    w = np.exp(2j * np.pi / 3)
    A = np.diag([w, w**2])
    u = np.array([1, 1]) / np.sqrt(2)
    X = np.array([np.linalg.matrix_power(A, j) @ u for j in range(3)])
    fp = frame_potential(X)
    eigs = np.linalg.eigvalsh(X.T @ X.conj())
    ok = abs(fp - 4.5) <= 1e-12 and np.max(np.abs(eigs - 1.5)) <= 1e-12
    return ok, f"FP={fp:.15g}, eigenvalues={eigs.round(15).tolist()}"


def c2_characters():
    worst = {"orth": 0.0, "fsum": 0.0, "ext": 0.0}
    sizes_ok = True
    for G in GROUPS:
        T = character_table(G)
        worst["orth"] = max(worst["orth"], np.max(np.abs(T @ T.conj().T - G.order * np.eye(G.order))) / G.order)
        for H in all_subgroups(G):
            fib = fibers(G, H)
            for chi in subgroup_characters(G, H):
                labels = character_fiber(G, H, chi)
                sizes_ok &= len(labels) == H.index
                for i in range(G.order):
                    g = element_at(G, i)
                    expected = H.index * chi(g) if contains(H, g) else 0
                    worst["fsum"] = max(worst["fsum"], abs(fiber_sum(G, H, chi, g) - expected))
                for x in [element_at(G, i) for i in range(G.order) if not H.membership[i]]:
                    ext = extend_characters(G, H, x, chi)
                    Hx = ext[0].subgroup
                    restricted = np.array([restrict(G, a, Hx).values for a in labels])
                    for e in ext:
                        # distance to the nearest restricted fiber character, pointwise
                        worst["ext"] = max(worst["ext"], np.min(np.max(np.abs(restricted - e.values), axis=1)))
                    for r in restricted:
                        worst["ext"] = max(
                            worst["ext"], np.min(np.max(np.abs(np.array([e.values for e in ext]) - r), axis=1))
                        )
            sizes_ok &= fib.shape == (H.order, H.index)
    ok = worst["orth"] <= 1e-9 and worst["fsum"] <= 1e-9 and worst["ext"] <= 1e-9 and sizes_ok
    return ok, f"orthogonality/|G| {worst['orth']:.1e}, fiber sums {worst['fsum']:.1e}, extension {worst['ext']:.1e}, sizes {sizes_ok}"


def c3_transforms():
    rng = np.random.default_rng(3)
    w = dict(roundtrip=0.0, parseval=0.0, conv=0.0, sample=0.0, upsample=0.0)
    for G in GROUPS:
        subgroups = all_subgroups(G)
        for k in range(20):
            f, g = _cplx(rng, G.order), _cplx(rng, G.order)
            F, Gh = dft(G, f), dft(G, g)
            w["roundtrip"] = max(w["roundtrip"], np.max(np.abs(idft(G, F) - f)))
            w["parseval"] = max(w["parseval"], abs(inner(F, F) - G.order * inner(f, f)) / abs(G.order * inner(f, f)))
            w["conv"] = max(w["conv"], np.max(np.abs(dft(G, convolve(G, f, g)) - F * Gh)))
            H = subgroups[k % len(subgroups)]
            y = _cplx(rng, H.order)
            lhs = dft_subgroup(G, H, downsample(G, f, H))
            w["sample"] = max(w["sample"], np.max(np.abs(lhs - downsample_spectrum(G, F, H))))
            up = dft(G, upsample(G, y, H))
            w["upsample"] = max(w["upsample"], np.max(np.abs(up[fibers(G, H)] - dft_subgroup(G, H, y)[:, None])))
    ok = (
        w["roundtrip"] <= 1e-10
        and w["parseval"] <= 1e-9
        and w["conv"] <= 1e-9
        and w["sample"] <= 1e-9
        and w["upsample"] <= 1e-9
    )
    return ok, ", ".join(f"{k} {v:.1e}" for k, v in w.items())


def c4_factorization():
    rng = np.random.default_rng(4)
    res = spec = 0.0
    for G in GROUPS:
        for H in all_subgroups(G):
            for k in range(20):
                n = 1 + k % 4
                fb = FilterBank(G, H, _cplx(rng, n, G.order))
                res = max(res, verify_factorization(fb, build_modrep(fb), _cplx(rng, n, H.order)))
                spec = max(spec, np.max(np.abs(frame_spectrum(fb, "dense") - frame_spectrum(fb, "blocks"))))
    return res <= 1e-10 and spec <= 1e-8, f"factorization residual {res:.1e}, spectrum gap {spec:.1e}"


def c5_fp_routes():
    rng = np.random.default_rng(5)
    worst = 0.0
    for G in GROUPS:
        for H in all_subgroups(G):
            for n in (1, 2, 5):
                fb = FilterBank(G, H, _cplx(rng, n, G.order))
                dense = frame_potential(expand_system(fb))
                worst = max(worst, abs(frame_potential_fb(fb) - dense) / dense)
    return worst <= 1e-9, f"max relative gap {worst:.1e}"


def c6_gradient():
    rng = np.random.default_rng(6)
    worst = 0.0
    h = 1e-5
    for G in GROUPS:
        subgroups = all_subgroups(G)
        for k in range(10):
            fb = FilterBank(G, subgroups[k % len(subgroups)], _cplx(rng, 3, G.order))
            v = _cplx(rng, 3, G.order)
            v /= np.linalg.norm(v)
            fp = lambda f: frame_potential(expand_system(fb.with_filters(f)))
            fd = (fp(fb.filters + h * v) - fp(fb.filters - h * v)) / (2 * h)
            exact = float(np.real(np.vdot(fp_gradient(fb), v)))
            worst = max(worst, abs(fd - exact) / abs(exact))
    return worst <= 1e-5, f"max relative error {worst:.1e}"


def _design(norms, seed, G=G24, H=H02):
    t0 = time.perf_counter()
    rep = minimize_fp(DesignProblem(G, H, norms, seed=seed))
    return rep, time.perf_counter() - t0


def c7_tight_design():
    lines, ok = [], True
    for s in SEEDS:
        rep, dt = _design([1] * 5, s)
        # floor cross-checked against brute-force FP of the converged bank
        brute = frame_potential(expand_system(rep.bank))
        A, B = rep.bounds
        good = (
            rep.converged
            and B / A - 1 <= 1e-6
            and abs(brute - 12.5) <= 1e-5 * 12.5
            and abs(rep.fp_floor - 12.5) <= 1e-12
            and dt <= 10
        )
        ok &= good
        lines.append(f"seed {s}: B/A-1={B / A - 1:.1e} FP={brute:.10g} {dt:.2f}s")
    return ok, "; ".join(lines)


def c8_split_design():
    m0 = compute_m0([3, 1, 1, 1, 1], H02.index)
    ok, lines = m0 == 1, [f"m0={m0}"]
    for s in SEEDS:
        rep, _ = _design([3, 1, 1, 1, 1], s)
        chk = verify_theorem(rep.bank, 1, tol=1e-5)
        worst = max(chk["defects"].values())
        good = rep.converged and chk["passed"] and worst <= 1e-5 and chk["tail_rank"] == 6
        good &= max(chk["defects"]["head_block_norms"], chk["defects"]["tail_block_energy"]) <= 1e-5
        ok &= good
        lines.append(f"seed {s}: max defect {worst:.1e}, rank {chk['tail_rank']}")
    return ok, "; ".join(lines)


def c9_underdetermined():
    ok, lines = True, []
    for s in SEEDS:
        rep, _ = _design([1, 1], s)
        chk = verify_underdetermined(rep.bank, tol=1e-6)
        orth = chk["defects"]["orthogonality"]
        good = rep.converged and orth <= 1e-6 and abs(rep.fp - 4) <= 1e-5 * 4
        ok &= good
        lines.append(f"seed {s}: orth {orth:.1e} FP={rep.fp:.10g}")
    return ok, "; ".join(lines)


def c10_trivial_subgroup():
    Z4 = GroupSpec((4,))
    T = trivial_subgroup(Z4)
    ok, lines = True, []
    for s in SEEDS:
        rep, _ = _design([1] * 4, s, Z4, T)
        A, B = rep.bounds
        good = rep.converged and rep.tight and abs(rep.fp - 4) <= 1e-5 * 4 and abs(A - 1) <= 1e-6
        ok &= good
        lines.append(f"equal seed {s}: FP={rep.fp:.10g}")
    ffi = fundamental_frame_inequality([2, 1, 1, 1], 4)
    m0 = compute_m0([2, 1, 1, 1], 4)
    ok &= (not ffi) and m0 == 1
    for s in SEEDS:
        rep, _ = _design([2, 1, 1, 1], s, Z4, T)
        good = rep.converged and verify_theorem(rep.bank, 1)["passed"]
        ok &= good
    lines.append(f"(2,1,1,1): inequality {ffi}, m0={m0}")
    return ok, "; ".join(lines)


def c11_cli():
    problem = {"group": {"moduli": [2, 4]}, "subgroup": {"generators": [[0, 2]]}, "norms": [1] * 5, "seed": 11}
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        (tmp / "p.json").write_text(json.dumps(problem))
        cli = [sys.executable, "-m", "abelframes", "design", str(tmp / "p.json")]
        runs = [subprocess.run(cli + ["--out", str(tmp / f"r{i}.json")], capture_output=True) for i in range(2)]
        same = (tmp / "r0.json").read_bytes() == (tmp / "r1.json").read_bytes()
        rep = json.loads((tmp / "r0.json").read_text())
        A, B = rep["bounds"]
        bad = subprocess.run(cli + ["--norms", "[1, 2]"], capture_output=True, text=True)
        capped = subprocess.run(cli + ["--max-iters", "1"], capture_output=True)
    codes = (runs[0].returncode, runs[1].returncode, bad.returncode, capped.returncode)
    ok = same and codes == (0, 0, 1, 2) and B / A - 1 <= 1e-6 and "norms must be nonincreasing" in bad.stderr
    return ok, f"byte-identical {same}, exit codes {codes}, B/A-1={B / A - 1:.1e}"


CRITERIA = [
    ("C1", "small tight example", c1_small_example),
    ("C2", "character suite", c2_characters),
    ("C3", "transform suite", c3_transforms),
    ("C4", "modulated factorization", c4_factorization),
    ("C5", "frame potential by two routes", c5_fp_routes),
    ("C6", "gradient vs finite differences", c6_gradient),
    ("C7", "tight design on Z/2+Z/4", c7_tight_design),
    ("C8", "split design m0=1", c8_split_design),
    ("C9", "underdetermined design", c9_underdetermined),
    ("C10", "trivial subgroup of Z/4", c10_trivial_subgroup),
    ("C11", "CLI determinism and exit codes", c11_cli),
]


def _line(tag, title, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {tag} {title}: {detail}"


@pytest.mark.parametrize("tag, title, check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(tag, title, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(tag, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = [(tag, title, *check()) for tag, title, check in CRITERIA]
    for r in results:
        print(_line(*r))
    sys.exit(0 if all(r[2] for r in results) else 1)
