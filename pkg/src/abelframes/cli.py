"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 numerical non-convergence (or, for
``verify``, defects above tolerance).
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence

import numpy as np

from . import io
from .filterbank import FilterBank, expand_system, frame_bounds, frame_potential, frame_potential_fb, is_tight
from .modrep import build_modrep
from .potential_opt import (
    DesignProblem,
    Underdetermined,
    compute_m0,
    minimize_fp,
    verify_theorem,
    verify_underdetermined,
)
from .sampling import downsample, upsample
from .transform import convolve, dft, idft

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

def _emit(text: str, out: str | None) -> None:
    if out:
        io.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _problem_from_args(args) -> DesignProblem:
    obj = dict(io.load_json(args.problem)) if args.problem else {}
    if not isinstance(obj, dict):
        raise io.InputError("design problem must be a JSON object")
    if args.group is not None:
        obj["group"] = io.load_json(args.group)
    if args.subgroup is not None:
        obj["subgroup"] = io.load_json(args.subgroup)
    if args.norms is not None:
        obj["norms"] = io.load_json(args.norms)
    for key, val in (("seed", args.seed), ("max_iters", args.max_iters), ("grad_tol", args.grad_tol)):
        if val is not None:
            obj[key] = val
    return io.problem_from_json(obj)


def cmd_design(args) -> int:
    problem = _problem_from_args(args)
    report = minimize_fp(problem, verify_tol=args.tol)
    _emit(io.dumps(io.report_to_json(report)), args.out)
    A, B = report.bounds
    print(
        f"regime={report.regime} m0={report.m0} fp={report.fp:.12g} floor={report.fp_floor:.12g} "
        f"bounds=({A:.12g}, {B:.12g}) iterations={report.iterations} converged={report.converged}",
        file=sys.stderr,
    )
    if report.converged and report.partition_check["passed"]:
        return EXIT_OK
    return EXIT_NUMERIC


def _load_bank(source: str) -> FilterBank:
    obj = io.load_json(source)
    # a design report carries its bank under "filters"
    if isinstance(obj, dict) and isinstance(obj.get("filters"), dict):
        obj = obj["filters"]
    return io.bank_from_json(obj)


def _sorted_bank(fb: FilterBank) -> FilterBank:
    order = np.argsort(-fb.norms, kind="stable")
    return fb.with_filters(fb.filters[order])


def cmd_analyze(args) -> int:
    fb = _load_bank(args.bank)
    N = fb.subgroup.index
    A_blk, B_blk = frame_bounds(fb, "blocks")
    A_den, B_den = frame_bounds(fb, "dense")
    fp_blk = frame_potential_fb(fb)
    fp_den = frame_potential(expand_system(fb))
    tight, bound = is_tight(fb, args.tight_eps)
    norms = np.sort(fb.norms)[::-1]
    try:
        m0 = compute_m0(norms, N, rtol=1e-9) if np.all(norms > 0) else None
        regime = None if m0 is None else ("tight" if m0 == 0 else "split")
    except Underdetermined:
        m0, regime = None, "underdetermined"
    result = {
        "group": fb.group.to_json(),
        "subgroup_order": fb.subgroup.order,
        "index": N,
        "n": fb.n,
        "bounds_blocks": [A_blk, B_blk],
        "bounds_dense": [A_den, B_den],
        "fp_blocks": fp_blk,
        "fp_dense": fp_den,
        "tight": tight,
        "tight_bound": bound if tight else None,
        "m0": m0,
        "regime": regime,
    }
    if not args.json:
        print(f"group {list(fb.group.moduli)}, |H| = {fb.subgroup.order}, [G:H] = {N}, n = {fb.n}")
        print(f"frame bounds (blocks): A = {A_blk:.12g}, B = {B_blk:.12g}")
        print(f"frame bounds (dense):  A = {A_den:.12g}, B = {B_den:.12g}")
        print(f"frame potential: blocks {fp_blk:.15g}, dense {fp_den:.15g}")
        print(f"tight: {tight}" + (f" (bound {bound:.12g})" if tight else ""))
        shown = "-" if m0 is None else m0
        print(f"m0: {shown} ({regime or 'zero filter present'})")
    sys.stdout.write(io.dumps(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    fb = _sorted_bank(_load_bank(args.bank))
    N = fb.subgroup.index
    if np.any(fb.norms <= 0):
        raise io.InputError("bank has a zero filter")
    if fb.n < N:
        check = verify_underdetermined(fb, args.tol)
        print(f"underdetermined regime: n = {fb.n} < [G:H] = {N}; checking orthogonality of X_H")
    else:
        m0 = args.m0 if args.m0 is not None else compute_m0(fb.norms, N, rtol=1e-9)
        check = verify_theorem(fb, m0, args.tol)
        print(f"m0 = {m0}; tail rank {check['tail_rank']} (expected {check['expected_tail_rank']})")
    for name, value in check["defects"].items():
        flag = "ok" if value <= args.tol else "FAIL"
        print(f"  {name:<22s} {value:.3e}  {flag}")
    print("passed" if check["passed"] else "failed")
    return EXIT_OK if check["passed"] else EXIT_NUMERIC


def _signal_arg(source: str, group_arg):
    obj = io.load_json(source)
    if isinstance(obj, dict) and "group" in obj and group_arg is None:
        G = io.parse_group(obj["group"])
    elif group_arg is not None:
        G = io.parse_group(io.load_json(group_arg))
    else:
        raise io.InputError("--group is required for bare signal arrays")
    return G, obj


def cmd_transform(args) -> int:
    op = args.op
    if op == "modrep":
        if len(args.inputs) != 1:
            raise io.InputError("modrep takes one bank file")
        result = build_modrep(_load_bank(args.inputs[0])).to_json()
        _emit(io.dumps(result), args.out)
        return EXIT_OK

    arity = 2 if op == "conv" else 1
    if len(args.inputs) != arity:
        raise io.InputError(f"{op} takes {arity} input(s)")
    G, obj = _signal_arg(args.inputs[0], args.group)
    if op in ("sample", "upsample"):
        if args.subgroup is None:
            raise io.InputError(f"{op} needs --subgroup")
        H = io.parse_subgroup(G, io.load_json(args.subgroup))
    if op == "upsample":
        out = upsample(G, io.parse_signal(obj, H.order), H)
    else:
        f = io.parse_signal(obj, G.order)
        if op == "dft":
            out = dft(G, f)
        elif op == "idft":
            out = idft(G, f)
        elif op == "sample":
            out = downsample(G, f, H)
        else:
            G2, obj2 = _signal_arg(args.inputs[1], args.group)
            if G2 != G:
                raise io.InputError("signals live on different groups")
            out = convolve(G, f, io.parse_signal(obj2, G.order))
    _emit(io.dumps(io.signal_to_json(out)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abelframes", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="minimize the frame potential for prescribed norms")
    d.add_argument("problem", nargs="?", help="design problem JSON (file or inline)")
    d.add_argument("--group")
    d.add_argument("--subgroup")
    d.add_argument("--norms")
    d.add_argument("--seed", type=int)
    d.add_argument("--max-iters", type=int)
    d.add_argument("--grad-tol", type=float)
    d.add_argument("--tol", type=float, default=1e-5, help="verification defect tolerance")
    d.add_argument("--out", help="report path (stdout if omitted)")
    d.set_defaults(func=cmd_design)

    a = sub.add_parser("analyze", help="frame bounds, potential and tightness of a bank")
    a.add_argument("bank")
    a.add_argument("--tight-eps", type=float, default=1e-8)
    a.add_argument("--json", action="store_true", help="print only the JSON report")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="check the orthogonal/tight split of a bank")
    v.add_argument("bank", help="bank JSON, or a design report")
    v.add_argument("--m0", type=int)
    v.add_argument("--tol", type=float, default=1e-5)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("transform", help="dft, idft, conv, sample, upsample, modrep")
    t.add_argument("op", choices=["dft", "idft", "conv", "sample", "upsample", "modrep"])
    t.add_argument("inputs", nargs="+")
    t.add_argument("--group")
    t.add_argument("--subgroup")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (io.InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
