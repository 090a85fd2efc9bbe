"""Command-line orchestration: parse an instance, run one analysis, emit CSV.

Exit codes: 0 success, 1 numeric failure (an analysis left its validity
regime), 2 validation error (bad flags, bad instance, violated invariant).
Identical invocations produce byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .analysis import (
    AnalysisError,
    bare_curve_functions,
    bare_curves,
    default_grid,
    detect_anticrossing,
    gap_function,
    iterate_demo,
    localization,
    negativity_instance,
    spectrum_trace,
    v3_model,
)
from .bounds import jxx_bounds
from .hamiltonians import stage0_gap_scan
from .instances import (
    SHARED,
    CompositeInstance,
    GicInstance,
    expand,
    parse_instance,
)
from .linalg import LinalgError
from .schedule import (StageConfig, default_config, iteration_config,
                       resolve_jzz_clique)

__all__ = ["main"]


class ValidationError(ValueError):
    pass


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _schedule_flags(p: argparse.ArgumentParser, grid_default: int = 401) -> None:
    p.add_argument("--gamma2", type=float, default=None,
                   help="transverse-field scale at the driver corner")
    p.add_argument("--gamma1-factor", type=float, default=2.0,
                   help="Gamma1 / Gamma2 ratio (default 2)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, default=None,
                   help="decaying-branch slope J_xx/x")
    g.add_argument("--jxx", type=float, default=None,
                   help="constant-branch XX coupling")
    p.add_argument("--jzz", type=float, default=None,
                   help="override the instance's plain-edge penalty")
    p.add_argument("--grid", type=int, default=grid_default,
                   help=f"number of schedule points (default {grid_default})")
    p.add_argument("--out", type=Path, default=Path("."),
                   help="output directory for CSV files (default .)")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="xxanneal",
        description="Structural analysis of XX-driven annealing on "
                    "clique-structured MIS instances.",
    )
    sub = top.add_subparsers(dest="analysis", required=True)

    p = sub.add_parser("spectrum", help="lowest-k spectrum, bare curves, "
                                        "and the anti-crossing report")
    p.add_argument("--instance", type=Path, required=True)
    _schedule_flags(p)
    p.add_argument("--k", type=int, default=3,
                   help="number of levels to trace (default 3)")
    p.add_argument("--gap-threshold", type=float, default=None,
                   help="small-gap cutoff (default: a tenth of the local "
                        "spacing to the third level)")

    p = sub.add_parser("bounds", help="analytic J_xx feasibility window")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mr", type=int, required=True)
    p.add_argument("--mg", type=int, required=True)
    p.add_argument("--nc", type=int, required=True)
    p.add_argument("--gamma2", type=float, required=True)
    p.add_argument("--jzz", type=float, required=True)
    p.add_argument("--structure", choices=["shared", "disjoint"],
                   default="shared")

    p = sub.add_parser("steering", help="Stage-1 localization over R-inner "
                                        "blocks (symmetric subspace)")
    p.add_argument("--instance", type=Path, required=True)
    _schedule_flags(p)
    p.add_argument("--k", type=int, default=2,
                   help="number of lowest blocks to accumulate (default 2)")

    p = sub.add_parser("negativity", help="negative-amplitude fraction of "
                                          "the tracked ground state")
    p.add_argument("--instance", type=Path, required=True)
    _schedule_flags(p)

    p = sub.add_parser("v3", help="three-vertex interference model")
    p.add_argument("--nc", type=int, default=9,
                   help="clique size the model stands for (default 9)")
    _schedule_flags(p)

    p = sub.add_parser("iterate", help="iterative bare-crossing dissolution "
                                       "on a composite instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--gamma1-factor", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=401)
    p.add_argument("--out", type=Path, default=Path("."))

    p = sub.add_parser("stage0", help="opening-stage gap protection scan "
                                      "(full Hamiltonian)")
    p.add_argument("--instance", type=Path, required=True)
    _schedule_flags(p, grid_default=41)
    return top


def _load_instance(path: Path):
    if not path.is_file():
        raise ValidationError(f"instance file not found: {path}")
    try:
        return parse_instance(path.read_text())
    except ValueError as exc:
        raise ValidationError(f"bad instance file {path}: {exc}") from exc


def _gic_instance(args) -> GicInstance:
    inst = _load_instance(args.instance)
    if not isinstance(inst, GicInstance):
        raise ValidationError("this analysis needs a clique-family instance, "
                              "not a composite")
    if getattr(args, "jzz", None) is not None:
        inst = dataclasses.replace(inst, jzz=args.jzz)
    return inst


def _config(args, m: int) -> StageConfig:
    try:
        return default_config(m, gamma2=args.gamma2,
                              gamma1_factor=args.gamma1_factor,
                              alpha=args.alpha, jxx=args.jxx)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _outdir(args) -> Path:
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    return out


def _run_spectrum(args) -> int:
    inst = _gic_instance(args)
    cfg = _config(args, inst.m)
    grid = default_grid(args.grid)
    k = max(args.k, 3)
    trace = spectrum_trace(inst, cfg, grid, k=k)
    bare = bare_curves(inst, cfg, grid)
    out = _outdir(args)
    analysis.write_spectrum_csv(out / "spectrum.csv", trace)
    analysis.write_bare_csv(out / "bare.csv", bare)

    gaps = trace.levels[:, 1] - trace.levels[:, 0]
    i_min = int(np.argmin(gaps))
    if args.gap_threshold is not None:
        threshold = args.gap_threshold
    else:
        spacing = trace.levels[i_min, 2] - trace.levels[i_min, 1]
        threshold = 0.1 * float(spacing)
    lm, gm, _as0 = bare_curve_functions(inst, cfg)
    reports = detect_anticrossing(lm, gm, gap_function(inst, cfg), threshold,
                                  grid=None, scan_points=args.grid)
    print(f"wrote {out / 'spectrum.csv'} and {out / 'bare.csv'}")
    print(f"gap threshold = {_fmt(threshold)}")
    for r in reports:
        if r.t_star is None:
            print(f"no bare crossing; min gap {_fmt(r.gap_min)} "
                  f"at t = {_fmt(r.t_gap_min)}")
        else:
            print(f"bare crossing at t = {_fmt(r.t_star)}: "
                  f"min gap {_fmt(r.gap_min)} at t = {_fmt(r.t_gap_min)}, "
                  f"{r.classification}, "
                  f"{'small gap' if r.small_gap else 'gap above threshold'}")
    return 0


def _run_bounds(args) -> int:
    try:
        report = jxx_bounds(args.m, args.mr, args.mg, args.nc,
                            gamma2=args.gamma2, jzz=args.jzz,
                            structure=args.structure)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    print(f"lift  >= {_fmt(report.jxx_lift)}")
    print(f"steer >= {_fmt(report.jxx_steer)}")
    print(f"sep   <= {_fmt(report.jxx_sep)}")
    sink = "inf" if report.jxx_sink == float("inf") else _fmt(report.jxx_sink)
    print(f"sink  <= {sink}")
    if report.window is None:
        print("window = empty")
    else:
        print(f"window = [{_fmt(report.lower)}, {_fmt(report.upper)}]")
    print(f"witness J_xx = {_fmt(report.witness)}")
    return 0


def _run_steering(args) -> int:
    inst = _gic_instance(args)
    cfg = _config(args, inst.m)
    grid = default_grid(args.grid)
    depth = args.k
    if not (1 <= depth <= inst.m + 1):
        raise ValidationError(f"--k must be in [1, {inst.m + 1}]")
    loc = localization(inst, cfg, grid, depth=depth)
    out = _outdir(args)
    analysis.write_localization_csv(out / "localization.csv", loc)
    i_sep = int(np.argmin(np.abs(grid - cfg.t_sep)))
    print(f"wrote {out / 'localization.csv'}")
    print(f"cumulative weight over {depth} lowest blocks at "
          f"t = {_fmt(float(grid[i_sep]))}: {_fmt(float(loc.cum[i_sep, depth - 1]))}")
    print(f"max weight on the R-empty block: {_fmt(float(loc.wl0.max()))} "
          f"at t = {_fmt(float(grid[int(np.argmax(loc.wl0))]))}")
    return 0


def _run_negativity(args) -> int:
    inst = _gic_instance(args)
    cfg = _config(args, inst.m)
    grid = default_grid(args.grid)
    pairs = negativity_instance(inst, cfg, grid)
    out = _outdir(args)
    analysis.write_negativity_csv(out / "negativity.csv", pairs)
    fractions = [f for _t, f in pairs]
    i = int(np.argmax(fractions))
    print(f"wrote {out / 'negativity.csv'}")
    print(f"max negative fraction = {_fmt(fractions[i])} "
          f"at t = {_fmt(pairs[i][0])}")
    return 0


def _run_v3(args) -> int:
    gamma2 = args.gamma2 if args.gamma2 is not None else 1.0
    alpha, jxx = args.alpha, args.jxx
    if alpha is None and jxx is None:
        jxx = 0.6
    try:
        cfg = default_config(1, gamma2=gamma2,
                             gamma1_factor=args.gamma1_factor,
                             alpha=alpha, jxx=jxx)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    jzz = args.jzz if args.jzz is not None else 3.0
    grid = default_grid(args.grid)
    bundle = v3_model(args.nc, 1.0, jzz, cfg, grid)
    out = _outdir(args)
    analysis.write_v3_csv(out / "v3.csv", bundle)
    stage2 = grid >= cfg.t_sep
    beta2 = bundle.beta[stage2]
    flips = bool(np.any(beta2[:-1] * beta2[1:] < 0.0))
    print(f"wrote {out / 'v3.csv'}")
    print(f"alpha stays positive: {bool(np.all(bundle.alpha > 0.0))}")
    print(f"beta changes sign in stage 2: {flips}")
    return 0


def _run_iterate(args) -> int:
    comp = _load_instance(args.instance)
    if not isinstance(comp, CompositeInstance):
        raise ValidationError("iterate needs a composite instance "
                              "(structure = composite)")
    ms = [len(f) for f in comp.families]
    n_cs = [max(f) for f in comp.families]
    try:
        icfg = iteration_config(ms, n_cs, k_factor=args.gamma1_factor)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    grid = default_grid(args.grid)
    results = iterate_demo(comp, icfg, grid)
    out = _outdir(args)
    for j, res in enumerate(results):
        path = out / f"bare_iter{j}.csv"
        analysis.write_spectrum_csv(path, res.trace)
        drv = ",".join(str(d + 1) for d in res.drivers) or "none"
        print(f"iteration {j} (drivers: {drv}): "
              f"{res.crossings} bare crossing(s) -> {path}")
    return 0


def _run_stage0(args) -> int:
    inst = _gic_instance(args)
    cfg = _config(args, inst.m)
    graph = expand(inst)
    if graph.jzz_clique is None:
        graph.jzz_clique = resolve_jzz_clique(cfg, inst.m_g)
    ts = default_grid(args.grid)
    try:
        report = stage0_gap_scan(graph, cfg, ts)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    out = _outdir(args)
    analysis.write_csv(out / "stage0.csv", ["t", "gap"],
                       list(zip(report.ts, report.gaps)))
    print(f"wrote {out / 'stage0.csv'}")
    print(f"min gap = {_fmt(report.min_gap)}, "
          f"threshold = {_fmt(report.threshold)}, "
          f"protected = {report.protected}")
    return 0


_RUNNERS = {
    "spectrum": _run_spectrum,
    "bounds": _run_bounds,
    "steering": _run_steering,
    "negativity": _run_negativity,
    "v3": _run_v3,
    "iterate": _run_iterate,
    "stage0": _run_stage0,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _RUNNERS[args.analysis](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AnalysisError, LinalgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
