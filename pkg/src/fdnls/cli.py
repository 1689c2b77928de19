"""Command line surface.

Data goes to files or stdout, diagnostics go to stderr.  Exit codes:
0 success, 1 check failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys

import numpy as np

from . import analysis
from .config import ConfigError, RunConfig, build_run, config_hash, default_config, load_config
from .functionals import gn_constant_estimate, GNSampleSpec, strichartz_accumulate
from .integrator import convergence_study, evolve
from .io import emit_plotdata, sweep_summary_table, write_sweep_jsonl, write_timeseries
from .kernel import KernelRefinementError, kernel_l1
from .profiles import random_radial_field

ORDER_WINDOW = (1.7, 2.3)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(args) -> RunConfig:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
    else:
        cfg = default_config()
    for note in cfg.warnings:
        _info(f"warning: {note}")
    return cfg


def _run_id(cfg_hash: str, command: str) -> str:
    return hashlib.sha256(f"{cfg_hash}:{command}".encode()).hexdigest()[:12]


def _parse_exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _cmd_simulate(args) -> int:
    cfg = _load(args)
    params, _, initial = build_run(cfg)
    traj = evolve(initial, params, cfg.stepper)
    h = config_hash(cfg)
    path = args.output or cfg.output.timeseries
    write_timeseries(traj, path, _run_id(h, "simulate"), h)
    _info(
        f"simulate: status={traj.status} records={len(traj.records)} "
        f"t_final={traj.records[-1].t:.6g} wrote {path}"
    )
    if cfg.output.plot_x and cfg.output.plot_y and cfg.output.plot_path:
        emit_plotdata(
            traj, cfg.output.plot_x, cfg.output.plot_y, cfg.output.plot_path,
            cfg.output.plot_svg or None,
        )
        _info(f"simulate: wrote plot data {cfg.output.plot_path}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load(args)
    params, _, initial = build_run(cfg)
    results = analysis.sweep_damping(initial, params, cfg.stepper, cfg.sweep.a_values)
    h = config_hash(cfg)
    path = args.output or cfg.output.sweep
    write_sweep_jsonl(results, path, _run_id(h, "sweep"), h)
    print(sweep_summary_table(results))
    unstable = [r for r in results if r.status == "instability"]
    if unstable:
        _info(f"sweep: {len(unstable)} unstable point(s) flagged")
    _info(f"sweep: wrote {path}")
    return 0


def _cmd_admissible(args) -> int:
    d = args.d
    gamma = args.gamma
    if (args.q is None) != (args.r is None):
        _info("admissible: provide both --q and --r, or neither for a table")
        return 2
    if args.q is not None:
        verdict = analysis.check_admissible(args.q, args.r, d, gamma)
        label = (
            "admissible (boundary)"
            if verdict.boundary
            else ("admissible" if verdict.admissible else "not admissible")
        )
        scaling = "holds" if verdict.scaling_ok else "fails"
        print(f"(q={args.q:g}, r={args.r:g}), d={d}: {label}; scaling relation {scaling}")
        return 0
    print(f"{'q':>10} {'r(scaling)':>12} {'admissible':>11}")
    for q in (2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, 24.0, math.inf):
        inv = d / 2.0 - gamma - (0.0 if q == math.inf else 2.0 / q)
        if inv <= 0.0:
            continue
        r = d / inv
        verdict = analysis.check_admissible(q, r, d, gamma)
        tag = "yes" + ("*" if verdict.boundary else "") if verdict.admissible else "no"
        print(f"{q:>10g} {r:>12.6g} {tag:>11}")
    print("(* boundary case; r solves the scaling relation for the given gamma)")
    return 0


def _report(ok: bool, name: str, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def _cmd_verify(args) -> int:
    cfg = _load(args)
    params, _, initial = build_run(cfg)
    n = max(3, cfg.verify.refinements)
    dts = [cfg.stepper.dt / 2**i for i in range(n)]
    study = analysis.identity_residual_study(
        initial, params, cfg.stepper.t_end, dts, cfg.stepper.dealias
    )
    lo, hi = ORDER_WINDOW
    ok = _report(
        lo <= study.mass_slope <= hi,
        "mass-identity residual order",
        f"slope {study.mass_slope:.3f} over dt {list(study.dt_values)}",
    )
    ok &= _report(
        lo <= study.energy_slope <= hi,
        "energy-identity residual order",
        f"slope {study.energy_slope:.3f}",
    )

    plancherel = abs(initial.l2_norm_sq() - initial.l2_norm_sq_spectral()) / max(
        initial.l2_norm_sq(), 1e-300
    )
    ok &= _report(plancherel <= 1e-10, "Plancherel consistency", f"rel diff {plancherel:.2e}")

    if params.a > 0.0:
        traj = evolve(initial, params, cfg.stepper)
        masses = [r.mass_sq for r in traj.records]
        monotone = all(b <= a for a, b in zip(masses, masses[1:]))
        ok &= _report(monotone, "mass monotone non-increasing", f"{len(masses)} records")
        report = analysis.apriori_bounds_check(traj, params)
        ok &= _report(
            report.integral_margin >= -1e-6,
            "integrated dissipation bound",
            f"lhs {report.integral_lhs:.6g} <= rhs {report.integral_rhs:.6g}",
        )
    else:
        _info("verify: a=0, damped-bound checks skipped")
    return 0 if ok else 1


def _cmd_gn_estimate(args) -> int:
    cfg = _load(args)
    params, grid, _ = build_run(cfg)
    spec = GNSampleSpec(n_random=cfg.gn.samples, seed=cfg.gn.seed, refine=cfg.gn.refine)
    gn = gn_constant_estimate(params, grid, spec)
    print(f"interpolation constant estimate A = {gn.estimate:.12g}")
    print(f"energy coefficient C = {gn.energy_coefficient:.12g}")
    print(f"empirical small-mass threshold = {gn.small_mass_threshold:.12g}")
    print(f"samples = {gn.samples} (skipped {gn.skipped}); best: {gn.best_descriptor}")
    rng = np.random.default_rng(cfg.gn.heldout_seed)
    from .functionals import energy_lower_bound_check

    violations = 0
    for _ in range(cfg.gn.heldout):
        field = random_radial_field(grid, rng)
        if not energy_lower_bound_check(field, params, gn).satisfied:
            violations += 1
    print(f"held-out energy bound violations: {violations}/{cfg.gn.heldout}")
    return 0 if violations == 0 else 1


def _cmd_kernel(args) -> int:
    s_values = [float(x) for x in args.s.split(",")]
    print(f"{'s':>8} {'l1_mass':>18} {'levels':>7} {'rel_change':>12}")
    failed = False
    for s in s_values:
        try:
            res = kernel_l1(s, args.t, args.a)
            print(
                f"{s:>8g} {res.value:>18.12g} {len(res.level_values):>7d} "
                f"{res.rel_change:>12.3e}"
            )
        except KernelRefinementError as exc:
            failed = True
            print(f"{s:>8g} {'unstable':>18}")
            _info(f"kernel: {exc}")
    return 1 if failed else 0


def _cmd_scattering(args) -> int:
    cfg = _load(args)
    params, _, initial = build_run(cfg)
    t0s = cfg.scattering.t0_values
    horizon = cfg.scattering.horizon_factor
    times = sorted(set(t0s) | {horizon * t for t in t0s})
    from dataclasses import replace as dc_replace

    stepper = dc_replace(cfg.stepper, snapshot_times=tuple(times))
    traj = evolve(initial, params, stepper)
    if traj.status != "completed":
        _info(f"scattering: run ended with status {traj.status}")
        return 1
    result = analysis.scattering_series(
        traj, t0s, params, horizon, cfg.scattering.tolerance
    )
    print(f"{'t0':>8} {'t1':>8} {'defect':>16}")
    for t0, t1, delta in zip(result.t0_values, result.t1_values, result.defects):
        print(f"{t0:>8g} {t1:>8g} {delta:>16.8e}")
    if result.u_plus_t0 is not None:
        print(f"asymptotic frame state taken at t0 = {result.u_plus_t0:g}")
    return 0


def _cmd_convergence(args) -> int:
    cfg = _load(args)
    params, _, initial = build_run(cfg)
    n = max(3, cfg.verify.refinements)
    dts = [cfg.stepper.dt / 2**i for i in range(n)]
    report = convergence_study(initial, params, dts, cfg.stepper.t_end, cfg.stepper.dealias)
    if report.status != "ok":
        print(f"convergence: inconclusive (errors {list(report.errors)})")
        return 1
    lo, hi = ORDER_WINDOW
    ok = lo <= report.order <= hi
    print(
        f"convergence: order {report.order:.3f} over dt {list(report.dt_values)} "
        f"(errors {[f'{e:.3e}' for e in report.errors]})"
    )
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdnls",
        description="Simulator and diagnostics for the damped fractional NLS",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", help="YAML configuration file")
        return p

    p = with_config(sub.add_parser("simulate", help="run one trajectory, write CSV"))
    p.add_argument("--output", help="override the time-series output path")
    p.set_defaults(func=_cmd_simulate)

    p = with_config(sub.add_parser("sweep", help="damping sweep, write JSONL"))
    p.add_argument("--output", help="override the sweep output path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("admissible", help="admissible exponent pair calculator")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--q", type=_parse_exponent)
    p.add_argument("--r", type=_parse_exponent)
    p.set_defaults(func=_cmd_admissible)

    p = with_config(sub.add_parser("verify", help="identity-residual report"))
    p.set_defaults(func=_cmd_verify)

    p = with_config(sub.add_parser("gn-estimate", help="interpolation constant estimate"))
    p.set_defaults(func=_cmd_gn_estimate)

    p = sub.add_parser("kernel", help="dissipative kernel L1 mass table")
    p.add_argument("--s", default="0.25,0.5,1.0", help="comma-separated orders")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.set_defaults(func=_cmd_kernel)

    p = with_config(sub.add_parser("scattering", help="forward-flow defect series"))
    p.set_defaults(func=_cmd_scattering)

    p = with_config(sub.add_parser("convergence", help="splitting order report"))
    p.set_defaults(func=_cmd_convergence)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _info(f"config error: {exc}")
        return 2
    except (ValueError, OSError) as exc:
        _info(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
