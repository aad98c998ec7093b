"""Batch front-end: read a JSON scenario, run boundary sweeps, emit
plot-ready CSV files and a solver-versus-oracle report.

Exit codes: 0 full success, 1 configuration error, 2 at least one sweep
point failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

from . import metrics, region, scenarios, solver
from .model import (ConfigError, DecodingOrder, OperatingPoint, Weights,
                    load_scenario)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_POINT_FAILURES = 2

BOUNDARY_HEADER = "alpha1,alpha2,Rs1,Rs2,p1,p2,eta1,eta2,order,iterations,converged"


@dataclass
class RunManifest:
    scenario: str
    mode: str = "both"                 # secure | reliable | both
    grid: int = 21
    eh_overrides: list = field(default_factory=list)   # list of [psi1, psi2]
    oracle: bool = False
    oracle_res: int = 51
    out_dir: str = "."
    seed: int = 0

    def modes(self):
        return [solver.SECURE, solver.RELIABLE] if self.mode == "both" else [self.mode]


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _demand_tag(psi) -> str:
    return "e" + "-".join(f"{float(v):g}" for v in psi)


def _write_boundary(path: Path, boundary: region.RegionBoundary) -> None:
    lines = [BOUNDARY_HEADER]
    for pt in boundary.points:
        order = "-".join(str(u) for u in pt.order.one_based()) if pt.order else "-"
        lines.append(",".join(
            [_fmt(pt.alpha[0]), _fmt(pt.alpha[1]),
             _fmt(pt.rates[0]), _fmt(pt.rates[1]),
             _fmt(pt.op.powers[0]), _fmt(pt.op.powers[1]),
             _fmt(pt.op.splits[0]), _fmt(pt.op.splits[1]),
             order, str(pt.iterations), str(int(pt.converged))]))
    path.write_text("\n".join(lines) + "\n")


def _write_hull(path: Path, hull: np.ndarray) -> None:
    lines = ["R1,R2"] + [f"{_fmt(x)},{_fmt(y)}" for x, y in hull]
    path.write_text("\n".join(lines) + "\n")


def run_sweep(manifest: RunManifest) -> int:
    """Sweep every requested mode/demand combination and write the outputs."""
    try:
        cfg = load_scenario(manifest.scenario)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if manifest.grid < 2:
        print(f"ConfigError: grid must be >= 2, got {manifest.grid}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if manifest.mode not in ("both", solver.SECURE, solver.RELIABLE):
        print(f"ConfigError: unknown mode {manifest.mode!r}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    out = Path(manifest.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"IoError: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    demands = [np.asarray(psi, dtype=float) for psi in manifest.eh_overrides]
    if not demands:
        demands = [cfg.eh_demands.copy()]

    any_failed = False
    report = {"scenario": str(manifest.scenario), "grid": manifest.grid,
              "seed": manifest.seed, "runs": []}
    for mode in manifest.modes():
        for psi in demands:
            boundary = region.sweep(cfg, mode, psi=psi, grid=manifest.grid)
            tag = _demand_tag(psi)
            _write_boundary(out / f"boundary_{mode}_{tag}.csv", boundary)
            _write_hull(out / f"hull_{mode}_{tag}.csv", boundary.hull)
            entry = {"mode": mode, "eh_demands": [float(v) for v in psi],
                     "points": len(boundary.points),
                     "failures": boundary.failures}
            if boundary.failures:
                any_failed = True
            if manifest.oracle:
                entry["oracle"] = _oracle_comparison(
                    cfg, mode, psi, boundary, manifest.oracle_res)
            report["runs"].append(entry)
            print(f"{mode} {tag}: {len(boundary.points)} points, "
                  f"{len(boundary.failures)} failures")

    if manifest.oracle:
        (out / "report.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_POINT_FAILURES if any_failed else EXIT_OK


def _oracle_comparison(cfg, mode, psi, boundary, resolution) -> list:
    """Per swept point: exact solver objective versus the grid oracle."""
    rows = []
    for pt in boundary.points:
        a = pt.alpha
        if a[0] in (0.0, 1.0):
            weights = Weights(a)
        else:
            weights = region._clamped_weights(a[0])
        try:
            oracle = region.oracle_grid_search(
                cfg, mode, psi, weights, pt.order, resolution=resolution)
            oracle_obj = oracle.objective
        except region.NoFeasiblePointError:
            oracle_obj = None
        active = weights.alpha > 0
        solver_obj = float(np.min(pt.rates_raw[active] / weights.alpha[active]))
        rows.append({
            "alpha1": float(a[0]),
            "order": list(pt.order.one_based()) if pt.order else None,
            "solver_objective": solver_obj,
            "oracle_objective": oracle_obj,
            "shortfall": (None if oracle_obj is None
                          else max(oracle_obj - solver_obj, 0.0)),
        })
    return rows


# ---------------------------------------------------------------------------
# Verification battery
# ---------------------------------------------------------------------------

def run_verify(manifest: RunManifest) -> int:
    """Run the invariant battery on the scenario plus seeded random instances
    and print one pass/fail line per check."""
    try:
        cfg = load_scenario(manifest.scenario)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    rng = np.random.default_rng(manifest.seed)
    checks = [
        ("chain-rule conservation", _check_chain_rule(cfg, rng)),
        ("condensation soundness", _check_condensation(rng)),
        ("subset constraints at corners", _check_subsets(cfg, rng)),
        ("energy feasibility screen", _check_feasibility(cfg)),
        ("oracle dominance", _check_oracle_dominance(cfg, manifest.oracle_res)),
    ]
    width = max(len(name) for name, _ in checks)
    ok = True
    for name, (passed, detail) in checks:
        ok &= passed
        print(f"{name:<{width}}  {'PASS' if passed else 'FAIL'}  {detail}")
    return EXIT_OK if ok else EXIT_POINT_FAILURES


def _random_ops(rng, cfg, count):
    for _ in range(count):
        yield OperatingPoint(rng.uniform(0, cfg.power_budget),
                             rng.uniform(0, 1, cfg.num_users))


def _orders_to_check(num_users, limit: int = 6):
    out = []
    for perm in permutations(range(num_users)):
        out.append(DecodingOrder(perm))
        if len(out) >= limit:
            break
    return out


def _check_chain_rule(cfg, rng, cases: int = 200, tol: float = 1e-9):
    worst = 0.0
    configs = [cfg]
    for i in range(cases):
        configs.append(scenarios.random_config(rng, num_users=2 + i % 2,
                                               num_eve_antennas=2 + 2 * (i % 3 == 0)))
    for c in configs:
        p = rng.uniform(0, c.power_budget)
        users = range(c.num_users)
        subsets = [s for size in range(1, c.num_users + 1)
                   for s in combinations(users, size)]
        for order in _orders_to_check(c.num_users):
            for s in subsets:
                total = metrics.eve_rate_chain(c, p, order, s)[list(s)].sum()
                worst = max(worst, abs(total - metrics.eve_sum_rate(c, p, s)))
    return worst <= tol, f"worst gap {worst:.2e} (tol {tol:.0e})"


def _check_condensation(rng, cases: int = 300, tol: float = 1e-9):
    worst_bound, worst_anchor = 0.0, 0.0
    for _ in range(cases):
        nv = rng.integers(1, 5)
        nt = rng.integers(1, 6)
        posy = solver.Posynomial(np.exp(rng.uniform(-1, 1, nt)),
                                 rng.uniform(-2, 2, (nt, nv)))
        anchor = np.exp(rng.uniform(-0.7, 0.7, nv))
        mono = solver.condense(posy, anchor)
        worst_anchor = max(worst_anchor, abs(mono.value(anchor) - posy.value(anchor)))
        for _ in range(5):
            x = np.exp(rng.uniform(-0.7, 0.7, nv))
            worst_bound = max(worst_bound, mono.value(x) - posy.value(x))
    ok = worst_bound <= tol and worst_anchor <= tol
    return ok, f"worst overshoot {worst_bound:.2e}, anchor gap {worst_anchor:.2e}"


def _check_subsets(cfg, rng, cases: int = 20, tol: float = 1e-6):
    worst = -np.inf
    for op in _random_ops(rng, cfg, cases):
        for order in _orders_to_check(cfg.num_users):
            # Clamped corners are only guaranteed inside the region when no
            # user's secrecy gap went negative.
            gaps = (metrics.legitimate_rates(cfg, op)
                    - metrics.eve_rate_chain(cfg, op.powers, order))
            if np.any(gaps < 0):
                continue
            corner = metrics.secrecy_corner(cfg, op, order)
            check = metrics.subset_constraints_satisfied(cfg, op, corner, tol)
            worst = max(worst, check.worst_violation)
            if not check.ok:
                return False, f"violation {check.worst_violation:.2e} on subset {check.worst_subset}"
    return True, f"worst violation {worst:.2e} (tol {tol:.0e})"


def _check_feasibility(cfg):
    limit = scenarios.max_deliverable_energy(cfg)
    infeasible = [k for k in range(cfg.num_users) if cfg.eh_demands[k] > limit[k]]
    if infeasible:
        try:
            region.oracle_grid_search(cfg, solver.RELIABLE, cfg.eh_demands,
                                      Weights.pair(0.5), resolution=11)
        except region.NoFeasiblePointError:
            return True, (f"demands exceed deliverable energy for users "
                          f"{infeasible}; NoFeasiblePoint confirmed")
        return False, "demands exceed the closed-form limit but the oracle found a point"
    return True, f"demands within deliverable energy {np.round(limit, 4)}"


def _check_oracle_dominance(cfg, resolution, tol_frac: float = 0.05):
    worst = 0.0
    for alpha1 in (0.25, 0.5, 0.75):
        weights = Weights.pair(alpha1)
        try:
            oracle = region.oracle_grid_search(cfg, solver.RELIABLE,
                                               cfg.eh_demands, weights,
                                               resolution=resolution)
        except region.NoFeasiblePointError:
            try:
                solver.iterate(cfg, weights, None, solver.RELIABLE)
            except solver.InfeasibleError:
                continue
            return False, f"solver found a point where the oracle proved none (alpha1={alpha1})"
        try:
            rep = solver.iterate(cfg, weights, None, solver.RELIABLE)
        except solver.InfeasibleError:
            return False, f"solver infeasible where the oracle found a point (alpha1={alpha1})"
        shortfall = max(oracle.objective - rep.objective, 0.0)
        rel = shortfall / max(oracle.objective, 1e-12)
        worst = max(worst, rel)
        if rel > tol_frac:
            return False, f"solver {rel:.1%} below oracle at alpha1={alpha1}"
    return True, f"worst relative shortfall {worst:.2%} (tol {tol_frac:.0%})"


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--scenario", required=True, help="path to the scenario JSON")
    p.add_argument("--grid", type=int, default=21, help="number of weight samples")
    p.add_argument("--oracle-res", type=int, default=51,
                   help="grid resolution per axis for the oracle")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=0, help="seed for random checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swiptsec",
        description="Pareto boundaries of secrecy/reliable rate regions with "
                    "power-splitting harvesting receivers")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep_p = sub.add_parser("sweep", help="trace region boundaries to CSV")
    _add_common(sweep_p)
    sweep_p.add_argument("--mode", default="both",
                         choices=["secure", "reliable", "both"])
    sweep_p.add_argument("--eh", action="append", default=[],
                         metavar="PSI1,PSI2",
                         help="energy-demand override; repeatable")
    sweep_p.add_argument("--oracle", action="store_true",
                         help="also run the grid oracle per point")

    verify_p = sub.add_parser("verify", help="run the invariant battery")
    _add_common(verify_p)
    return parser


def _manifest_from_args(args) -> RunManifest:
    overrides = []
    for spec in getattr(args, "eh", []):
        overrides.append([float(v) for v in spec.split(",")])
    return RunManifest(scenario=args.scenario,
                       mode=getattr(args, "mode", "both"),
                       grid=args.grid,
                       eh_overrides=overrides,
                       oracle=getattr(args, "oracle", False),
                       oracle_res=args.oracle_res,
                       out_dir=args.out,
                       seed=args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = _manifest_from_args(args)
    except ValueError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if args.command == "sweep":
        return run_sweep(manifest)
    return run_verify(manifest)


if __name__ == "__main__":
    sys.exit(main())
