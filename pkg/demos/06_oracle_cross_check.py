#!/usr/bin/env python3
"""Cross-validate the condensation solver against the exhaustive grid
oracle, which knows nothing about posynomials: it just scans the whole
(p1, p2, eta1, eta2) box, drops harvesting-infeasible points, and zooms once
around the incumbent."""

import time

import numpy as np

from swiptsec import Weights, iterate, oracle_grid_search
from swiptsec.scenarios import (random_config, strong_interference,
                                weak_interference)
from swiptsec.solver import RELIABLE

cases = [
    ("weak, demands 0.8", weak_interference(eh_demands=(0.8, 0.8))),
    ("strong, demands 1.0", strong_interference(eh_demands=(1.0, 1.0))),
]
rng = np.random.default_rng(2024)
for i in range(3):
    cases.append((f"random {i}", random_config(rng, eh_fraction=0.4)))

print(f"{'instance':<22} {'alpha1':>6} {'solver':>10} {'oracle':>10} {'gap':>9} {'time':>7}")
for label, cfg in cases:
    for alpha1 in (0.5, 1.0):
        weights = Weights.pair(alpha1)
        t0 = time.time()
        oracle = oracle_grid_search(cfg, RELIABLE, None, weights, resolution=51)
        report = iterate(cfg, weights, None, RELIABLE)
        gap = report.objective - oracle.objective
        print(f"{label:<22} {alpha1:6.2f} {report.objective:10.6f} "
              f"{oracle.objective:10.6f} {gap:+9.6f} {time.time() - t0:6.2f}s")

print("\nPositive gaps mean the solver found a better point than the best")
print("grid node; the condensation iterations are not leaving measurable")
print("performance behind on these instances.")
