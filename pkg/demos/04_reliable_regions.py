#!/usr/bin/env python3
"""Trace the reliable-rate Pareto boundaries of the weak-interference
benchmark with and without harvesting demands, and plot them.

The demand shrinks the region, but the boundary stays convex: power control
alone is optimal and no time sharing is needed."""

import numpy as np

from swiptsec import sweep
from swiptsec.scenarios import weak_interference
from swiptsec.solver import RELIABLE

cfg = weak_interference()
boundaries = {}
for psi in ((0.0, 0.0), (0.8, 0.8)):
    boundaries[psi] = sweep(cfg, RELIABLE, psi=psi, grid=21)

for psi, boundary in boundaries.items():
    pts = np.array([p.rates for p in boundary.points])
    print(f"demands {psi}: {len(pts)} points, "
          f"max single-user rate {pts[:, 0].max():.5f}, "
          f"symmetric point {pts[np.argmin(np.abs(pts[:, 0] - pts[:, 1]))]}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
else:
    fig, ax = plt.subplots(figsize=(5, 5))
    for (psi, boundary), style in zip(boundaries.items(), ("o-", "s-")):
        pts = np.array(sorted((p.rates for p in boundary.points),
                              key=lambda r: r[0]))
        ax.plot(pts[:, 0], pts[:, 1], style, ms=4, label=f"demands {psi}")
    ax.set_xlabel("user 1 rate (bits/channel use)")
    ax.set_ylabel("user 2 rate (bits/channel use)")
    ax.legend()
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig("reliable_regions.png", dpi=150)
    print("wrote reliable_regions.png")
