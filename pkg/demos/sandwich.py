"""Moment-matching LP on a small grid: worst-case bounds and the sandwiching polynomials behind them."""

import numpy as np

from momentlearn.duality import MomentLPInstance, dual_sandwich, sandwich_slack
from momentlearn.moments import empirical_moments

grid = np.linspace(-1.0, 1.0, 21)[:, None]
f = (grid[:, 0] >= 0.1).astype(float)
# moments of the uniform law on the grid
probs = np.full(len(grid), 1.0 / len(grid))

for k in (1, 2, 4, 6):
    inst = MomentLPInstance(grid, empirical_moments(grid, k), f, source=probs)
    pair = dual_sandwich(inst)
    up, lo = pair.gaps
    s_up, s_lo = sandwich_slack(pair, inst)
    print(f"k={k}  E[f] in [{pair.min_value:.3f}, {pair.max_value:.3f}]  "
          f"gaps {up:.3f}/{lo:.3f}  slack {min(s_up, s_lo):.1e}")
