# %% [markdown]
# # Deep gravity wells do not obstruct the bound
#
# At fixed mass, pushing q_peak toward 1 makes the rising segment of a
# gravity well steeper, so the well gets deeper without bound.  The flat
# distance bound depends on the mass and barely notices.

# %%
import math

import numpy as np

from flatmass import WellSpec, flat_distance_bound, gravity_well, sweep, well_depth
from flatmass.bounds import bound_sweep

eps, D = 0.5, 1.0
alpha0 = 4 * math.pi * math.sinh(1.0) ** 2

for q in (0.9, 0.99, 0.999, 0.9999):
    p = gravity_well(WellSpec(3, 0.01, q))
    depth = well_depth(p)
    total = flat_distance_bound(p, eps, D, alpha0).total_flat_bound
    print(f"q_peak = {q:<7} depth = {depth.arclength:8.4f}   total bound = {total:.6g}")

# %% [markdown]
# Convergence as the mass shrinks.  The strip width scales like
# mass^(1/4), so the total only drops below eps for very small masses.

# %%
masses = np.logspace(-2, -26, 9)
items = sweep("gravity_well", masses, 3, q_peak=0.99)
rows = bound_sweep([(i.mass, i.profile, i.error) for i in items], eps, D, alpha0)
for row in rows:
    rep = row.report
    print(f"mass {row.mass:.1e}  S = {rep.S:.3e}  total = {rep.total_flat_bound:.4g}"
          f"  certified = {rep.certified}")
