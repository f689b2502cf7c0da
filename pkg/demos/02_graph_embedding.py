# %% [markdown]
# # Graph embedding into H^m x R
#
# Every profile in the class embeds isometrically as a rotationally
# symmetric graph z = F(r).  The slope is F' = sqrt(rho / (1 - rho)) with
# rho = 2 m_H / envelope, so it blows up like (r - r_min)^(-1/2) at a
# horizon but the height stays finite.

# %%
import numpy as np

from flatmass import (
    ads_schwarzschild,
    arclength,
    build_embedding,
    slope_bounds,
    sphere_area,
    tubular_window,
)

# %%
emb = build_embedding(ads_schwarzschild(3, 0.1))
p = emb.profile
for r in (p.r_min, p.r_min + 1e-6, p.r_min + 0.1, 1.0, 3.0, p.r_max):
    print(f"r = {r:.6f}   F = {emb.height(r):.10f}   F' = {float(emb.slope(r)):.6g}")

# %% [markdown]
# Radial distance in the manifold exceeds the coordinate length.

# %%
print("arclength(r_min, r_min + 0.1) =", arclength(emb, p.r_min, p.r_min + 0.1))

# %% [markdown]
# The tube of radius D around the sphere of area alpha0.  With D = 2 it
# reaches the horizon, so the inner radius is clipped to r_min.

# %%
for D in (0.5, 2.0):
    w = tubular_window(emb, float(sphere_area(1.0, 3)), D)
    print(f"D = {D}: rDminus = {w.rDminus:.6f}  rDplus = {w.rDplus:.6f}  clipped = {w.clipped}")

# %% [markdown]
# Two-sided slope control from monotonicity of m_H.

# %%
sb = slope_bounds(emb, 0.5)
r = np.linspace(0.6, 4.0, 5)
print(np.column_stack([r, sb.lower(r), emb.slope(r), sb.upper(r)]))
