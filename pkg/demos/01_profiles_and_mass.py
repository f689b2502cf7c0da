# %% [markdown]
# # Profiles, Hawking mass and class membership
#
# A rotationally symmetric metric is stored through its Hawking mass
# m_H(r), with r the area radius.  Hyperbolic space has m_H = 0.  The
# anti-de Sitter-Schwarzschild metric has constant m_H and a horizon at
# the radius where 2 m_H meets the envelope sinh^(m-2) r cosh^2 r.

# %%
import numpy as np

from flatmass import (
    SampledProfile,
    WellSpec,
    ads_schwarzschild,
    gravity_well,
    hyperbolic,
    mass_of,
    rigidity_gap,
    validate,
)
from flatmass.geometry import envelope

# %%
for p in (hyperbolic(3), ads_schwarzschild(3, 0.1), gravity_well(WellSpec(3, 0.01, 0.99))):
    rep = validate(p)
    print(f"{p.kind:18s} member={rep.is_member}  boundary={rep.boundary_condition.value:16s}"
          f"  mass={mass_of(p).value:.6g}  r_min={p.r_min:.6f}")

# %% [markdown]
# The horizon of the mass-0.1 solution sits where the envelope equals 0.2.

# %%
p = ads_schwarzschild(3, 0.1)
print("envelope(r_min) =", float(envelope(p.r_min, 3)))

# %% [markdown]
# Rigidity: mass, sup m_H and sup F' vanish together only for hyperbolic
# space.  On a horizon the graph slope is unbounded.

# %%
print(rigidity_gap(hyperbolic(4)))
print(rigidity_gap(ads_schwarzschild(4, 0.05)))

# %% [markdown]
# Sampled profiles are joined by a monotone cubic.  A decreasing sample is
# caught by the validator.

# %%
bad = SampledProfile(3, [0, 1, 2, 3], [0, 0.2, 0.1, 0.3])
rep = validate(bad)
print(rep.is_member, rep.worst_monotonicity_defect)
for note in rep.notes:
    print(" ", note)

# %% [markdown]
# Geroch monotonicity in action: m_H along a gravity well rises steeply,
# blends, then stays flat.

# %%
well = gravity_well(WellSpec(3, 0.01, 0.99))
r = np.linspace(0, 0.4, 9)
print(np.column_stack([r, well.hawking_mass(r)]))
