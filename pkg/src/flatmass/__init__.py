"""Rotationally symmetric asymptotically hyperbolic manifolds, their graph
embeddings, and explicit intrinsic flat distance bounds to hyperbolic space."""

from .bounds import (
    BoundReport,
    DeltaBudget,
    budget_at,
    choose_delta,
    cutoff,
    flat_distance_bound,
    q_factor,
    special_radii,
    strip_geometry,
)
from .embedding import (
    GraphEmbedding,
    TubularWindow,
    arclength,
    build_embedding,
    slope_bounds,
    tubular_window,
)
from .errors import *  # noqa: F401,F403
from .families import WellSpec, ads_schwarzschild, gravity_well, hyperbolic, sweep, well_depth
from .geometry import (
    Dimension,
    MetricProfile,
    SampledProfile,
    WarpSample,
    area_radius,
    convert_warp_to_profile,
    envelope,
    hawking_mass_graph,
    invert_envelope,
    mass_of,
    scalar_curvature_graph,
    sphere_area,
    unit_sphere_volume,
    warp_geometry,
    zprime_from_hawking,
)
from .numerics import Tolerance, find_root_increasing, integrate, integrate_singular_left
from .validators import rigidity_gap, validate

__version__ = "0.1.0"
