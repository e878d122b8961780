"""Geodesic walk sampling on spheres and convex-body boundaries."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .budget import (BudgetReport, accuracy_budget, budget_report, mixing_time_bound,
                     oracle_call_budget)
from .diagnostics import (UniformityReport, contraction_profile, one_step_sphere_contraction_reference,
                          uniformity_stats, wasserstein1)
from .errors import (ContractViolation, CurvatureBoundViolated, DegenerateLanding, FinalAdjustFailed,
                     GeowalkError, NonUniqueGeodesic, NumericalContractError, RayExitsImmediately,
                     ThetaTooLarge)
from .geometry import project_to_tangent, rotate_in_plane, sample_unit_tangent
from .integrator import (ChordIntegrator, ExactIntegrator, IntegratorResult, approx_geodesic,
                         exact_geodesic, make_integrator)
from .manifolds import (ConvexBodyModel, CurvatureBounds, SphereModel, UnitTangent, ellipsoid_model,
                        sphere_distance, sphere_geodesic, sphere_parallel_transport)
from .oracle import StarStep, chord_step, intersect_ray
from .rng import RngStream
from .walk import ChainTrace, WalkConfig, run_coupled, run_walk, walk_step
