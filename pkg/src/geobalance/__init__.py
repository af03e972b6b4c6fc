"""Numerical laboratory for semi-geostrophic particle motion in rotating
shallow water: symplectic integration of the parcel equations, averaged
balance diagnostics, reduced slow models, a Hamiltonian particle-mesh
discretization, and an experiment harness."""

from .core import (EpsilonParameter, LinearPotential, ModelPotential,
                   PhaseState, PotentialField, kinetic_energy, total_energy)
from .integrators import (StepperConfig, TrajectoryRecord, flow_k,
                          geostrophic_rhs, integrate, kick_v, lsg_rhs,
                          rk4_step, slow_integrate, strang_step)
from .normalform import (DriftReport, QuadratureSpec, ageostrophic_momentum,
                         averaged_potential, balance_momentum, drift_metrics,
                         fit_exponential, generator_f1, homological_residual,
                         lsg_hamiltonian, poisson_bracket,
                         slow_manifold_state, transform_position,
                         untransform_position)

__all__ = [
    "EpsilonParameter", "LinearPotential", "ModelPotential", "PhaseState",
    "PotentialField", "kinetic_energy", "total_energy", "StepperConfig",
    "TrajectoryRecord", "flow_k", "geostrophic_rhs", "integrate", "kick_v",
    "lsg_rhs", "rk4_step", "slow_integrate", "strang_step", "DriftReport",
    "QuadratureSpec", "ageostrophic_momentum", "averaged_potential",
    "balance_momentum", "drift_metrics", "fit_exponential", "generator_f1",
    "homological_residual", "lsg_hamiltonian", "poisson_bracket",
    "slow_manifold_state", "transform_position", "untransform_position",
]

__version__ = "0.1.0"
