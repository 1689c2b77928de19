"""Pseudospectral simulator and diagnostics for the mass-critical
fractional nonlinear Schrodinger equation with fractional dissipation."""

from .analysis import (
    apriori_bounds_check,
    check_admissible,
    critical_exponents,
    identity_residual_study,
    mass_threshold_probe,
    scattering_defect,
    scattering_series,
    sweep_damping,
)
from .field import Field
from .functionals import (
    DiagnosticsRecord,
    GNConstant,
    GNSampleSpec,
    energy,
    energy_identity_rhs,
    energy_lower_bound_check,
    gn_constant_estimate,
    mass,
    mass_identity_residual,
    sobolev_seminorm_sq,
    strichartz_accumulate,
)
from .grid import Grid, make_grid
from .integrator import (
    StepperConfig,
    Trajectory,
    convergence_study,
    dealias,
    evolve,
    nonlinear_substep,
    strang_step,
)
from .kernel import KernelL1Result, KernelQuadratureSpec, kernel_l1
from .params import ModelParams, make_params
from .profiles import InitialProfile, random_radial_field, sample_profile
from .semigroup import (
    IrreversibilityError,
    SemigroupMultiplier,
    apply_semigroup,
    dense_oracle_semigroup,
    fractional_laplacian,
    make_multiplier,
    semigroup_compose_check,
)

__all__ = [
    "DiagnosticsRecord",
    "Field",
    "GNConstant",
    "GNSampleSpec",
    "Grid",
    "InitialProfile",
    "IrreversibilityError",
    "KernelL1Result",
    "KernelQuadratureSpec",
    "ModelParams",
    "SemigroupMultiplier",
    "StepperConfig",
    "Trajectory",
    "apply_semigroup",
    "apriori_bounds_check",
    "check_admissible",
    "convergence_study",
    "critical_exponents",
    "dealias",
    "dense_oracle_semigroup",
    "energy",
    "energy_identity_rhs",
    "energy_lower_bound_check",
    "evolve",
    "fractional_laplacian",
    "gn_constant_estimate",
    "identity_residual_study",
    "kernel_l1",
    "make_grid",
    "make_multiplier",
    "make_params",
    "mass",
    "mass_identity_residual",
    "mass_threshold_probe",
    "nonlinear_substep",
    "random_radial_field",
    "sample_profile",
    "scattering_defect",
    "scattering_series",
    "semigroup_compose_check",
    "sobolev_seminorm_sq",
    "strang_step",
    "strichartz_accumulate",
    "sweep_damping",
]
