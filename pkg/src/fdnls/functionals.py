"""Conserved and dissipated functionals, identity residuals, and the
interpolation-constant machinery.

Conventions:
  mass      m(u) = ||u||_{L2};  the squared-mass dissipation identity is
            d/dt ||u||^2 = -2a ||(-Lap)^{s/2} u||^2.
  energy    E(u) = 1/2 ||(-Lap)^{alpha/2} u||^2 - (d/(4*alpha+2*d)) ||u||_theta^theta.
  energy identity: dE/dt = -a ||(-Lap)^{(s+alpha)/2} u||^2
            + a * Re int ((-Lap)^s u) |u|^(p-1) conj(u).
  The coupling term is often quoted with Im in place of Re; for a plane
  wave the exact solution forces the Re form (the Im form misses the
  |u|^(p+1) contribution entirely), and finite differences along computed
  trajectories confirm it.  Both parts are reported so the discrepancy
  stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import Field
from .params import ModelParams
from .semigroup import fractional_laplacian


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Per-time snapshot of the tracked functionals and residuals.

    mass_resid / energy_resid are centered-difference residuals of the
    dissipation identities over the interval ending at this record; they
    are NaN on the first record of a trajectory.
    """

    t: float
    mass_sq: float
    energy: float
    h_alpha_sq: float
    h_s_sq: float
    h_salpha_sq: float
    lp_theta: float
    strichartz_acc: float
    mass_resid: float
    energy_resid: float

    CSV_FIELDS = (
        "t",
        "mass_sq",
        "energy",
        "h_alpha_sq",
        "h_s_sq",
        "h_salpha_sq",
        "lp_theta",
        "strichartz_acc",
        "mass_resid",
        "energy_resid",
    )


def mass(field: Field) -> tuple[float, float]:
    """L2 norm and its square by grid quadrature."""
    sq = field.l2_norm_sq()
    return math.sqrt(sq), sq


def sobolev_seminorm_sq(field: Field, order: float) -> float:
    """||(-Lap)^(order/2) u||^2 via the spectral sum (Plancherel)."""
    grid = field.grid
    weights = grid.abs_xi ** (2.0 * order)
    return float(
        (weights * np.abs(field.spectral) ** 2).sum() * grid.cell_volume / grid.n_total
    )


def lp_norm_pow(field: Field, q: float) -> float:
    """||u||_q^q by physical-space quadrature."""
    return float((np.abs(field.values) ** q).sum() * field.grid.cell_volume)


def energy(field: Field, params: ModelParams) -> float:
    kinetic = 0.5 * sobolev_seminorm_sq(field, params.alpha)
    coef = params.d / (4.0 * params.alpha + 2.0 * params.d)
    return kinetic - coef * lp_norm_pow(field, params.theta)


def mass_identity_residual(
    rec0: DiagnosticsRecord, rec1: DiagnosticsRecord, params: ModelParams
) -> float:
    """Residual of the squared-mass identity between adjacent records:

        r = (m2(t1) - m2(t0)) / dt + 2a * avg(h_s_sq)

    Trapezoid averaging keeps r = O(dt^2) along second-order trajectories.
    """
    dt = rec1.t - rec0.t
    if dt <= 0.0:
        raise ValueError(f"records must be ordered in time, got dt={dt}")
    return (rec1.mass_sq - rec0.mass_sq) / dt + 2.0 * params.a * 0.5 * (
        rec0.h_s_sq + rec1.h_s_sq
    )


@dataclass(frozen=True)
class EnergyIdentityRHS:
    """Both terms of the energy dissipation rate, reported separately.

    dissipation = -a ||(-Lap)^((s+alpha)/2) u||^2
    coupling    = a * int ((-Lap)^s u) |u|^(p-1) conj(u)  (complex)

    total uses Re(coupling), the form confirmed by closed-form plane
    waves and by finite differences along trajectories.
    total_im_convention uses Im(coupling), the form sometimes quoted;
    it vanishes on real fields.
    """

    dissipation: float
    coupling: complex

    @property
    def total(self) -> float:
        return self.dissipation + self.coupling.real

    @property
    def total_im_convention(self) -> float:
        return self.dissipation + self.coupling.imag


def energy_identity_rhs(field: Field, params: ModelParams) -> EnergyIdentityRHS:
    a = params.a
    if a == 0.0:
        return EnergyIdentityRHS(dissipation=0.0, coupling=0.0 + 0.0j)
    dissipation = -a * sobolev_seminorm_sq(field, params.s + params.alpha)
    frac = fractional_laplacian(field, 2.0 * params.s).values
    u = field.values
    integrand = frac * np.abs(u) ** (params.p - 1.0) * np.conj(u)
    coupling = a * complex(integrand.sum()) * field.grid.cell_volume
    return EnergyIdentityRHS(dissipation=dissipation, coupling=coupling)


# ---------------------------------------------------------------------------
# Interpolation constant (controls int |u|^theta by the alpha-seminorm and
# a power of the mass) and the energy coercivity bound derived from it.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GNConstant:
    """Empirical lower estimate of the best interpolation constant A in

        int |u|^theta <= A ||(-Lap)^(alpha/2) u||^2 ||u||^(4*alpha/d)

    Built as a running maximum of sample ratios, so it can only grow with
    more samples; the small-mass threshold derived from it is accordingly
    an upper estimate of the usable smallness region.
    """

    alpha: float
    d: int
    estimate: float
    samples: int
    skipped: int
    best_descriptor: str

    @property
    def theta(self) -> float:
        return 4.0 * self.alpha / self.d + 2.0

    @property
    def energy_coefficient(self) -> float:
        """C = A * d/(4*alpha + 2*d), the coefficient in the coercivity bound."""
        return self.estimate * self.d / (4.0 * self.alpha + 2.0 * self.d)

    @property
    def small_mass_threshold(self) -> float:
        """Empirical mass level below which the energy controls the
        alpha-seminorm: ||u|| < (1/(2C))^(d/(4*alpha))."""
        return (1.0 / (2.0 * self.energy_coefficient)) ** (self.d / (4.0 * self.alpha))


def gn_ratio(field: Field, params: ModelParams) -> float | None:
    """Sample ratio int|u|^theta / (h_alpha * mass^(4*alpha/d)); None when
    the denominator degenerates.  Invariant under amplitude rescaling."""
    h_alpha = sobolev_seminorm_sq(field, params.alpha)
    _, mass_sq = mass(field)
    denom = h_alpha * mass_sq ** (2.0 * params.alpha / params.d)
    if denom <= 0.0 or not math.isfinite(denom):
        return None
    return lp_norm_pow(field, params.theta) / denom


@dataclass(frozen=True)
class GNSampleSpec:
    n_random: int = 200
    seed: int = 7
    widths: tuple[float, ...] = (0.35, 0.5, 0.7, 1.0, 1.4, 2.0, 2.8, 4.0)
    powers: tuple[float, ...] = (0.6, 0.8, 1.0, 1.3, 1.7, 2.2, 3.0)
    ring_radii: tuple[float, ...] = (1.0, 2.0, 3.0)
    refine: bool = True
    refine_steps: int = 160


def gn_constant_estimate(
    params: ModelParams, grid, spec: GNSampleSpec | None = None
) -> GNConstant:
    """Estimate the interpolation constant by ratio maximization.

    Three stages: a structured sweep over single-profile shapes (widths,
    super-gaussian exponents, ring radii for d = 2), a randomized batch of
    smooth radial mixtures, and a Nelder-Mead polish of the best
    single-profile shape.  The polish matters: it puts the estimate at a
    local maximum of the shape family, so held-out random mixtures (which
    dilute concentration) stay below it.
    """
    from .profiles import InitialProfile, random_radial_field, sample_profile

    if spec is None:
        spec = GNSampleSpec()

    best = -math.inf
    best_desc = ""
    samples = 0
    skipped = 0

    def consider(field: Field, desc: str) -> None:
        nonlocal best, best_desc, samples, skipped
        ratio = gn_ratio(field, params)
        samples += 1
        if ratio is None:
            skipped += 1
            return
        if ratio > best:
            best = ratio
            best_desc = desc

    length = grid.box_length
    no_trunc = math.inf  # structured shapes are kept narrow by construction
    for w in spec.widths:
        profile = InitialProfile("gaussian", 1.0, width=w, truncation_tol=no_trunc)
        consider(sample_profile(profile, grid), f"gaussian w={w}")
        for q in spec.powers:
            profile = InitialProfile(
                "super-gaussian", 1.0, width=w, power=q, truncation_tol=no_trunc
            )
            consider(sample_profile(profile, grid), f"super-gaussian w={w} q={q}")
    if grid.d == 2:
        for r0 in spec.ring_radii:
            for w in spec.widths[:4]:
                profile = InitialProfile(
                    "ring", 1.0, width=w, radius=r0, truncation_tol=no_trunc
                )
                consider(sample_profile(profile, grid), f"ring r0={r0} w={w}")

    rng = np.random.default_rng(spec.seed)
    for i in range(spec.n_random):
        consider(random_radial_field(grid, rng), f"random mixture #{i}")

    if spec.refine and best > 0.0:
        from scipy.optimize import minimize

        r2 = grid.radius() ** 2

        def shape_ratio(x) -> float:
            log_w, power = x
            w = math.exp(log_w)
            if not (2.0 * grid.dx < w < length / 4.0 and 0.3 < power < 5.0):
                return math.inf
            field = Field(grid, np.exp(-((r2 / (2.0 * w**2)) ** power)))
            ratio = gn_ratio(field, params)
            return -ratio if ratio is not None else math.inf

        starts = [(math.log(w), q) for w in spec.widths[2:6] for q in (0.8, 1.0, 1.5)]
        for x0 in starts:
            res = minimize(
                shape_ratio,
                x0,
                method="Nelder-Mead",
                options={"maxiter": spec.refine_steps, "xatol": 1e-6, "fatol": 1e-12},
            )
            samples += res.nfev
            if math.isfinite(res.fun) and -res.fun > best:
                best = -res.fun
                best_desc = (
                    f"polished super-gaussian w={math.exp(res.x[0]):.4g} q={res.x[1]:.4g}"
                )

    if best <= 0.0:
        raise ValueError("no non-degenerate sample produced a finite ratio")
    return GNConstant(
        alpha=params.alpha,
        d=params.d,
        estimate=best,
        samples=samples,
        skipped=skipped,
        best_descriptor=best_desc,
    )


@dataclass(frozen=True)
class EnergyBound:
    lhs: float
    rhs: float
    satisfied: bool


def energy_lower_bound_check(
    field: Field, params: ModelParams, gn: GNConstant
) -> EnergyBound:
    """Check E(u) >= ||(-Lap)^(alpha/2) u||^2 (1/2 - C ||u||^(4*alpha/d))
    with C derived from the empirical interpolation constant."""
    h_alpha = sobolev_seminorm_sq(field, params.alpha)
    _, mass_sq = mass(field)
    lhs = energy(field, params)
    rhs = h_alpha * (
        0.5 - gn.energy_coefficient * mass_sq ** (2.0 * params.alpha / params.d)
    )
    slack = 1e-12 * max(abs(lhs), abs(rhs), h_alpha, 1e-30)
    return EnergyBound(lhs=lhs, rhs=rhs, satisfied=lhs >= rhs - slack)


@dataclass(frozen=True)
class AccumulatorSeries:
    """Trapezoidal running integral of ||u(t)||_theta^theta over records."""

    times: tuple[float, ...]
    acc: tuple[float, ...]
    total: float
    total_root: float  # total^(1/theta), the space-time norm itself


def strichartz_accumulate(trajectory) -> AccumulatorSeries:
    records = trajectory.records
    if len(records) < 2:
        raise ValueError("need at least two records to accumulate")
    theta = trajectory.params.theta
    times = [records[0].t]
    acc = [0.0]
    for prev, cur in zip(records, records[1:]):
        times.append(cur.t)
        acc.append(acc[-1] + 0.5 * (cur.t - prev.t) * (prev.lp_theta + cur.lp_theta))
    total = acc[-1]
    return AccumulatorSeries(
        times=tuple(times),
        acc=tuple(acc),
        total=total,
        total_root=total ** (1.0 / theta),
    )
