"""Strang-split time stepping for the damped focusing equation.

Both substeps are exact: the nonlinear flow is a pointwise phase rotation
(|u| is invariant along it) and the linear flow is a spectral multiplier.
All time-stepping error is therefore splitting (commutator) error, which
is second order in the step size for smooth states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .field import Field
from .functionals import (
    DiagnosticsRecord,
    energy,
    energy_identity_rhs,
    lp_norm_pow,
    mass,
    mass_identity_residual,
    sobolev_seminorm_sq,
)
from .params import ModelParams
from .semigroup import apply_semigroup

TERMINATION_STATUSES = ("completed", "blowup_detected", "instability")


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    t_end: float
    dealias: bool = True
    record_stride: int = 10
    blowup_threshold: float = 1e3
    adapt_dt: bool = False
    adapt_tol: float = 1e-4
    snapshot_times: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end < 0.0:
            raise ValueError(f"t_end must be >= 0, got {self.t_end}")
        if not self.blowup_threshold > 1.0:
            raise ValueError(
                f"blowup_threshold must exceed 1, got {self.blowup_threshold}"
            )
        if self.record_stride < 1:
            raise ValueError(f"record_stride must be >= 1, got {self.record_stride}")
        object.__setattr__(self, "snapshot_times", tuple(self.snapshot_times))


@dataclass(frozen=True)
class Trajectory:
    """Recorded functionals, optional state snapshots, and how the run ended."""

    records: tuple[DiagnosticsRecord, ...]
    snapshots: tuple[tuple[float, Field], ...]
    status: str
    params: ModelParams
    config: StepperConfig

    def record_times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def snapshot_at(self, t: float, tol: float = 1e-9) -> Field:
        for ts, field in self.snapshots:
            if abs(ts - t) <= tol * max(1.0, abs(t)):
                return field
        raise KeyError(f"no snapshot stored at t={t}")

    def sobolev_norm_series(self) -> np.ndarray:
        """H^alpha norms at record times, sqrt(mass_sq + h_alpha_sq)."""
        return np.array([math.sqrt(r.mass_sq + r.h_alpha_sq) for r in self.records])


def nonlinear_substep(field: Field, dt: float, params: ModelParams) -> Field:
    """Exact flow of the focusing term: u <- u * exp(i*dt*|u|^(p-1))."""
    if dt == 0.0:
        return field
    modulus = np.abs(field.values)
    return field.with_values(field.values * np.exp(1j * dt * modulus ** (params.p - 1.0)))


def dealias(field: Field) -> Field:
    """2/3-rule spectral cutoff (zero the top third of modes per axis)."""
    return Field.from_spectral(field.grid, field.spectral * field.grid.dealias_mask)


def strang_step(
    field: Field, dt: float, params: ModelParams, config: StepperConfig
) -> Field:
    """One symmetric step: half nonlinear, full linear, half nonlinear."""
    if dt < 0.0:
        raise ValueError(f"step size must be >= 0, got {dt}")
    if dt == 0.0:
        return field
    half = nonlinear_substep(field, 0.5 * dt, params)
    linear = apply_semigroup(half, dt, params)
    if config.dealias:
        linear = dealias(linear)
    return nonlinear_substep(linear, 0.5 * dt, params)


def _make_record(
    t: float,
    field: Field,
    params: ModelParams,
    prev: DiagnosticsRecord | None,
    prev_rhs: float,
    acc: float,
) -> tuple[DiagnosticsRecord, float, float]:
    _, mass_sq = mass(field)
    h_alpha_sq = sobolev_seminorm_sq(field, params.alpha)
    h_s_sq = sobolev_seminorm_sq(field, params.s)
    h_salpha_sq = sobolev_seminorm_sq(field, params.s + params.alpha)
    lp_theta = lp_norm_pow(field, params.theta)
    e = energy(field, params)
    rhs = energy_identity_rhs(field, params).total

    if prev is None:
        mass_resid = math.nan
        energy_resid = math.nan
    else:
        dt_rec = t - prev.t
        acc += 0.5 * dt_rec * (prev.lp_theta + lp_theta)
        probe = DiagnosticsRecord(
            t=t,
            mass_sq=mass_sq,
            energy=e,
            h_alpha_sq=h_alpha_sq,
            h_s_sq=h_s_sq,
            h_salpha_sq=h_salpha_sq,
            lp_theta=lp_theta,
            strichartz_acc=acc,
            mass_resid=math.nan,
            energy_resid=math.nan,
        )
        mass_resid = mass_identity_residual(prev, probe, params)
        energy_resid = (e - prev.energy) / dt_rec - 0.5 * (prev_rhs + rhs)

    record = DiagnosticsRecord(
        t=t,
        mass_sq=mass_sq,
        energy=e,
        h_alpha_sq=h_alpha_sq,
        h_s_sq=h_s_sq,
        h_salpha_sq=h_salpha_sq,
        lp_theta=lp_theta,
        strichartz_acc=acc,
        mass_resid=mass_resid,
        energy_resid=energy_resid,
    )
    return record, rhs, acc


def evolve(initial: Field, params: ModelParams, config: StepperConfig) -> Trajectory:
    """Step the full equation to t_end, recording diagnostics.

    Termination statuses are outcomes, not failures: 'blowup_detected'
    when the H^alpha norm reaches blowup_threshold times its initial
    value, 'instability' when a non-finite value appears.  With
    adapt_dt, the step is halved whenever the recorded mass-identity
    residual exceeds adapt_tol.
    """
    if not initial.is_finite():
        raise ValueError("initial field contains non-finite values")

    dt = config.dt
    n_steps = int(round(config.t_end / dt))
    if abs(n_steps * dt - config.t_end) > 1e-9 * max(1.0, config.t_end):
        raise ValueError(
            f"t_end={config.t_end} is not an integer number of steps of dt={dt}"
        )

    snapshot_left = sorted(config.snapshot_times)
    records: list[DiagnosticsRecord] = []
    snapshots: list[tuple[float, Field]] = []
    status = "completed"

    u = initial
    t = 0.0
    record, prev_rhs, acc = _make_record(0.0, u, params, None, 0.0, 0.0)
    records.append(record)
    initial_norm = math.sqrt(record.mass_sq + record.h_alpha_sq)
    if snapshot_left and abs(snapshot_left[0]) <= 1e-12:
        snapshots.append((0.0, u))
        snapshot_left.pop(0)

    steps_since_record = 0
    step = 0
    while t < config.t_end - 1e-12 * max(1.0, config.t_end):
        u = strang_step(u, dt, params, config)
        t += dt
        step += 1
        steps_since_record += 1

        if not u.is_finite():
            status = "instability"
            break

        mass_sq = u.l2_norm_sq_spectral()
        h_alpha_sq = sobolev_seminorm_sq(u, params.alpha)
        norm = math.sqrt(mass_sq + h_alpha_sq)
        blown_up = initial_norm > 0.0 and norm >= config.blowup_threshold * initial_norm

        at_end = t >= config.t_end - 1e-12 * max(1.0, config.t_end)
        if steps_since_record >= config.record_stride or at_end or blown_up:
            record, prev_rhs, acc = _make_record(t, u, params, records[-1], prev_rhs, acc)
            records.append(record)
            steps_since_record = 0
            if (
                config.adapt_dt
                and not at_end
                and math.isfinite(record.mass_resid)
                and abs(record.mass_resid) > config.adapt_tol
            ):
                dt = 0.5 * dt

        while snapshot_left and t >= snapshot_left[0] - 0.5 * dt:
            snapshots.append((t, u))
            snapshot_left.pop(0)

        if blown_up:
            status = "blowup_detected"
            break

    return Trajectory(
        records=tuple(records),
        snapshots=tuple(snapshots),
        status=status,
        params=params,
        config=config,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    dt_values: tuple[float, ...]
    errors: tuple[float, ...]
    order: float
    status: str  # "ok" | "inconclusive"


def convergence_study(
    initial: Field,
    params: ModelParams,
    dt_values: tuple[float, ...] | list[float],
    t_end: float,
    dealias_modes: bool = True,
) -> ConvergenceReport:
    """Observed order from consecutive-refinement differences at t_end.

    For each adjacent pair of step sizes the L2 difference of the final
    states is an error proxy; the order is the log-log slope over the
    pairs.  Needs at least three strictly decreasing step sizes; a
    non-monotone difference sequence yields status 'inconclusive'.
    """
    dts = [float(dt) for dt in dt_values]
    if len(dts) < 3:
        raise ValueError(f"need at least 3 step sizes, got {len(dts)}")
    if any(b >= a for a, b in zip(dts, dts[1:])):
        raise ValueError(f"step sizes must be strictly decreasing, got {dts}")

    finals = []
    for dt in dts:
        config = StepperConfig(dt=dt, t_end=t_end, dealias=dealias_modes,
                               record_stride=10**9, blowup_threshold=1e12,
                               snapshot_times=(t_end,))
        traj = evolve(initial, params, config)
        finals.append(traj.snapshot_at(t_end))

    cell = initial.grid.cell_volume
    errors = [
        float(np.sqrt((np.abs(a.values - b.values) ** 2).sum() * cell))
        for a, b in zip(finals, finals[1:])
    ]
    if any(e <= 0.0 for e in errors) or any(
        b >= a for a, b in zip(errors, errors[1:])
    ):
        return ConvergenceReport(tuple(dts), tuple(errors), math.nan, "inconclusive")

    slope = np.polyfit(np.log(dts[:-1]), np.log(errors), 1)[0]
    return ConvergenceReport(tuple(dts), tuple(errors), float(slope), "ok")
