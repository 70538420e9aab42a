"""Quasi-static state estimator: (injected volume, pressure) -> (h1, h2, h3, F).

Each sensor sample is treated as an equilibrium state.  The only carried
state is the previous total indentation h2; everything else is
reconstructed per sample from the calibrated height fit and the ellipsoid
closed forms, then the energy balance yields the external planar force and
the indentation update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calibration import HeightFit, evaluate_height
from .errors import DegenerateGeometry, LengthMismatch, NegativeDiscriminant
from .geometry import (
    DeformedShape,
    RingSpec,
    UnindentedShape,
    actuator_volume,
    center_shift,
    contact_radius,
    membrane_volume,
    solve_axes,
    unindented_shape,
)
from .material import (
    DEFAULT_QUAD_REL_TOL,
    StretchState,
    YeohCoeffs,
    free_membrane_volume,
    inflated_thickness,
    integration_angle,
    invariant_i1,
    perimeter,
    stretch,
    yeoh_energy_density,
)

DEFAULT_V_MIN_MODEL = 0.1e-6  # 0.1 ml in m3; the model is unreliable below this


@dataclass(frozen=True)
class EstimatorConfig:
    ring: RingSpec
    coeffs: YeohCoeffs
    fit: HeightFit
    v_min_model: float = DEFAULT_V_MIN_MODEL   # minimum modeled injected volume [m3]
    quad_rel_tol: float = DEFAULT_QUAD_REL_TOL
    inner_iterations: int = 1     # indentation updates per sensor sample
    pressure_filter_tau: float = 0.0   # first-order low-pass on p [s]; 0 disables

    def __post_init__(self):
        if self.v_min_model < 0:
            raise ValueError("v_min_model must be nonnegative")
        if self.inner_iterations < 1:
            raise ValueError("inner_iterations must be at least 1")


@dataclass(frozen=True)
class EstimatorState:
    h2_prev: float = 0.0   # previous total indentation [m]
    step_index: int = 0


@dataclass(frozen=True)
class StateEstimate:
    """Per-sample estimator output; NaN fields mark a null (skipped) sample."""

    h1: float
    h2: float
    h3: float
    h4: float
    force: float        # external planar force F [N]
    p_hat: float        # pressure predicted from the free-inflation balance [Pa]
    stretch: float
    shape: UnindentedShape | None = None
    deformed: DeformedShape | None = None
    kinematics: StretchState | None = None
    flags: frozenset = field(default_factory=frozenset)

    @property
    def is_null(self) -> bool:
        return math.isnan(self.h2)


def null_estimate(flags) -> StateEstimate:
    nan = float("nan")
    return StateEstimate(h1=nan, h2=nan, h3=nan, h4=nan, force=nan, p_hat=nan,
                         stretch=nan, flags=frozenset(flags))


@dataclass(frozen=True)
class _Reconstruction:
    """All per-sample geometry/material quantities at a given h2_prev."""

    shape: UnindentedShape
    deformed: DeformedShape
    kinematics: StretchState
    v_bma: float
    v_m: float
    v_fm: float
    h3: float
    flags: frozenset


def _reconstruct(v_f: float, h2_prev: float, cfg: EstimatorConfig) -> _Reconstruction:
    flags = set()
    h1 = evaluate_height(cfg.fit, v_f)
    h2_eff = h2_prev
    # h1 can shrink between samples; keep the carried indentation inside it
    if h2_eff >= h1:
        h2_eff = h1 * (1.0 - 1e-9)
        flags.add("h2_prev_clamped")

    v_bma = actuator_volume(v_f, cfg.ring)
    shape = unindented_shape(v_bma, h1, cfg.ring)
    h3 = h1 - h2_eff
    d_ell = solve_axes(v_bma, h3, cfg.ring)
    c_c = center_shift(shape.c, d_ell.c)
    k = contact_radius(shape, h2_eff, c_c)
    deformed = DeformedShape(a_d=d_ell.a, c_d=d_ell.c, h3=h3, c_c=c_c, k=k)

    theta1 = integration_angle(cfg.ring.r, h3, d_ell.c)
    arc = perimeter(d_ell.a, d_ell.c, h3, theta1, cfg.quad_rel_tol)
    lam = stretch(arc, cfg.ring)
    i1 = invariant_i1(lam)
    t_m = inflated_thickness(cfg.ring, arc)
    w = yeoh_energy_density(lam, cfg.coeffs)
    kin = StretchState(theta1=theta1, arc_length=arc, stretch=lam,
                       invariant=i1, thickness=t_m, energy_density=w)

    v_m = membrane_volume(cfg.ring)
    v_fm, clamped = free_membrane_volume(v_m, k, t_m)
    if clamped:
        flags.add("v_fm_clamped")
    return _Reconstruction(shape=shape, deformed=deformed, kinematics=kin,
                           v_bma=v_bma, v_m=v_m, v_fm=v_fm, h3=h3,
                           flags=frozenset(flags))


def predict_pressure(v_f: float, cfg: EstimatorConfig) -> float:
    """Pressure predicted for free (no-contact) inflation at volume v_f [Pa]."""
    if v_f < cfg.v_min_model:
        raise DegenerateGeometry(
            f"volume {v_f} below modeled minimum {cfg.v_min_model}"
        )
    g = _reconstruct(v_f, 0.0, cfg)
    return g.v_fm * g.kinematics.energy_density / v_f


def estimate_force(v_f: float, p: float, v_fm: float, w: float, h3: float) -> float:
    """External planar force from the energy balance, F = (V_f p - V_fm W) / h3 [N]."""
    if h3 <= 0:
        raise DegenerateGeometry(f"deformed height must be positive, got {h3}")
    return (v_f * p - v_fm * w) / h3


def slice_indentation(a: float, c: float, p: float, force: float) -> float:
    """Slice-induced indentation depth of the deformed membrane [m].

    h4 = -(c sqrt(pi^2 a^2 p^2 - pi F p) - pi a c p) / (pi a p); equals
    c (1 - sqrt(1 - F / (pi a^2 p))).
    """
    if p <= 0:
        raise ValueError(f"pressure must be positive, got {p}")
    disc = math.pi ** 2 * a ** 2 * p ** 2 - math.pi * force * p
    if disc < 0:
        raise NegativeDiscriminant(
            f"force {force} exceeds pressurized cross-section bound {math.pi * a * a * p}"
        )
    return -(c * math.sqrt(disc) - math.pi * a * c * p) / (math.pi * a * p)


def step(state: EstimatorState, v_f: float, p: float,
         cfg: EstimatorConfig) -> tuple[StateEstimate, EstimatorState]:
    """One estimator update for a sensor sample (v_f [m3], p [Pa]).

    Samples below the modeled volume range emit a null estimate and leave
    the indentation state untouched.  Geometry errors propagate and leave
    the state unchanged.
    """
    if v_f < cfg.v_min_model:
        est = null_estimate({"below_model_range"})
        return est, EstimatorState(h2_prev=state.h2_prev,
                                   step_index=state.step_index + 1)

    flags = set()
    h2_prev = state.h2_prev
    g = _reconstruct(v_f, h2_prev, cfg)
    force = h4 = h2 = 0.0
    for it in range(cfg.inner_iterations):
        flags |= g.flags
        force = estimate_force(v_f, p, g.v_fm, g.kinematics.energy_density, g.h3)
        a, c = g.shape.a, g.shape.c
        if p <= 0:
            h4 = 0.0
            flags.add("nonpositive_pressure")
        else:
            try:
                h4 = slice_indentation(a, c, p, force)
            except NegativeDiscriminant:
                h4 = c
                flags.add("force_exceeds_bound")
        h2_raw = h4 + g.deformed.c_c
        h1 = g.shape.h1
        h2 = min(max(h2_raw, 0.0), h1)
        if h2 != h2_raw:
            flags.add("h2_clamped")
        if it + 1 < cfg.inner_iterations:
            g = _reconstruct(v_f, h2, cfg)

    p_hat = g.v_fm * g.kinematics.energy_density / v_f
    est = StateEstimate(h1=g.shape.h1, h2=h2, h3=g.h3, h4=h4, force=force,
                        p_hat=p_hat, stretch=g.kinematics.stretch,
                        shape=g.shape, deformed=g.deformed,
                        kinematics=g.kinematics, flags=frozenset(flags))
    new_state = EstimatorState(h2_prev=h2, step_index=state.step_index + 1)
    return est, new_state


def rmse(estimates, truth) -> float:
    """Root-mean-square error between two equal-length series."""
    a = np.asarray(estimates, dtype=float)
    b = np.asarray(truth, dtype=float)
    if a.shape != b.shape:
        raise LengthMismatch(f"series lengths differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise LengthMismatch("series must contain at least one sample")
    return float(np.sqrt(np.mean((a - b) ** 2)))
