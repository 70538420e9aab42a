"""Trace ingestion, synthetic trace simulation, and evaluation.

Traces are CSV files with header ``t_s,volume_ml,pressure_pa`` and optional
ground-truth columns ``force_n,indent_mm``.  Internally everything is SI;
conversion happens here at the file boundary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BmaError,
    MissingGroundTruth,
    NoConvergence,
    NonMonotoneTime,
    OutOfRange,
    ParseError,
)
from .estimator import (
    EstimatorConfig,
    EstimatorState,
    StateEstimate,
    _reconstruct,
    null_estimate,
    rmse,
    step,
)

ML_TO_M3 = 1e-6
MM_TO_M = 1e-3

SIM_FIXED_POINT_TOL = 1e-10   # [m]
SIM_FIXED_POINT_CAP = 100


@dataclass(frozen=True)
class TraceRecord:
    t: float                  # timestamp [s]
    v_f: float                # injected volume [m3]
    p: float                  # chamber pressure [Pa]
    f_true: float | None = None    # ground-truth force [N]
    h2_true: float | None = None   # ground-truth indentation [m]

    @property
    def has_truth(self) -> bool:
        return self.f_true is not None and self.h2_true is not None


@dataclass(frozen=True)
class SimStep:
    v_f: float       # held injected volume [m3]
    force: float     # applied planar force [N]
    hold: float      # hold duration [s]


@dataclass(frozen=True)
class SimScript:
    steps: tuple[SimStep, ...]
    sample_period: float       # [s]
    noise_pa: float = 0.0      # Gaussian pressure noise amplitude [Pa]

    def __post_init__(self):
        if self.sample_period <= 0:
            raise ValueError("sample period must be positive")
        if self.noise_pa < 0:
            raise ValueError("noise amplitude must be nonnegative")
        if not self.steps:
            raise ValueError("script must contain at least one step")
        for s in self.steps:
            if s.hold <= 0:
                raise ValueError("hold durations must be positive")


def ingest_trace(path) -> list[TraceRecord]:
    """Parse a trace CSV into SI records, validating monotone timestamps."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"t_s", "volume_ml", "pressure_pa"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ParseError(f"missing required columns {sorted(required)}", line=1)
        prev_t = None
        for i, row in enumerate(reader, start=2):
            try:
                t = float(row["t_s"])
                v_ml = float(row["volume_ml"])
                p = float(row["pressure_pa"])
            except (TypeError, ValueError) as exc:
                raise ParseError(str(exc), line=i) from exc
            if v_ml < 0:
                raise ParseError(f"negative volume {v_ml}", line=i)
            if prev_t is not None and t <= prev_t:
                raise NonMonotoneTime(
                    f"line {i}: timestamp {t} not greater than previous {prev_t}"
                )
            prev_t = t

            f_true = h2_true = None
            if row.get("force_n") not in (None, ""):
                try:
                    f_true = float(row["force_n"])
                except ValueError as exc:
                    raise ParseError(str(exc), line=i) from exc
            if row.get("indent_mm") not in (None, ""):
                try:
                    h2_true = float(row["indent_mm"]) * MM_TO_M
                except ValueError as exc:
                    raise ParseError(str(exc), line=i) from exc
            records.append(TraceRecord(t=t, v_f=v_ml * ML_TO_M3, p=p,
                                       f_true=f_true, h2_true=h2_true))
    return records


def write_trace(path, records) -> None:
    """Write records back to CSV, lossless at 9 significant digits."""
    with_truth = any(r.has_truth for r in records)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["t_s", "volume_ml", "pressure_pa"]
        if with_truth:
            header += ["force_n", "indent_mm"]
        writer.writerow(header)
        for r in records:
            row = [f"{r.t:.9g}", f"{r.v_f / ML_TO_M3:.9g}", f"{r.p:.9g}"]
            if with_truth:
                row += [
                    f"{r.f_true:.9g}" if r.f_true is not None else "",
                    f"{r.h2_true / MM_TO_M:.9g}" if r.h2_true is not None else "",
                ]
            writer.writerow(row)


def run_trace(records, cfg: EstimatorConfig,
              state: EstimatorState | None = None) -> list[StateEstimate]:
    """Run the estimator over a trace; never aborts.

    Applies the optional first-order pressure low-pass, and converts any
    per-sample model error into a flagged null estimate so adversarial
    inputs cannot kill the run.
    """
    if state is None:
        state = EstimatorState()
    estimates = []
    p_filt = None
    prev_t = None
    for rec in records:
        p = rec.p
        if cfg.pressure_filter_tau > 0 and p_filt is not None:
            dt = rec.t - prev_t
            alpha = dt / (cfg.pressure_filter_tau + dt)
            p = p_filt + alpha * (p - p_filt)
        p_filt = p
        prev_t = rec.t
        try:
            est, state = step(state, rec.v_f, p, cfg)
        except BmaError as exc:
            est = null_estimate({"step_error", type(exc).__name__})
        estimates.append(est)
    return estimates


def _forward_pressure(v_f: float, force: float, h2_prev: float,
                      cfg: EstimatorConfig) -> float:
    """Pressure consistent with the energy balance at the given state [Pa]."""
    g = _reconstruct(v_f, h2_prev, cfg)
    return (g.v_fm * g.kinematics.energy_density + force * g.h3) / v_f


def _check_fixed_point(v_f: float, force: float, h2_start: float,
                       cfg: EstimatorConfig) -> None:
    """Verify the indentation update contracts to a fixed point for (v_f, F)."""
    state = EstimatorState(h2_prev=h2_start)
    h2 = h2_start
    for _ in range(SIM_FIXED_POINT_CAP):
        p = _forward_pressure(v_f, force, state.h2_prev, cfg)
        est, state = step(state, v_f, p, cfg)
        if abs(state.h2_prev - h2) <= SIM_FIXED_POINT_TOL:
            return
        h2 = state.h2_prev
    raise NoConvergence(
        f"indentation fixed point did not converge for V_f={v_f}, F={force}"
    )


def simulate_trace(script: SimScript, cfg: EstimatorConfig,
                   seed: int) -> list[TraceRecord]:
    """Generate a synthetic trace by running the model forward.

    For each sample the energy balance is inverted at the scripted
    (volume, force) to produce the pressure, then the estimator's own
    indentation update advances the state; the resulting h2 and the
    scripted force are recorded as ground truth.  This closes the loop
    with the model itself, so a noise-free replay through the estimator is
    an internal-consistency check, not a physical validation.
    """
    for s in script.steps:
        if s.v_f < cfg.v_min_model:
            raise OutOfRange(
                f"scripted volume {s.v_f} below modeled minimum {cfg.v_min_model}"
            )
        _check_fixed_point(s.v_f, s.force, 0.0, cfg)

    rng = np.random.default_rng(seed)
    records = []
    state = EstimatorState()
    t = 0.0
    for s in script.steps:
        n = max(1, round(s.hold / script.sample_period))
        for _ in range(n):
            p_clean = _forward_pressure(s.v_f, s.force, state.h2_prev, cfg)
            est, state = step(state, s.v_f, p_clean, cfg)
            p_out = p_clean
            if script.noise_pa > 0:
                p_out += rng.normal(0.0, script.noise_pa)
            records.append(TraceRecord(t=t, v_f=s.v_f, p=p_out,
                                       f_true=s.force, h2_true=est.h2))
            t += script.sample_period
    return records


@dataclass(frozen=True)
class EvalReport:
    n_samples: int
    n_null: int
    rmse_f: float                 # [N]
    rmse_h2: float                # [m]
    rmse_p: float | None          # no-contact pressure prediction error [Pa]
    window_rmse_f: float | None = None
    window_rmse_h2: float | None = None


def evaluate(records, cfg: EstimatorConfig,
             contact_window: tuple[float, float] | None = None) -> EvalReport:
    """Run the estimator against a ground-truth trace and report RMSEs.

    rmse_p compares the free-inflation pressure prediction against the
    measured pressure on samples with zero ground-truth force.  The
    optional contact window (t0, t1) additionally restricts the force and
    indentation errors, mirroring the split between the pre-contact region
    and the indentation region.
    """
    if not records or not all(r.has_truth for r in records):
        raise MissingGroundTruth("trace lacks force_n/indent_mm ground truth")

    estimates = run_trace(records, cfg)
    pairs = [(r, e) for r, e in zip(records, estimates) if not e.is_null]
    n_null = len(records) - len(pairs)
    if not pairs:
        raise MissingGroundTruth("no samples within the modeled volume range")

    rmse_f = rmse([e.force for _, e in pairs], [r.f_true for r, _ in pairs])
    rmse_h2 = rmse([e.h2 for _, e in pairs], [r.h2_true for r, _ in pairs])

    free = [(r, e) for r, e in pairs if r.f_true == 0]
    rmse_p = rmse([e.p_hat for _, e in free],
                  [r.p for r, _ in free]) if free else None

    window_rmse_f = window_rmse_h2 = None
    if contact_window is not None:
        t0, t1 = contact_window
        inside = [(r, e) for r, e in pairs if t0 <= r.t <= t1]
        if inside:
            window_rmse_f = rmse([e.force for _, e in inside],
                                 [r.f_true for r, _ in inside])
            window_rmse_h2 = rmse([e.h2 for _, e in inside],
                                  [r.h2_true for r, _ in inside])
    return EvalReport(n_samples=len(records), n_null=n_null,
                      rmse_f=rmse_f, rmse_h2=rmse_h2, rmse_p=rmse_p,
                      window_rmse_f=window_rmse_f, window_rmse_h2=window_rmse_h2)
