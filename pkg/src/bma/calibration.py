"""Volume-to-unindented-height calibration fit.

A 7th-order (configurable) polynomial is fitted by ordinary least squares
to the mean of inflation and deflation height measurements.  Volumes are
normalized by their maximum before fitting: a raw high-degree fit in m3
magnitudes (~1e-7) is catastrophically ill-conditioned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, InsufficientData, OutOfRange

DEFAULT_DEGREE = 7

# pairing tolerance for inflate/deflate samples, fraction of the volume range
PAIRING_TOL = 0.01

# condition-number ceiling for the normalized Vandermonde system
COND_LIMIT = 1e10

# slack on the validity-range guard, relative to the volume scale
_RANGE_EPS = 1e-12


@dataclass(frozen=True)
class HeightFit:
    """Polynomial map from injected volume to unindented apex height.

    Coefficients are over volume normalized by v_scale (ascending powers).
    Evaluation outside [v_min, v_max] is rejected, never extrapolated.
    """

    degree: int
    coeffs: tuple[float, ...]   # ascending powers of V_f / v_scale
    v_min: float                # validity range lower bound [m3]
    v_max: float                # validity range upper bound [m3]
    v_scale: float              # normalization divisor [m3]


def _pair_hysteresis(samples):
    """Average inflate/deflate heights at matching volumes.

    Nearest-volume pairing within PAIRING_TOL of the volume range; unpaired
    samples enter the mean with weight 1.  Returns (volumes, heights).
    """
    inflate = [(v, h) for v, h, phase in samples if phase == "inflate"]
    deflate = [(v, h) for v, h, phase in samples if phase == "deflate"]
    volumes = [v for v, _, _ in samples]
    span = max(volumes) - min(volumes)
    tol = PAIRING_TOL * span if span > 0 else 0.0

    paired_v, paired_h = [], []
    used = [False] * len(deflate)
    for v_i, h_i in inflate:
        best, best_gap = None, tol
        for j, (v_d, _) in enumerate(deflate):
            if not used[j] and abs(v_d - v_i) <= best_gap:
                best, best_gap = j, abs(v_d - v_i)
        if best is not None:
            used[best] = True
            v_d, h_d = deflate[best]
            paired_v.append(0.5 * (v_i + v_d))
            paired_h.append(0.5 * (h_i + h_d))
        else:
            paired_v.append(v_i)
            paired_h.append(h_i)
    for j, (v_d, h_d) in enumerate(deflate):
        if not used[j]:
            paired_v.append(v_d)
            paired_h.append(h_d)
    return np.asarray(paired_v), np.asarray(paired_h)


def fit_height_poly(samples, degree: int = DEFAULT_DEGREE) -> HeightFit:
    """Least-squares polynomial fit of height against normalized volume.

    samples: iterable of (V_f [m3], h [m], phase) with phase in
    {"inflate", "deflate"}.
    """
    samples = list(samples)
    if any(v < 0 for v, _, _ in samples):
        raise ValueError("calibration volumes must be nonnegative")
    if not samples:
        raise InsufficientData("no calibration samples")

    volumes, heights = _pair_hysteresis(samples)
    if len(np.unique(volumes)) < degree + 1:
        raise InsufficientData(
            f"need at least {degree + 1} distinct volumes, got {len(np.unique(volumes))}"
        )

    v_scale = float(volumes.max())
    if v_scale <= 0:
        raise InsufficientData("all calibration volumes are zero")
    x = volumes / v_scale
    vander = np.vander(x, degree + 1, increasing=True)
    cond = np.linalg.cond(vander)
    if cond > COND_LIMIT:
        raise IllConditioned(
            f"condition number {cond:.3g} exceeds {COND_LIMIT:.0e}; reduce the degree"
        )
    coeffs, *_ = np.linalg.lstsq(vander, heights, rcond=None)
    return HeightFit(
        degree=degree,
        coeffs=tuple(float(c) for c in coeffs),
        v_min=float(volumes.min()),
        v_max=float(volumes.max()),
        v_scale=v_scale,
    )


def evaluate_height(fit: HeightFit, v_f: float) -> float:
    """Evaluate the fitted unindented height at injected volume v_f [m]."""
    eps = _RANGE_EPS * fit.v_scale
    if not (fit.v_min - eps <= v_f <= fit.v_max + eps):
        raise OutOfRange(
            f"volume {v_f} outside calibrated range [{fit.v_min}, {fit.v_max}]"
        )
    h = float(np.polynomial.polynomial.polyval(v_f / fit.v_scale, fit.coeffs))
    if h <= 0:
        raise OutOfRange(f"fitted height non-positive ({h}) at volume {v_f}")
    return h
