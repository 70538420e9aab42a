"""YAML configuration: actuator geometry, material, height fit, estimator knobs.

The file speaks the bench units (mm, ml, Pa); loading converts to SI.
"""

from __future__ import annotations

import yaml

from .calibration import HeightFit
from .errors import BmaError
from .estimator import DEFAULT_V_MIN_MODEL, EstimatorConfig
from .geometry import RingSpec
from .harness import ML_TO_M3, MM_TO_M, SimScript, SimStep
from .material import DEFAULT_QUAD_REL_TOL, YeohCoeffs


class ConfigError(BmaError):
    """Missing or malformed configuration."""


def load_raw(path) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} is not a mapping")
    return data


def save_raw(path, data: dict) -> None:
    with open(path, "w") as fh:
        yaml.safe_dump(data, fh, sort_keys=False)


def _height_fit_from_dict(d: dict) -> HeightFit:
    return HeightFit(
        degree=int(d["degree"]),
        coeffs=tuple(float(c) for c in d["coeffs_m"]),
        v_min=float(d["v_min_ml"]) * ML_TO_M3,
        v_max=float(d["v_max_ml"]) * ML_TO_M3,
        v_scale=float(d["v_scale_ml"]) * ML_TO_M3,
    )


def height_fit_to_dict(fit: HeightFit) -> dict:
    return {
        "degree": fit.degree,
        "coeffs_m": [float(c) for c in fit.coeffs],
        "v_min_ml": fit.v_min / ML_TO_M3,
        "v_max_ml": fit.v_max / ML_TO_M3,
        "v_scale_ml": fit.v_scale / ML_TO_M3,
    }


def load_config(path, require_fit: bool = True) -> EstimatorConfig:
    data = load_raw(path)
    try:
        ring = RingSpec(
            r=float(data["ring"]["radius_mm"]) * MM_TO_M,
            t_i=float(data["ring"]["thickness_mm"]) * MM_TO_M,
        )
        yeoh = data["material"]["yeoh_pa"]
    except KeyError as exc:
        raise ConfigError(f"config missing key {exc}") from exc
    if len(yeoh) != 6:
        raise ConfigError("material.yeoh_pa must list exactly 6 coefficients")
    coeffs = YeohCoeffs(*(float(c) for c in yeoh))

    fit = None
    if "height_fit" in data:
        fit = _height_fit_from_dict(data["height_fit"])
    elif require_fit:
        raise ConfigError("config has no height_fit; run `calibrate` first")

    est = data.get("estimator", {})
    return EstimatorConfig(
        ring=ring,
        coeffs=coeffs,
        fit=fit,
        v_min_model=float(est.get("v_min_model_ml",
                                  DEFAULT_V_MIN_MODEL / ML_TO_M3)) * ML_TO_M3,
        quad_rel_tol=float(est.get("quad_rel_tol", DEFAULT_QUAD_REL_TOL)),
        inner_iterations=int(est.get("inner_iterations", 1)),
        pressure_filter_tau=float(est.get("pressure_filter_tau_s", 0.0)),
    )


def load_script(path) -> SimScript:
    data = load_raw(path)
    try:
        steps = tuple(
            SimStep(
                v_f=float(s["volume_ml"]) * ML_TO_M3,
                force=float(s["force_n"]),
                hold=float(s["hold_s"]),
            )
            for s in data["steps"]
        )
        return SimScript(
            steps=steps,
            sample_period=float(data["sample_period_s"]),
            noise_pa=float(data.get("pressure_noise_pa", 0.0)),
        )
    except KeyError as exc:
        raise ConfigError(f"script missing key {exc}") from exc
