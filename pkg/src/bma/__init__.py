"""Liquid-driven ballooning membrane actuator modeling and state estimation."""

from .calibration import HeightFit, evaluate_height, fit_height_poly
from .errors import (
    BmaError,
    DegenerateGeometry,
    IllConditioned,
    InsufficientData,
    LengthMismatch,
    MissingGroundTruth,
    NegativeDiscriminant,
    NoConvergence,
    NonMonotoneTime,
    OutOfRange,
    ParseError,
)
from .estimator import (
    EstimatorConfig,
    EstimatorState,
    StateEstimate,
    estimate_force,
    predict_pressure,
    rmse,
    slice_indentation,
    step,
)
from .geometry import (
    DeformedShape,
    Ellipsoid,
    RingSpec,
    UnindentedShape,
    actuator_volume,
    cap_volume,
    center_shift,
    contact_radius,
    membrane_volume,
    profile_polyline,
    solve_axes,
    sphere_baseline,
    unindented_shape,
)
from .harness import (
    EvalReport,
    SimScript,
    SimStep,
    TraceRecord,
    evaluate,
    ingest_trace,
    run_trace,
    simulate_trace,
    write_trace,
)
from .material import (
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

__version__ = "0.1.0"
