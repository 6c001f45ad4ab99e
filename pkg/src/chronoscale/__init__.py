"""Signals-and-systems calculus on nonuniform time scales.

Nabla/delta derivatives and their generalized exponentials, exact series
transforms with residue and contour inversion, LTI simulation, convolution
and correlation, fractional derivative kernels, and irregular-to-uniform
resampling, all on finite windows of isolated instants.
"""

from .calculus import Signal, antiderivative, as_signal, definite_integral, derivative, zero_signal
from .errors import ChronoscaleError
from .exponential import (
    HilgerGeometry,
    exp,
    exp_profile,
    hilger_classify,
    hilger_geometry,
    scale_change_check,
)
from .fractional import (
    FractionalKernel,
    fractional_derivative,
    gl_kernel_uniform,
    kernel_contour,
    kernel_distinct,
    power_function,
)
from .rational import Pole, RationalTransform
from .systems import (
    SimulationSummary,
    convolve,
    correlate,
    impulse_response,
    interpolate,
    resample_uniform,
    shifted_transform_factor,
    simulate,
    transfer_function,
)
from .timescale import (
    DELTA,
    NABLA,
    SuperTimeScale,
    TimeScale,
    build_time_scale,
    cumulative_graininess,
    graininess,
    super_time_scale,
    uniform_grid,
)
from .transform import (
    Contour,
    TransformValue,
    auto_contour,
    contour_inverse,
    contour_inverse_profile,
    direct_transform,
    direct_transform_nodes,
    impulse,
    invert_rational,
    roc_circle,
    unit_step,
    validate_contour,
)

__version__ = "0.1.0"

__all__ = [
    "ChronoscaleError",
    "Contour",
    "DELTA",
    "FractionalKernel",
    "HilgerGeometry",
    "NABLA",
    "Pole",
    "RationalTransform",
    "Signal",
    "SimulationSummary",
    "SuperTimeScale",
    "TimeScale",
    "TransformValue",
    "antiderivative",
    "as_signal",
    "auto_contour",
    "build_time_scale",
    "contour_inverse",
    "contour_inverse_profile",
    "convolve",
    "correlate",
    "cumulative_graininess",
    "definite_integral",
    "derivative",
    "direct_transform",
    "direct_transform_nodes",
    "exp",
    "exp_profile",
    "fractional_derivative",
    "gl_kernel_uniform",
    "graininess",
    "hilger_classify",
    "hilger_geometry",
    "impulse",
    "impulse_response",
    "interpolate",
    "invert_rational",
    "kernel_contour",
    "kernel_distinct",
    "power_function",
    "resample_uniform",
    "roc_circle",
    "scale_change_check",
    "shifted_transform_factor",
    "simulate",
    "super_time_scale",
    "transfer_function",
    "uniform_grid",
    "unit_step",
    "validate_contour",
    "zero_signal",
]
