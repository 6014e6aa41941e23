"""Bit-faithful simulator of single-cycle quarter-integration I/Q impedance spectroscopy."""

from .errors import (
    BandError,
    DegenerateError,
    LengthError,
    MissingGroundTruth,
    ParseError,
    PlanError,
    RangeError,
    SaturationError,
    ValidationError,
)
from .freq_plan import ClockConfig, QuarterBoundary, SamplingPlan, compute_fcw, plan_sampling, quarter_boundaries
from .dds import ExcitationSpec, excitation_sample, reference_stream
from .afe import (
    ChannelConfig,
    RandlesModel,
    RheostatSpec,
    SampleStream,
    TableModel,
    adc_quantize,
    channel_stream,
    randles_impedance,
    reference_amplitude,
    rheostat_resistance,
)
from .iq import IQAccumulator, QuarterSums, iq_from_sums, overflow_budget, quarter_sums, select_frac_bits
from .spectrum import (
    CalibrationConfig,
    ComplexResponse,
    SpectrumPoint,
    dft_oracle,
    impedance_point,
    intermediary,
)
from .sweep import SweepConfig, SweepResult, acquisition_time, channel_capacity, log_grid, run_sweep

__version__ = "0.1.0"
