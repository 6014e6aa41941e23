"""The three bench protocols: control, varying C_dl, varying R_F."""

from __future__ import annotations

from .afe import AdcSpec, ChannelConfig, RandlesModel
from .spectrum import CalibrationConfig
from .sweep import SweepConfig, log_grid

R_S = 3.9e3
R_F = 100e3
C_DL = 0.068e-6

CDL_VALUES = (0.068e-6, 0.15e-6, 0.33e-6, 0.56e-6)
RF_VALUES = (100e3, 53.6e3, 12e3, 3.9e3)

BENCH_BAND = (5e-2, 5e4)
BENCH_POINTS = 100


def control_models(n_channels: int = 4) -> list:
    return [RandlesModel(R_S, R_F, C_DL)] * n_channels


def varying_cdl_models() -> list:
    return [RandlesModel(R_S, R_F, c) for c in CDL_VALUES]


def varying_rf_models() -> list:
    return [RandlesModel(R_S, r, C_DL) for r in RF_VALUES]


PROTOCOLS = {
    "control": control_models,
    "varying_cdl": varying_cdl_models,
    "varying_rf": varying_rf_models,
}


def protocol_config(
    name: str = "control",
    *,
    ideal_adc: bool = False,
    alpha: float = 1 / 600,
    n_points: int = BENCH_POINTS,
    band: tuple = BENCH_BAND,
    N_out: int = 100,
    **overrides,
) -> SweepConfig:
    models = PROTOCOLS[name]()
    channels = [
        ChannelConfig(dut=m, N_out=N_out, channel_id=i + 1, rng_seed=i + 1) for i, m in enumerate(models)
    ]
    return SweepConfig(
        grid=tuple(log_grid(band[0], band[1], n_points)),
        channels=tuple(channels),
        adc=AdcSpec(ideal=ideal_adc),
        cal=CalibrationConfig(alpha),
        **overrides,
    )
