import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iqeis.afe import (
    AdcSpec,
    ChannelConfig,
    RandlesModel,
    RheostatSpec,
    TableModel,
    adc_quantize,
    channel_stream,
    randles_impedance,
    reference_amplitude,
    rheostat_resistance,
)
from iqeis.dds import ExcitationSpec, reference_stream
from iqeis.errors import RangeError, SaturationError
from iqeis.freq_plan import ClockConfig, plan_sampling
from iqeis.spectrum import dft_oracle

CONTROL = RandlesModel(3.9e3, 100e3, 0.068e-6)


def randles_by_hand(rs, rf, c, f):
    # Rationalized form: R_F (1 - j x) / (1 + x^2)
    x = 2 * math.pi * f * rf * c
    re = rs + rf / (1 + x * x)
    im = -rf * x / (1 + x * x)
    return math.hypot(re, im), math.degrees(math.atan2(im, re))


def test_randles_dc_and_infinity():
    z0 = randles_impedance(CONTROL, 0.0)
    assert z0 == pytest.approx(103.9e3)
    assert z0.imag == 0
    assert randles_impedance(CONTROL, math.inf) == 3.9e3


def test_randles_1khz():
    assert 2 * math.pi * 1000 * 100e3 * 0.068e-6 == pytest.approx(42.726, abs=1e-3)
    mag, ph = randles_by_hand(3.9e3, 100e3, 0.068e-6, 1000)
    z = randles_impedance(CONTROL, 2 * math.pi * 1000)
    assert abs(z) == pytest.approx(mag, rel=1e-12)
    assert math.degrees(math.atan2(z.imag, z.real)) == pytest.approx(ph, abs=1e-10)
    assert abs(z) == pytest.approx(4594.79, abs=0.01)
    assert abs(z) == pytest.approx(4594.6, rel=1e-4)
    assert ph == pytest.approx(-30.6, abs=0.05)


models = st.builds(
    RandlesModel,
    st.floats(1.0, 1e6),
    st.floats(1.0, 1e7),
    st.floats(1e-12, 1e-3),
)


@given(models, st.lists(st.floats(0.0, 1e7), min_size=2, max_size=30))
def test_randles_magnitude_monotone_and_phase_range(model, omegas):
    omegas = sorted(omegas)
    z = randles_impedance(model, np.array(omegas))
    mags = np.abs(z)
    assert np.all(np.diff(mags) <= 1e-9 * mags[:-1])
    ph = np.degrees(np.angle(z))
    assert np.all(ph <= 0) and np.all(ph > -90)


def test_rheostat_values():
    assert rheostat_resistance(0) == 100.0
    assert rheostat_resistance(10) == pytest.approx(4037.0, abs=0.05)
    assert rheostat_resistance(100) == pytest.approx(39470.1, abs=0.05)
    assert rheostat_resistance(10) == 100 + 50000 * 10 / 127
    assert RheostatSpec().R_min == 0.002 * RheostatSpec().R_max


@pytest.mark.parametrize("code", [-1, 128, 1000, 2.5])
def test_rheostat_range(code):
    with pytest.raises(RangeError):
        rheostat_resistance(code)


def test_reference_amplitude():
    assert reference_amplitude(10, 1.0) == pytest.approx(0.0404, abs=1e-4)
    assert reference_amplitude(10, 1.0) * 1e3 == pytest.approx(40, rel=0.02)
    assert reference_amplitude(0, 1.0) == pytest.approx(0.001)
    assert reference_amplitude(57, 0.0) == 0


def test_adc_quantize():
    assert adc_quantize(1.65, 3.3, 10) == (512, False)
    assert adc_quantize(-0.1, 3.3, 10) == (0, True)
    assert adc_quantize(3.3, 3.3, 10) == (1023, False)
    assert adc_quantize(3.4, 3.3, 10) == (1023, True)
    assert adc_quantize(0.0, 3.3, 10) == (0, False)


def test_table_model_interpolates_in_log_frequency():
    t = TableModel((10.0, 1000.0), (100 + 0j, 300 - 200j))
    z = t.impedance(2 * math.pi * 100.0)  # halfway in log f
    assert z == pytest.approx(200 - 100j)
    assert t.impedance(2 * math.pi * 1.0) == pytest.approx(100)
    assert t.impedance(2 * math.pi * 1e5) == pytest.approx(300 - 200j)


PLAN_1K = plan_sampling(1000.0, ClockConfig())
EXC = ExcitationSpec(V1=0.02)
IDEAL = AdcSpec(ideal=True)


def resistor(r):
    return TableModel((1e-3, 1e6), (complex(r), complex(r)))


def test_resistor_equal_to_r_out_mirrors_reference():
    r_out = rheostat_resistance(100)
    ch = ChannelConfig(dut=resistor(r_out), N_out=100)
    s = channel_stream(ch, EXC, PLAN_1K, 1, adc=IDEAL)
    ref = reference_stream(EXC, PLAN_1K, 1, adc=IDEAL)
    mid = 1.65 / 3.3 * 1023
    np.testing.assert_allclose(s.codes - mid, -(ref.codes - mid), atol=1e-9)


def test_control_randles_stream_amplitude_and_phase():
    ch = ChannelConfig(dut=CONTROL, N_out=100)
    s = channel_stream(ch, EXC, PLAN_1K, 1, adc=IDEAL)
    ref = reference_stream(EXC, PLAN_1K, 1, adc=IDEAL)
    mag, _ = randles_by_hand(3.9e3, 100e3, 0.068e-6, float(PLAN_1K.f_q))
    assert 0.02 / mag == pytest.approx(4.353e-6, rel=1e-3)
    a_ch, ph_ch = dft_oracle(s)
    _, ph_ref = dft_oracle(ref)
    assert a_ch * 3.3 / 1023 == pytest.approx(0.1718, abs=2e-4)
    lead = (ph_ch - (ph_ref + 180) + 180) % 360 - 180
    assert lead == pytest.approx(30.6, abs=0.05)


def test_clipping_flag_when_swing_exceeds_half_rail():
    # R_out * V1 / |Z| well above V_dd / 2
    ch = ChannelConfig(dut=resistor(100.0), N_out=127)
    s = channel_stream(ch, ExcitationSpec(V1=0.02), PLAN_1K, 2)
    assert s.clipped and all(s.clipped_cycles)


def test_saturation_error_when_every_sample_clips():
    ch = ChannelConfig(dut=resistor(1e5), first_cycle_glitch=0.0)
    spec = ExcitationSpec(V1=0.0, V_mid=5.0)
    with pytest.raises(SaturationError):
        channel_stream(ch, spec, PLAN_1K, 1)


def test_noiseless_stream_is_cycle_periodic():
    ch = ChannelConfig(dut=CONTROL)
    s = channel_stream(ch, EXC, plan_sampling(3000.0, ClockConfig()), 2)
    np.testing.assert_array_equal(s.cycle(0), s.cycle(1))


def test_glitch_confined_to_first_cycle():
    ch = ChannelConfig(dut=CONTROL, first_cycle_glitch=0.3)
    clean = channel_stream(ChannelConfig(dut=CONTROL), EXC, PLAN_1K, 2)
    s = channel_stream(ch, EXC, PLAN_1K, 2)
    np.testing.assert_array_equal(s.cycle(1), clean.cycle(1))
    assert np.any(s.cycle(0) != clean.cycle(0))


def test_noise_reproducible_per_seed():
    a = channel_stream(ChannelConfig(dut=CONTROL, noise_rms=1e-3, rng_seed=5), EXC, PLAN_1K, 2)
    b = channel_stream(ChannelConfig(dut=CONTROL, noise_rms=1e-3, rng_seed=5), EXC, PLAN_1K, 2)
    c = channel_stream(ChannelConfig(dut=CONTROL, noise_rms=1e-3, rng_seed=6), EXC, PLAN_1K, 2)
    np.testing.assert_array_equal(a.codes, b.codes)
    assert np.any(a.codes != c.codes)


def test_channel_config_invariants():
    with pytest.raises(RangeError):
        ChannelConfig(dut=CONTROL, N_out=128)
    with pytest.raises(ValueError):
        ChannelConfig(dut=CONTROL, noise_rms=-1)
    with pytest.raises(ValueError):
        RandlesModel(0, 1, 1)
