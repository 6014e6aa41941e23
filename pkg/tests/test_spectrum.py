import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import const_stream, sine_stream
from iqeis.afe import AdcSpec, ChannelConfig, RandlesModel, channel_stream, randles_impedance, rheostat_resistance
from iqeis.dds import ExcitationSpec, reference_stream
from iqeis.errors import DegenerateError
from iqeis.freq_plan import ClockConfig, plan_sampling
from iqeis.iq import IQAccumulator, stream_iq
from iqeis.spectrum import (
    REFERENCE,
    WORKING,
    CalibrationConfig,
    ComplexResponse,
    dft_oracle,
    impedance_point,
    intermediary,
    wrap_degrees,
)


def test_intermediary_examples():
    x = intermediary(IQAccumulator(25465, 0), REFERENCE)
    assert x.X == 25465 and x.angle_deg == 0
    x = intermediary(IQAccumulator(0, -25465), REFERENCE)
    assert x.angle_deg == pytest.approx(90)
    x = intermediary(IQAccumulator(25465, 0), WORKING)
    assert x.X == -25465
    with pytest.raises(DegenerateError):
        intermediary(IQAccumulator(0, 0))


def test_unity_inverted_transfer():
    r_out = rheostat_resistance(100)
    ref = ComplexResponse(complex(1000, 300))
    ch = intermediary(IQAccumulator(-1000, 300), WORKING)  # raw X_ch = -X_ref
    p = impedance_point(ref, ch, r_out, CalibrationConfig(1.0))
    assert p.z_mag_raw == pytest.approx(39470.1, abs=0.05)
    assert p.z_phase == pytest.approx(0, abs=1e-12)


def test_alpha_scales_magnitude_only():
    ref, ch = ComplexResponse(3 + 4j), ComplexResponse(1 - 1j)
    a = impedance_point(ref, ch, 1000.0, CalibrationConfig(1.0))
    b = impedance_point(ref, ch, 1000.0, CalibrationConfig(1 / 600))
    assert b.z_mag_cal == pytest.approx(a.z_mag_raw / 600)
    assert b.z_mag_raw == a.z_mag_raw and b.z_phase == a.z_phase


def test_control_randles_end_to_end_1khz():
    plan = plan_sampling(1000.0, ClockConfig())
    adc = AdcSpec(ideal=True)
    exc = ExcitationSpec(V1=0.02)
    dut = RandlesModel(3.9e3, 100e3, 0.068e-6)
    ch = ChannelConfig(dut=dut, N_out=100)
    ref = reference_stream(exc, plan, 2, adc)
    s = channel_stream(ch, exc, plan, 2, adc=adc)
    p = impedance_point(intermediary(stream_iq(ref)), intermediary(stream_iq(s), WORKING),
                        ch.r_out(), CalibrationConfig(1.0))
    z = randles_impedance(dut, 2 * math.pi * float(plan.f_q))
    assert p.z_mag_raw == pytest.approx(abs(z), rel=1e-4)
    assert p.z_phase == pytest.approx(math.degrees(math.atan2(z.imag, z.real)), abs=0.01)
    assert p.z_mag_raw == pytest.approx(4594.6, rel=1e-3)
    assert p.z_phase == pytest.approx(-30.6, abs=0.05)


def test_wrap_interval():
    assert wrap_degrees(180) == 180
    assert wrap_degrees(-180) == 180
    assert wrap_degrees(-190) == pytest.approx(170)
    assert wrap_degrees(359) == pytest.approx(-1)


def test_dft_oracle_examples():
    a, ph = dft_oracle(sine_stream(200, 400))
    assert a == pytest.approx(400, rel=1e-12)
    assert ph == pytest.approx(0, abs=1e-9)
    a, ph = dft_oracle(sine_stream(200, 400, phi=math.pi / 4))
    assert ph == pytest.approx(45, abs=0.5)
    a, _ = dft_oracle(const_stream(200, 700))
    assert a == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("P", [Fraction(2500, 39), Fraction(129, 2), Fraction(199998477, 1000000), Fraction(9, 2)])
def test_dft_oracle_recovers_generating_tone_fractional_period(P):
    a, ph = dft_oracle(sine_stream(P, 123.0, phi=1.1, offset=512.0))
    assert a == pytest.approx(123.0, rel=1e-9)
    assert ph == pytest.approx(math.degrees(1.1), abs=1e-7)


def test_dft_oracle_integer_period_is_plain_correlation():
    s = sine_stream(64, 50.0, phi=-0.4, offset=300.0)
    n = np.arange(64)
    C = float(np.sum(s.codes * np.cos(2 * np.pi * n / 64)))
    S = float(np.sum(s.codes * np.sin(2 * np.pi * n / 64)))
    a, ph = dft_oracle(s)
    assert a == pytest.approx(2 * math.hypot(C, S) / 64, rel=1e-12)
    assert ph == pytest.approx(math.degrees(math.atan2(C, S)), abs=1e-9)


responses = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e6, allow_nan=False, allow_infinity=False)


@given(responses, responses, st.floats(1.0, 1e6))
def test_reciprocity(a, b, r_out):
    cal = CalibrationConfig(1.0)
    ab = impedance_point(ComplexResponse(a), ComplexResponse(b), r_out, cal)
    ba = impedance_point(ComplexResponse(b), ComplexResponse(a), r_out, cal)
    assert ab.z_mag_raw * ba.z_mag_raw == pytest.approx(r_out**2, rel=1e-9)
    if abs(ab.z_phase) < 179.999:
        assert ab.z_phase == pytest.approx(-ba.z_phase, abs=1e-9)


@given(responses, responses, st.floats(1e-6, 1e3))
def test_phase_independent_of_alpha(a, b, alpha):
    p1 = impedance_point(ComplexResponse(a), ComplexResponse(b), 1e3, CalibrationConfig(1.0))
    p2 = impedance_point(ComplexResponse(a), ComplexResponse(b), 1e3, CalibrationConfig(alpha))
    assert p1.z_phase == p2.z_phase


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(8), max_value=Fraction(3000), max_denominator=10**5),
       st.floats(1.0, 300.0), st.floats(-3, 3), st.floats(0.01, 100.0))
def test_scale_invariance(P, A, phi, k):
    ref = sine_stream(P, A, 0.0, offset=0.0)
    ch = sine_stream(P, -0.5 * A, phi, offset=0.0)
    ref2 = sine_stream(P, k * A, 0.0, offset=0.0)
    ch2 = sine_stream(P, -0.5 * k * A, phi, offset=0.0)
    cal = CalibrationConfig(1.0)
    p = impedance_point(intermediary(stream_iq(ref)), intermediary(stream_iq(ch), WORKING), 100.0, cal)
    q = impedance_point(intermediary(stream_iq(ref2)), intermediary(stream_iq(ch2), WORKING), 100.0, cal)
    assert q.z_mag_raw == pytest.approx(p.z_mag_raw, rel=1e-9)
    assert q.z_phase == pytest.approx(p.z_phase, abs=1e-7)


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(64), max_value=Fraction(5000), max_denominator=10**5),
       st.floats(1.0, 400.0), st.floats(-3.1, 3.1), st.floats(0.05, 1.0), st.floats(-1.5, 0.0))
def test_impedance_via_iq_matches_oracle(P, A, phi, gain, theta):
    ref = sine_stream(P, A, phi)
    ch = sine_stream(P, -gain * A, phi - theta)
    cal = CalibrationConfig(1.0)
    p = impedance_point(intermediary(stream_iq(ref)), intermediary(stream_iq(ch), WORKING), 1.0, cal)
    a_r, ph_r = dft_oracle(ref)
    a_c, ph_c = dft_oracle(ch)
    mag_o = a_r / a_c
    ph_o = wrap_degrees(ph_r - wrap_degrees(ph_c - 180))
    assert p.z_mag_raw == pytest.approx(mag_o, rel=0.005)
    assert abs(wrap_degrees(p.z_phase - ph_o)) <= 0.5
