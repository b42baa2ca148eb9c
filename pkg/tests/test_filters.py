"""滤波器测试"""

from __future__ import annotations

import numpy as np
import pytest
from conftest import tone_frame

from resample_bench.core.errors import InvalidSpec, NonPowerOfTwoLength
from resample_bench.core.models import FilterKind, FilterSpec, FirWindow, IirDesign
from resample_bench.services.filters import (
    apply_filter,
    default_filter_spec,
    design,
    design_fir,
    design_iir,
    fft_lowpass,
    frequency_response,
    response_table,
)


class TestFftLowpass:
    def test_removes_high_tone_keeps_low(self):
        low = tone_frame([100]).data
        high = tone_frame([300]).data
        out = fft_lowpass(low + high, 0.25)
        assert np.max(np.abs(out - low)) < 1e-9

    def test_nyquist_cutoff_is_identity(self, rng):
        x = rng.standard_normal(256)
        out = fft_lowpass(x, 0.5)
        assert np.array_equal(out, x)
        assert out is not x

    def test_frame_in_frame_out(self):
        frame = tone_frame([10], n=64)
        out = fft_lowpass(frame, 0.25)
        assert out.index == frame.index
        assert out.valid_len == frame.valid_len

    def test_idempotent(self, rng):
        x = rng.standard_normal(512)
        once = fft_lowpass(x, 0.2)
        assert np.max(np.abs(fft_lowpass(once, 0.2) - once)) < 1e-9

    @pytest.mark.parametrize("cutoff", [0.05, 0.25, 0.45])
    def test_energy_not_increased(self, rng, cutoff):
        x = rng.standard_normal(1024)
        assert np.linalg.norm(fft_lowpass(x, cutoff)) <= np.linalg.norm(x) + 1e-9

    def test_length_must_be_power_of_two(self):
        with pytest.raises(NonPowerOfTwoLength):
            fft_lowpass(np.zeros(1000), 0.25)

    def test_cutoff_range(self):
        with pytest.raises(InvalidSpec):
            fft_lowpass(np.zeros(64), 0.0)
        with pytest.raises(InvalidSpec):
            fft_lowpass(np.zeros(64), 0.6)


class TestFirDesign:
    @pytest.mark.parametrize("window", list(FirWindow))
    @pytest.mark.parametrize("taps", [31, 63, 127])
    @pytest.mark.parametrize("cutoff", [0.05, 0.2, 0.4])
    def test_unit_dc_gain_and_symmetry(self, window, taps, cutoff):
        h = design_fir(FilterSpec(FilterKind.FIR, cutoff, fir_window=window, fir_taps=taps)).fir_coeffs
        assert abs(h.sum() - 1.0) < 1e-9
        assert np.array_equal(h, h[::-1])

    def test_coefficients_read_only(self):
        h = design_fir(FilterSpec(FilterKind.FIR, 0.25)).fir_coeffs
        with pytest.raises(ValueError):
            h[0] = 1.0

    def test_even_taps_rejected(self):
        with pytest.raises(InvalidSpec):
            design_fir(FilterSpec(FilterKind.FIR, 0.25, fir_taps=64))

    def test_wrong_kind_rejected(self):
        with pytest.raises(InvalidSpec):
            design_fir(FilterSpec(FilterKind.IIR, 0.25))

    def test_delay_compensated(self):
        x = tone_frame([20]).data
        f = design(FilterSpec(FilterKind.FIR, 0.25))
        y = apply_filter(x, f)
        assert y.shape == x.shape
        # 远离边界处与输入对齐
        assert np.max(np.abs(y[100:900] - x[100:900])) < 1e-2


class TestIirDesign:
    @pytest.mark.parametrize("order", [2, 3, 4, 5, 6])
    def test_butterworth_dc_and_cutoff(self, order):
        spec = FilterSpec(FilterKind.IIR, 0.2, iir_order=order)
        f = design_iir(spec)
        h = frequency_response(f, [0.0, 0.2])
        assert abs(abs(h[0]) - 1.0) < 1e-6
        assert abs(20 * np.log10(abs(h[1])) + 3.0103) < 0.2

    @pytest.mark.parametrize("design_kind", list(IirDesign))
    @pytest.mark.parametrize("order", [1, 4, 7])
    def test_stable(self, design_kind, order):
        f = design_iir(FilterSpec(FilterKind.IIR, 0.1, iir_design=design_kind, iir_order=order))
        assert len(f.biquads) == (order + 1) // 2
        for bq in f.biquads:
            assert np.all(np.abs(bq.poles()) < 1.0)

    def test_chebyshev_ripple_bound(self):
        f = design_iir(FilterSpec(FilterKind.IIR, 0.2, iir_design=IirDesign.CHEBYSHEV1, ripple_db=1.0))
        passband = np.linspace(0.0, 0.19, 50)
        mag_db = 20 * np.log10(np.abs(frequency_response(f, passband)))
        assert np.all(mag_db <= 1e-6)
        assert np.all(mag_db >= -1.0 - 1e-3)

    def test_butterworth_impulse_response_matches_h(self):
        f = design_iir(FilterSpec(FilterKind.IIR, 0.2, iir_order=6))
        impulse = np.zeros(4096)
        impulse[0] = 1.0
        measured = np.fft.rfft(apply_filter(impulse, f))
        expected = frequency_response(f, np.arange(measured.shape[0]) / 4096.0)
        assert np.max(np.abs(measured - expected)) < 1e-8

    def test_chebyshev_order_four_passband(self):
        f = design_iir(
            FilterSpec(FilterKind.IIR, 0.2, iir_design=IirDesign.CHEBYSHEV1, iir_order=4, ripple_db=1.0)
        )
        mag = np.abs(frequency_response(f, np.linspace(0.0, 0.2, 100)))
        assert np.all(mag <= 1.0 + 1e-6)
        assert np.all(mag >= 10 ** (-1.0 / 20) - 1e-6)

    def test_nyquist_cutoff_is_identity(self, rng):
        x = rng.standard_normal(128)
        f = design_iir(FilterSpec(FilterKind.IIR, 0.5))
        assert np.array_equal(apply_filter(x, f), x)

    def test_invalid_order(self):
        with pytest.raises(InvalidSpec):
            design_iir(FilterSpec(FilterKind.IIR, 0.2, iir_order=0))


class TestDispatch:
    def test_design_is_cached(self):
        spec = FilterSpec(FilterKind.FIR, 0.125)
        assert design(spec) is design(spec)

    def test_fft_kind_applies_brickwall(self):
        x = tone_frame([100]).data + tone_frame([400]).data
        f = design(FilterSpec(FilterKind.FFT_BRICKWALL, 0.25))
        assert np.allclose(apply_filter(x, f), fft_lowpass(x, 0.25))

    def test_default_spec_cutoff_follows_rate(self):
        spec = default_filter_spec(FilterKind.FIR, 0.3, {"fir_taps": 31, "fir_window": FirWindow.BLACKMAN})
        assert spec.cutoff == pytest.approx(0.15)
        assert spec.fir_taps == 31
        assert spec.fir_window is FirWindow.BLACKMAN

    def test_labels(self):
        assert FilterSpec(FilterKind.FIR, 0.2).label == "fir-hamming-63"
        assert FilterSpec(FilterKind.IIR, 0.2).label == "iir-butterworth-6"
        assert FilterSpec(FilterKind.FFT_BRICKWALL, 0.2).label == "fft"


class TestResponseTable:
    def test_fir_table(self):
        rows = response_table(design(FilterSpec(FilterKind.FIR, 0.25, fir_taps=63)))
        assert len(rows) == 512
        assert rows[0][0] == 0.0
        assert rows[-1][0] == pytest.approx(511 / 1024)
        assert abs(rows[0][1]) < 1e-6

    def test_floor_applied(self):
        rows = response_table(design(FilterSpec(FilterKind.FFT_BRICKWALL, 0.25)), points=16)
        assert rows[-1][1] == -300.0
        assert rows[0][1] == 0.0
