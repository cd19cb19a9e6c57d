import numpy as np
import pytest

from istftkit import dsp
from istftkit.dsp import DspError, PqmfBank, Spectrogram, StftConfig
from istftkit.fft import fft, irfft, rfft
from oracles import dft_naive


class TestFft:
    @pytest.mark.parametrize("n", [16, 64, 128, 256, 1024])
    def test_rfft_matches_direct_dft(self, n):
        x = np.random.default_rng(n).standard_normal(n)
        assert np.max(np.abs(rfft(x) - dft_naive(x))) < 1e-9 * n

    @pytest.mark.parametrize("n", [16, 128, 1024])
    def test_irfft_inverts(self, n):
        x = np.random.default_rng(n + 1).standard_normal((3, n))
        assert np.max(np.abs(irfft(rfft(x), n) - x)) < 1e-12

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ValueError):
            fft(np.zeros(12))


class TestIstftParams:
    def test_scale_64(self):
        cfg = dsp.istft_params(StftConfig(1024, 256, 1024), 64)
        assert (cfg.fft_size, cfg.hop, cfg.win_length) == (16, 4, 16)
        assert cfg.freq_bins == 9

    def test_scale_8(self):
        cfg = dsp.istft_params(StftConfig(1024, 256, 1024), 8)
        assert (cfg.fft_size, cfg.hop, cfg.win_length) == (128, 32, 128)
        assert cfg.freq_bins == 65

    def test_scale_1_identity(self):
        base = StftConfig(1024, 256, 1024)
        assert dsp.istft_params(base, 1) == base

    def test_non_divisible(self):
        with pytest.raises(DspError):
            dsp.istft_params(StftConfig(1024, 256, 1024), 3)

    @pytest.mark.parametrize("s", [1, 4, 8, 16, 32, 64])
    def test_supported_scales_consistent(self, s):
        base = StftConfig(1024, 256, 1024)
        cfg = dsp.istft_params(base, s)
        assert cfg.fft_size * s == base.fft_size
        assert cfg.fft_size == 4 * cfg.hop


class TestStft:
    def test_constant_signal_dc_bin(self):
        cfg = StftConfig(256, 64, 256)
        value = 0.7
        spec = dsp.stft(np.full(1024, value, np.float32), cfg)
        want = np.sum(cfg.padded_window()) * value
        # interior frames only; edge frames see reflection padding
        assert np.allclose(spec.magnitude[0, 4:-4], want, rtol=1e-5)

    def test_sine_energy_concentration(self):
        bin_idx = 20
        n = 4096
        t = np.arange(n)
        x = np.sin(2 * np.pi * bin_idx * t / 256).astype(np.float32)
        # rectangular window: all frame energy lands in the matching bin
        rect = dsp.stft(x, StftConfig(256, 64, 256, window="rect"))
        frame = rect.magnitude[:, rect.magnitude.shape[1] // 2] ** 2
        assert frame[bin_idx] / np.sum(frame) > 0.9
        # Hann leaks into the two adjacent bins only
        hann = dsp.stft(x, StftConfig(256, 64, 256))
        frame = hann.magnitude[:, hann.magnitude.shape[1] // 2] ** 2
        assert np.sum(frame[bin_idx - 1 : bin_idx + 2]) / np.sum(frame) > 0.99

    def test_zero_signal(self):
        spec = dsp.stft(np.zeros(2048, np.float32), StftConfig(256, 64, 256))
        assert np.all(spec.magnitude == 0)

    def test_frame_count(self):
        cfg = StftConfig(256, 64, 256)
        spec = dsp.stft(np.zeros(1000, np.float32), cfg)
        assert spec.magnitude.shape == (129, 1000 // 64 + 1)

    def test_too_short_signal(self):
        with pytest.raises(DspError):
            dsp.stft(np.zeros(100, np.float32), StftConfig(256, 64, 256))

    def test_parseval_per_frame(self):
        cfg = StftConfig(256, 64, 256)
        rng = np.random.default_rng(7)
        x = rng.standard_normal(2048).astype(np.float32)
        spec = dsp.stft(x, cfg)
        f = cfg.fft_size
        xp = np.pad(x.astype(np.float64), (f // 2, f // 2), mode="reflect")
        win = cfg.padded_window()
        for i in (3, 10, 20):
            frame = xp[i * cfg.hop : i * cfg.hop + f] * win
            mag2 = spec.magnitude[:, i].astype(np.float64) ** 2
            # real-FFT bins: DC and Nyquist counted once, others twice
            spec_energy = (mag2[0] + mag2[-1] + 2 * np.sum(mag2[1:-1])) / f
            assert abs(spec_energy - np.sum(frame**2)) / np.sum(frame**2) < 1e-4


class TestIstft:
    @pytest.mark.parametrize("hop_div", [4, 2])
    def test_round_trip_many_signals(self, hop_div):
        cfg = StftConfig(1024, 1024 // hop_div, 1024)
        rng = np.random.default_rng(42)
        for _ in range(50):
            x = rng.standard_normal(4096).astype(np.float32)
            y = dsp.istft(dsp.stft(x, cfg), cfg, len(x))
            lo, hi = cfg.fft_size // 2, len(x) - cfg.fft_size // 2
            err = np.max(np.abs(y[lo:hi] - x[lo:hi])) / np.max(np.abs(x))
            assert err < 1e-6

    def test_zero_magnitude_gives_silence(self):
        cfg = StftConfig(256, 64, 256)
        spec = Spectrogram(np.zeros((129, 20), np.float32), np.zeros((129, 20), np.float32))
        assert np.all(dsp.istft(spec, cfg, 64 * 20) == 0)

    def test_single_frame_rect_window_is_inverse_dft(self):
        cfg = StftConfig(64, 64, 64, window="rect")
        rng = np.random.default_rng(3)
        frame = rng.standard_normal(64)
        z = np.fft.rfft(frame)
        spec = Spectrogram(np.abs(z)[:, None].astype(np.float32),
                           np.angle(z)[:, None].astype(np.float32))
        # first frame sits at buffer offset 0; center-trim starts at fft/2
        y = dsp.istft(spec, cfg, 32)
        assert np.allclose(y, frame[32:], atol=1e-5)

    def test_shape_mismatch(self):
        cfg = StftConfig(256, 64, 256)
        spec = Spectrogram(np.zeros((10, 4), np.float32), np.zeros((10, 4), np.float32))
        with pytest.raises(DspError):
            dsp.istft(spec, cfg, 100)

    def test_output_length_law(self):
        cfg = dsp.istft_params(StftConfig(1024, 256, 1024), 8)
        frames = 40
        spec = Spectrogram(np.ones((65, frames), np.float32),
                           np.zeros((65, frames), np.float32))
        assert len(dsp.istft(spec, cfg, cfg.hop * frames)) == 32 * frames


class TestLogMel:
    def test_default_geometry(self):
        x = np.random.default_rng(0).standard_normal(22050).astype(np.float32)
        mel = dsp.log_mel(x)
        assert mel.shape == (80, 22050 // 256 + 1)

    def test_zero_signal_floor(self):
        mel = dsp.log_mel(np.zeros(4096, np.float32))
        assert np.allclose(mel, np.log(1e-5))

    def test_filterbank_shape_and_triangles(self):
        fb = dsp.mel_filterbank(22050, 1024, 80, 0.0, 8000.0)
        assert fb.shape == (80, 513)
        assert np.all(fb >= 0)
        freqs = np.arange(513) * 22050 / 1024
        pts = dsp.mel_to_hz(np.linspace(dsp.hz_to_mel(0.0), dsp.hz_to_mel(8000.0), 82))
        for i in range(0, 80, 7):
            row = fb[i]
            assert row.max() <= 1.0 + 1e-9
            support = freqs[row > 0]
            if len(support):
                assert support.min() >= pts[i] - 22050 / 1024
                assert support.max() <= pts[i + 2] + 22050 / 1024

    def test_invalid_band_edges(self):
        with pytest.raises(DspError):
            dsp.mel_filterbank(22050, 1024, 80, 9000.0, 8000.0)


class TestPqmf:
    def test_four_band_round_trip(self):
        bank = PqmfBank(4)
        rng = np.random.default_rng(8)
        x = rng.standard_normal(8192).astype(np.float32)
        y = dsp.pqmf_synthesis(bank, dsp.pqmf_analysis(bank, x))
        d = bank.round_trip_delay
        err = y[d + 100 : len(x) - 100] - x[100 : len(x) - d - 100]
        ref = x[100 : len(x) - d - 100]
        db = 10 * np.log10(np.sum(err**2) / np.sum(ref**2))
        assert db <= -35.0

    def test_zero_subbands(self):
        bank = PqmfBank(4)
        assert np.all(dsp.pqmf_synthesis(bank, np.zeros((4, 32), np.float32)) == 0)

    def test_output_length(self):
        bank = PqmfBank(4)
        assert len(dsp.pqmf_synthesis(bank, np.zeros((4, 50), np.float32))) == 200

    def test_band_count_mismatch(self):
        with pytest.raises(DspError):
            dsp.pqmf_synthesis(PqmfBank(4), np.zeros((3, 10), np.float32))

    def test_analysis_length_mismatch(self):
        with pytest.raises(DspError):
            dsp.pqmf_analysis(PqmfBank(4), np.zeros(101, np.float32))

    def test_prototype_dc_normalized(self):
        proto = dsp.design_prototype_filter()
        assert abs(np.sum(proto) - 1.0) < 1e-9

    def test_filters_are_modulated_prototype(self):
        bank = PqmfBank(4)
        assert bank.analysis.shape == bank.synthesis.shape == (4, 63)
        # envelope of every band filter is bounded by twice the prototype
        assert np.all(np.abs(bank.analysis) <= 2 * np.abs(bank.prototype) + 1e-12)
