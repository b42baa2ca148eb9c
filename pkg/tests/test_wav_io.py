"""WAV 读写测试"""

from __future__ import annotations

import struct

import numpy as np
import pytest

from resample_bench.core.errors import (
    MalformedRiff,
    NonFiniteSample,
    UnsupportedCodec,
    UnsupportedDepth,
)
from resample_bench.core.models import AudioSignal
from resample_bench.services.wav_io import load_wav, read_wav, save_wav, write_wav


def build_wav(
    payload: bytes,
    tag: int = 1,
    channels: int = 1,
    rate: int = 8000,
    bits: int = 16,
    extra: bytes = b"",
    data_size: int = None,
) -> bytes:
    """手工拼装 RIFF/WAVE 字节流"""
    block_align = channels * bits // 8
    fmt = struct.pack("<HHIIHH", tag, channels, rate, rate * block_align, block_align, bits)
    size = len(payload) if data_size is None else data_size
    body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt + extra
    body += b"data" + struct.pack("<I", size) + payload
    return b"RIFF" + struct.pack("<I", len(body)) + body


class TestRoundTrip:
    """写出再读回逐位一致"""

    def test_random_16bit_signals_survive(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 2000))
            ints = rng.integers(-32768, 32768, size=n)
            signal = AudioSignal(ints / 32768.0, 44100)
            decoded = read_wav(write_wav(signal))
            assert np.array_equal(decoded.samples, signal.samples)
            assert decoded.sample_rate_hz == 44100

    def test_bytes_are_stable(self, rng):
        ints = rng.integers(-32768, 32768, size=300)
        data = write_wav(AudioSignal(ints / 32768.0, 16000))
        assert write_wav(read_wav(data)) == data

    def test_file_round_trip(self, tmp_path):
        signal = AudioSignal(np.array([0.0, 0.5, -0.5, 0.25]), 22050)
        path = save_wav(tmp_path / "sub" / "x.wav", signal)
        assert np.array_equal(load_wav(path).samples, signal.samples)


class TestEncoding:
    """量化与文件头"""

    def test_header_layout(self):
        data = write_wav(AudioSignal(np.zeros(10), 8000))
        assert len(data) == 44 + 20
        assert data[:4] == b"RIFF" and data[8:12] == b"WAVE"
        assert struct.unpack_from("<I", data, 4)[0] == len(data) - 8
        assert struct.unpack_from("<I", data, 40)[0] == 20

    def test_zero_encodes_as_zero(self):
        data = write_wav(AudioSignal(np.array([0.0]), 8000))
        assert data[44:46] == b"\x00\x00"

    def test_out_of_range_is_clipped(self):
        data = write_wav(AudioSignal(np.array([1.5, -1.5, 1.0, -1.0]), 8000))
        values = struct.unpack("<4h", data[44:52])
        assert values == (32767, -32768, 32767, -32768)

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteSample):
            write_wav(AudioSignal(np.array([0.0, np.nan]), 8000))

    def test_only_16bit_output(self):
        with pytest.raises(UnsupportedDepth):
            write_wav(AudioSignal(np.zeros(4), 8000), bit_depth=24)


class TestDecoding:
    """解码各种输入"""

    def test_24bit(self):
        triples = b"".join(
            (v & 0xFFFFFF).to_bytes(3, "little") for v in (0x7FFFFF, -0x800000, 1)
        )
        signal = read_wav(build_wav(triples, bits=24))
        assert signal.source_bit_depth == 24
        expected = np.array([8388607, -8388608, 1]) / 8388608.0
        assert np.array_equal(signal.samples, expected)

    def test_stereo_downmix(self):
        payload = struct.pack("<4h", 1000, 3000, -2000, 0)
        signal = read_wav(build_wav(payload, channels=2))
        assert signal.source_channels == 2
        assert np.array_equal(signal.samples, np.array([2000.0, -1000.0]) / 32768.0)

    def test_extra_chunk_with_pad_byte_skipped(self):
        extra = b"LIST" + struct.pack("<I", 3) + b"abc" + b"\x00"
        payload = struct.pack("<2h", 100, -100)
        signal = read_wav(build_wav(payload, extra=extra))
        assert np.array_equal(signal.samples, np.array([100.0, -100.0]) / 32768.0)


class TestErrors:
    """非法输入"""

    def test_not_riff(self):
        with pytest.raises(MalformedRiff):
            read_wav(b"RIFX" + b"\x00" * 40)

    def test_float_codec(self):
        with pytest.raises(UnsupportedCodec):
            read_wav(build_wav(b"\x00" * 8, tag=3, bits=32))

    def test_8bit_depth(self):
        with pytest.raises(UnsupportedDepth):
            read_wav(build_wav(b"\x00" * 8, bits=8))

    def test_truncated_data_chunk(self):
        with pytest.raises(MalformedRiff):
            read_wav(build_wav(b"\x00" * 8, data_size=100))

    def test_missing_data_chunk(self):
        fmt = struct.pack("<HHIIHH", 1, 1, 8000, 16000, 2, 16)
        body = b"WAVE" + b"fmt " + struct.pack("<I", len(fmt)) + fmt
        with pytest.raises(MalformedRiff):
            read_wav(b"RIFF" + struct.pack("<I", len(body)) + body)
