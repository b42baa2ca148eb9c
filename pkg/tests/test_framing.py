"""分帧测试"""

from __future__ import annotations

import numpy as np
import pytest

from resample_bench.core.errors import EmptySignal, LengthMismatch
from resample_bench.core.models import AudioSignal, Frame
from resample_bench.services.framing import merge_frames, split_frames


class TestSplit:
    def test_tail_frame_padded(self, rng):
        x = rng.standard_normal(2500)
        frames = split_frames(x, 1024)
        assert [f.index for f in frames] == [0, 1, 2]
        assert [f.valid_len for f in frames] == [1024, 1024, 452]
        assert all(f.frame_len == 1024 for f in frames)
        assert np.all(frames[2].data[452:] == 0.0)
        assert np.array_equal(frames[2].valid, x[2048:])

    def test_exact_multiple_has_no_padding(self, rng):
        frames = split_frames(AudioSignal(rng.standard_normal(2048), 8000), 1024)
        assert len(frames) == 2
        assert all(f.valid_len == 1024 for f in frames)

    def test_one_past_frame_boundary(self, rng):
        x = rng.standard_normal(1025)
        frames = split_frames(x, 1024)
        assert [f.valid_len for f in frames] == [1024, 1]
        assert frames[1].data[0] == x[1024]

    def test_short_signal_single_frame(self):
        frames = split_frames(np.ones(3), 1024)
        assert len(frames) == 1
        assert frames[0].valid_len == 3

    def test_empty_signal(self):
        with pytest.raises(EmptySignal):
            split_frames(np.zeros(0), 1024)


class TestMerge:
    def test_round_trip_is_exact(self, rng):
        x = rng.standard_normal(5000)
        frames = split_frames(x, 1024)
        assert np.array_equal(merge_frames(frames, 5000), x)

    def test_order_independent(self, rng):
        x = rng.standard_normal(3000)
        frames = split_frames(x, 1024)
        assert np.array_equal(merge_frames(frames[::-1], 3000), x)

    def test_random_lengths_round_trip(self, rng):
        for n in rng.integers(1, 10001, size=30):
            x = rng.standard_normal(int(n))
            assert np.array_equal(merge_frames(split_frames(x, 1024), int(n)), x)

    def test_wrong_total(self, rng):
        frames = split_frames(rng.standard_normal(3000), 1024)
        with pytest.raises(LengthMismatch):
            merge_frames(frames, 3001)

    def test_missing_frame(self, rng):
        frames = split_frames(rng.standard_normal(3000), 1024)
        with pytest.raises(LengthMismatch):
            merge_frames([frames[0], frames[2]], 3000)


class TestFrame:
    def test_valid_len_defaults_to_length(self):
        assert Frame(data=np.zeros(8)).valid_len == 8

    @pytest.mark.parametrize("valid_len", [-1, 9])
    def test_valid_len_out_of_range(self, valid_len):
        with pytest.raises(LengthMismatch):
            Frame(data=np.zeros(8), valid_len=valid_len)
