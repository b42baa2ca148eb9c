"""测试共享夹具"""

from __future__ import annotations

import numpy as np
import pytest

from resample_bench.core.models import Frame
from resample_bench.services.bench import make_corpus


def tone_frame(bins, n: int = 1024, amplitudes=None, phases=None) -> Frame:
    """频点对齐的余弦和（频率 bins[i] / n），帧内无泄漏"""
    bins = np.atleast_1d(np.asarray(bins, dtype=np.float64))
    amplitudes = np.ones_like(bins) if amplitudes is None else np.asarray(amplitudes, dtype=np.float64)
    phases = np.zeros_like(bins) if phases is None else np.asarray(phases, dtype=np.float64)
    t = np.arange(n, dtype=np.float64)
    x = np.sum(amplitudes[:, None] * np.cos(2.0 * np.pi * bins[:, None] * t / n + phases[:, None]), axis=0)
    return Frame.full(0.9 * x / np.max(np.abs(x)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def three_tone():
    """三音低通信号：频率约 0.03 / 0.06 / 0.1"""
    return tone_frame([31, 61, 102], amplitudes=[1.0, 0.7, 0.5], phases=[0.3, 1.1, 2.0])


@pytest.fixture
def corpus_dir(tmp_path):
    """两个短的合成 WAV（各 1600 样本，两帧）"""
    data = tmp_path / "corpus"
    make_corpus(data, files=2, seconds=0.1, sample_rate=16000, seed=3)
    return data


@pytest.fixture
def fast_config(tmp_path):
    """缩短 IMAT 迭代的配置文件"""
    path = tmp_path / "bench.conf"
    path.write_text(
        "# 测试用配置\n"
        "imat.iterations = 30\n"
        "log_level = WARNING\n",
        encoding="utf-8",
    )
    return path
