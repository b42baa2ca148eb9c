"""服务模块"""

from .config import ConfigService
from .render import RenderService
from .wav_io import read_wav, write_wav, load_wav, save_wav
from .framing import split_frames, merge_frames
from .filters import (
    fft_lowpass,
    design,
    design_fir,
    design_iir,
    default_filter_spec,
    apply_filter,
    frequency_response,
    response_table,
)
from .sampling import uniform_mask, random_mask, frame_seed, make_mask, apply_mask
from .reconstruct import (
    recover_lowpass,
    fit_spline,
    evaluate_spline,
    spline_interpolate,
    resolve_beta,
    imat,
    imati,
    sparse_test_spectrum,
    sparse_test_signal,
    lowpass_test_signal,
)
from .metrics import snr_db, timed, timed_median, run_pesq, normalized_times, timing_flatness
from .bench import (
    run_pipeline,
    recover_signal,
    run_bench,
    run_filter_study,
    make_corpus,
    run_sparse_demo,
)

__all__ = [
    # 配置与渲染
    "ConfigService",
    "RenderService",
    # WAV
    "read_wav",
    "write_wav",
    "load_wav",
    "save_wav",
    # 分帧
    "split_frames",
    "merge_frames",
    # 滤波器
    "fft_lowpass",
    "design",
    "design_fir",
    "design_iir",
    "default_filter_spec",
    "apply_filter",
    "frequency_response",
    "response_table",
    # 采样
    "uniform_mask",
    "random_mask",
    "frame_seed",
    "make_mask",
    "apply_mask",
    # 重建
    "recover_lowpass",
    "fit_spline",
    "evaluate_spline",
    "spline_interpolate",
    "resolve_beta",
    "imat",
    "imati",
    "sparse_test_spectrum",
    "sparse_test_signal",
    "lowpass_test_signal",
    # 评估
    "snr_db",
    "timed",
    "timed_median",
    "run_pesq",
    "normalized_times",
    "timing_flatness",
    # 基准测试
    "run_pipeline",
    "recover_signal",
    "run_bench",
    "run_filter_study",
    "make_corpus",
    "run_sparse_demo",
]
