"""配置服务测试"""

from __future__ import annotations

import pytest

from resample_bench.core.constants import ENV_THREADS
from resample_bench.core.errors import ConfigError
from resample_bench.core.models import FirWindow, Method, SplineBoundary, Transform
from resample_bench.services.config import ConfigService, parse_config_text

# schema 中的默认采样率网格与默认方案
DEFAULT_RATES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_METHODS = ("U-AF-FFT-Sp", "U-AF-FFT", "U-AF-FIR-Sp", "U-AF-FIR", "R-IMATI", "R-Sp")


@pytest.fixture(autouse=True)
def _no_env_threads(monkeypatch):
    monkeypatch.delenv(ENV_THREADS, raising=False)


def _write(tmp_path, text: str):
    path = tmp_path / "bench.conf"
    path.write_text(text, encoding="utf-8")
    return path


class TestParsing:
    def test_comments_and_blank_lines(self):
        values = parse_config_text("# 注释\n\n seed = 7 \nimat.alpha=0.1\n")
        assert values == {"seed": "7", "imat.alpha": "0.1"}

    def test_line_without_equals(self):
        with pytest.raises(ConfigError):
            parse_config_text("seed 7\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            ConfigService.from_file(tmp_path / "nope.conf")


class TestDefaults:
    def test_schema_defaults(self):
        service = ConfigService()
        assert service.rates == list(DEFAULT_RATES)
        assert [m.value for m in service.methods] == list(DEFAULT_METHODS)
        assert service.frame_len == 1024
        assert service.seed == 0
        assert service.threads == 1
        assert service.timing_repeats == 1
        assert service.spline_boundary is SplineBoundary.NOT_A_KNOT
        assert service.pesq_command is None

    def test_imat_defaults(self):
        params = ConfigService().imat_params
        assert params.lam == 1.0
        assert params.beta is None
        assert params.alpha == 0.05
        assert params.iterations == 300
        assert params.transform is Transform.DFT


class TestOverrides:
    def test_file_values(self, tmp_path):
        path = _write(
            tmp_path,
            "dataset_dir = data\n"
            "rates = 0.2..0.4\n"
            "methods = R-Sp, U-AF-FFT\n"
            "imat.beta = 2.5\n"
            "imat.transform = dct\n"
            "filter.fir_window = kaiser\n",
        )
        service = ConfigService.from_file(path)
        assert service.rates == [0.2, 0.3, 0.4]
        assert service.methods == [Method.R_SP, Method.U_AF_FFT]
        assert service.imat_params.beta == 2.5
        assert service.imat_params.transform is Transform.DCT
        assert service.filter_spec_overrides["fir_window"] is FirWindow.KAISER

    def test_invalid_int_falls_back(self, tmp_path):
        service = ConfigService.from_file(_write(tmp_path, "seed = abc\n"))
        assert service.seed == 0

    def test_invalid_option_falls_back(self, tmp_path):
        service = ConfigService.from_file(_write(tmp_path, "filter.fir_window = triangle\n"))
        assert service.filter_spec_overrides["fir_window"] is FirWindow.HAMMING

    def test_unknown_key_ignored(self, tmp_path):
        service = ConfigService.from_file(_write(tmp_path, "colour = blue\nseed = 3\n"))
        assert service.get("colour") is None
        assert service.seed == 3

    def test_unknown_method(self, tmp_path):
        service = ConfigService.from_file(_write(tmp_path, "methods = U-AF-FFT, X-Y\n"))
        with pytest.raises(ConfigError):
            _ = service.methods

    def test_set_overrides_file(self, tmp_path):
        service = ConfigService.from_file(_write(tmp_path, "seed = 3\n"))
        service.set("seed", 9)
        service.set("threads", None)
        assert service.seed == 9
        assert service.threads == 1


class TestThreadsEnvironment:
    def test_env_used_when_unset(self, monkeypatch):
        monkeypatch.setenv(ENV_THREADS, "4")
        assert ConfigService().threads == 4

    def test_file_beats_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv(ENV_THREADS, "4")
        service = ConfigService.from_file(_write(tmp_path, "threads = 2\n"))
        assert service.threads == 2


class TestBenchConfig:
    def test_builds(self, tmp_path):
        service = ConfigService({"dataset_dir": str(tmp_path), "rates": "0.5", "methods": "R-Sp"})
        config = service.to_bench_config(no_timing=True)
        assert config.dataset_dir == tmp_path
        assert config.rates == (0.5,)
        assert config.methods == (Method.R_SP,)
        assert config.no_timing is True

    def test_include_filter_flag(self, tmp_path):
        assert ConfigService().timing_include_filter is False
        service = ConfigService.from_file(_write(tmp_path, "dataset_dir = data\ntiming.include_filter = true\n"))
        assert service.timing_include_filter is True
        assert service.to_bench_config().timing_include_filter is True

    def test_missing_dataset(self):
        with pytest.raises(ConfigError):
            ConfigService().to_bench_config()

    @pytest.mark.parametrize(
        "key, value",
        [
            ("rates", "0.5,1.5"),
            ("frame_len", "1000"),
            ("imat.lambda", "2.5"),
        ],
    )
    def test_invariants(self, tmp_path, key, value):
        service = ConfigService({"dataset_dir": str(tmp_path), key: value})
        with pytest.raises(ConfigError):
            service.to_bench_config()
