"""常量定义和默认参数"""

# 工具标识
TOOL_NAME = "resample_bench"
ENV_THREADS = "RESAMPLE_BENCH_THREADS"  # 线程数环境变量（命令行与配置文件均未指定时使用）

# 分帧
DEFAULT_FRAME_LEN = 1024

# 滤波器默认值
DEFAULT_FIR_TAPS = 63
DEFAULT_KAISER_BETA = 8.6
DEFAULT_IIR_ORDER = 6
DEFAULT_RIPPLE_DB = 1.0
NYQUIST = 0.5  # 归一化频率下的奈奎斯特频率
RESPONSE_POINTS = 512  # 频响表行数
MAGNITUDE_FLOOR_DB = -300.0

# IMAT 默认值
DEFAULT_IMAT_LAMBDA = 1.0
DEFAULT_IMAT_ALPHA = 0.05
DEFAULT_IMAT_ITERATIONS = 300
IMATI_SPREAD_SCALES = (1.0, 0.5, 0.25)  # IMATI 插值残差的回退步长，都不合格时退化为 IMAT 步

# 样条
MIN_SPLINE_POINTS = 4

# 稀疏测试信号
DEFAULT_SPARSE_N = 1024
DEFAULT_SPARSE_K = 64
SPARSE_AMP_MIN = 0.1  # 幅度取自 [-1, 1]，排除 (-0.1, 0.1)

# WAV
PCM_FORMAT_TAG = 1
SUPPORTED_BIT_DEPTHS = (16, 24)

# 输出
RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.txt"
FILTER_STUDY_FILE = "filter_study.csv"
CPU_TIME_FILE = "cpu_time.dat"
PLOTS_DIR = "plots"
RECOVERED_DIR = "recovered"
RESULTS_COLUMNS = ("file", "method", "rate", "snr_db", "elapsed_seconds", "seed")
INF_TOKEN = "inf"
TIMING_FLATNESS_LIMIT = 3.0  # 计时平坦度观测阈值（不作为失败条件）

# 退出码
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
