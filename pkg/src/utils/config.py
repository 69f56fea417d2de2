import os
from dotenv import load_dotenv
import logging

# 加载环境变量
load_dotenv()

logger = logging.getLogger(__name__)


def _env_bool(name, default='false'):
    return os.getenv(name, default).strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    """项目配置类"""

    # 输出与日志
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'output')
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_TO_FILE = _env_bool('LOG_TO_FILE')

    # 参数环境
    OMEGA_MAX_INDEX = int(os.getenv('OMEGA_MAX_INDEX', '16'))  # 符号 ω_i 的个数，同时是级数展开的默认阶数
    RELATION_S_MAX = int(os.getenv('RELATION_S_MAX', '5'))     # e1 x1^s e1 = ω_s e1 检查的最大 s

    # 规范化引擎
    NORMALIZE_STRATEGY = os.getenv('NORMALIZE_STRATEGY', 'leftmost')  # leftmost 或 random
    STRATEGY_SEED = int(os.getenv('STRATEGY_SEED', '0'))

    # 分圆商的窗口约化
    WINDOW_MAX_RELATIONS = int(os.getenv('WINDOW_MAX_RELATIONS', '2000'))

    # 量子群矩阵校验
    ORACLE_DEFAULT_TYPE = os.getenv('ORACLE_DEFAULT_TYPE', 'C')
    ORACLE_DEFAULT_RANK = int(os.getenv('ORACLE_DEFAULT_RANK', '2'))
    ORACLE_BUFFER = int(os.getenv('ORACLE_BUFFER', '1'))

    @staticmethod
    def ensure_output_directory():
        """确保输出目录存在"""
        if not os.path.exists(Config.OUTPUT_DIR):
            os.makedirs(Config.OUTPUT_DIR)
            logger.info(f"创建输出目录: {Config.OUTPUT_DIR}")


# 创建全局配置实例
config = Config()
