import logging
import os
from datetime import datetime

ROOT_NAME = 'kauffmann'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _level():
    # 延迟导入config以避免循环导入
    from .config import config

    return getattr(logging, str(config.LOG_LEVEL).upper(), logging.INFO)


class LoggerManager:
    """日志管理类

    所有记录器都挂在 kauffmann 命名空间下。控制台处理器只装在命名空间根上，
    写到 stderr，stdout 留给命令行的 JSON / CSV 输出。
    """

    _root_ready = False

    @classmethod
    def _root(cls):
        root = logging.getLogger(ROOT_NAME)
        if not cls._root_ready:
            root.setLevel(_level())
            root.propagate = False
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            root.addHandler(handler)
            cls._root_ready = True
        return root

    @classmethod
    def get_logger(cls, name, log_file=None):
        """获取日志记录器

        Args:
            name: 日志记录器名称（kauffmann 下的子名）
            log_file: OUTPUT_DIR 下的日志文件名，None 时只写控制台

        Returns:
            logging.Logger: 配置好的日志记录器
        """
        cls._root()
        logger = logging.getLogger(f"{ROOT_NAME}.{name}")
        if log_file and not any(isinstance(h, logging.FileHandler) for h in logger.handlers):
            from .config import config

            os.makedirs(config.OUTPUT_DIR, exist_ok=True)
            handler = logging.FileHandler(os.path.join(config.OUTPUT_DIR, log_file), encoding='utf-8')
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            logger.addHandler(handler)
        return logger

    @classmethod
    def get_date_logger(cls, name):
        """获取按日期命名文件的日志记录器

        LOG_TO_FILE 关闭时退化为普通记录器。
        """
        from .config import config

        if not config.LOG_TO_FILE:
            return cls.get_logger(name)
        return cls.get_logger(name, f"{name}_{datetime.now().strftime('%Y-%m-%d')}.log")


# 各模块使用的日志记录器
coefficients_logger = LoggerManager.get_logger('coefficients')
diagrams_logger = LoggerManager.get_logger('diagrams')
rewrite_logger = LoggerManager.get_logger('rewrite')
bmw_logger = LoggerManager.get_logger('bmw')
qoracle_logger = LoggerManager.get_logger('qoracle')
reporting_logger = LoggerManager.get_logger('reporting')
error_logger = LoggerManager.get_date_logger('error')
