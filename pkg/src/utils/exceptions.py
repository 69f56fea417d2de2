"""项目中使用的异常类型

所有与输入值有关的错误同时继承 ValueError，便于调用方统一捕获。
"""


class KauffmanError(Exception):
    """所有异常的基类"""


class NonUnit(KauffmanError, ValueError):
    """对环中非单位元求逆"""


class IncompatibleRing(KauffmanError, ValueError):
    """两个标量属于不同的参数环"""


class MissingSeed(KauffmanError, ValueError):
    """可容许参数环境缺少所需的 ω_i"""


class InconsistentSign(KauffmanError, ValueError):
    """α 的取值与 a 的奇偶性不相容"""


class ScalarParseError(KauffmanError, ValueError):
    """标量文本无法解析"""


class WordParseError(KauffmanError, ValueError):
    """切片词文本无法解析

    Attributes:
        line: 出错行号（从1开始）
        column: 出错列号（从1开始）
    """

    def __init__(self, message, line=1, column=1):
        super().__init__(f"第{line}行第{column}列: {message}")
        self.line = line
        self.column = column


class ArityMismatch(KauffmanError, ValueError):
    """元数不一致

    Attributes:
        slice_index: 出错切片在词中的下标（不适用时为 None）
    """

    def __init__(self, message, slice_index=None):
        if slice_index is not None:
            message = f"切片 #{slice_index}: {message}"
        super().__init__(message)
        self.slice_index = slice_index


class IndexOutOfRange(KauffmanError, ValueError):
    """生成元下标越界"""


class RequiresCyclotomic(KauffmanError, ValueError):
    """该操作只能在分圆参数环境下进行"""


class ClosureViolation(KauffmanError):
    """乘积离开了分圆基的线性张成，说明约化过程出了问题"""


class BufferTooSmall(UserWarning):
    """缓冲模块为空时点被求值为 δ 倍恒等映射，信息丢失"""
