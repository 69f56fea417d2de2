"""切片词

一个切片词是按作用顺序排列的基本切片序列（第一个切片最先作用）：
Cap(i)（A，元数减 2）、Cup(i)（U，元数加 2）、Over(i)（T）、Under(i)（T⁻¹）、Dot(i, k)（X_i^k）。

文本格式：用 `.` 分隔的记号 A@i、U@i、T@i、Tinv@i、X@i^k（X@i 等价于 X@i^1）。
"""
import re
from dataclasses import dataclass

from src.utils.exceptions import ArityMismatch, WordParseError

CAP = 'cap'
CUP = 'cup'
OVER = 'over'
UNDER = 'under'
DOT = 'dot'

_TOKEN_NAMES = {CAP: 'A', CUP: 'U', OVER: 'T', UNDER: 'Tinv', DOT: 'X'}


@dataclass(frozen=True)
class Slice:
    kind: str
    position: int
    exponent: int = 0

    def arity_after(self, arity):
        if self.kind == CAP:
            return arity - 2
        if self.kind == CUP:
            return arity + 2
        return arity

    def check(self, arity):
        """检查切片位置对当前元数是否合法"""
        p = self.position
        if self.kind == CUP:
            return 1 <= p <= arity + 1
        if self.kind == DOT:
            return 1 <= p <= arity
        return 1 <= p <= arity - 1

    def shifted(self, offset):
        return Slice(self.kind, self.position + offset, self.exponent)

    def text(self):
        name = _TOKEN_NAMES[self.kind]
        if self.kind == DOT:
            return f"X@{self.position}^{self.exponent}"
        return f"{name}@{self.position}"


def Cap(i):
    return Slice(CAP, i)


def Cup(i):
    return Slice(CUP, i)


def Over(i):
    return Slice(OVER, i)


def Under(i):
    return Slice(UNDER, i)


def Dot(i, k=1):
    return Slice(DOT, i, k)


class SliceWord:
    """带元数检查的切片词

    Args:
        m: 源元数
        slices: 切片序列（作用顺序）

    Raises:
        ArityMismatch: 某个切片的位置对当时的元数不合法
    """

    __slots__ = ('m', 's', 'slices')

    def __init__(self, m, slices=()):
        self.m = m
        self.slices = tuple(slices)
        arity = m
        for index, piece in enumerate(self.slices):
            if not piece.check(arity):
                raise ArityMismatch(f"{piece.text()} 在元数 {arity} 处越界", slice_index=index)
            arity = piece.arity_after(arity)
        self.s = arity

    def __iter__(self):
        return iter(self.slices)

    def __len__(self):
        return len(self.slices)

    def __eq__(self, other):
        return isinstance(other, SliceWord) and (self.m, self.slices) == (other.m, other.slices)

    def __hash__(self):
        return hash((self.m, self.slices))

    def then(self, other):
        """先作用 self 再作用 other"""
        if other.m != self.s:
            raise ArityMismatch(f"无法拼接 Hom({self.m},{self.s}) 与 Hom({other.m},{other.s})")
        return SliceWord(self.m, self.slices + other.slices)

    def shifted(self, offset):
        """在左侧添加 offset 条恒等线"""
        return SliceWord(self.m + offset, tuple(piece.shifted(offset) for piece in self.slices))

    def arities(self):
        """每个切片作用前的元数"""
        result = []
        arity = self.m
        for piece in self.slices:
            result.append(arity)
            arity = piece.arity_after(arity)
        return result

    def flipped(self):
        """竖直翻转：逆序并交换 cap 与 cup，交叉与点保持不变"""
        out = []
        for piece, arity in zip(reversed(self.slices), reversed(self.arities())):
            if piece.kind == CAP:
                out.append(Cup(piece.position))
            elif piece.kind == CUP:
                out.append(Cap(piece.position))
            else:
                out.append(piece)
        return SliceWord(self.s, out)

    def rotated(self):
        """旋转 180°：逆序、位置镜像、cap 与 cup 互换，点的指数取反"""
        out = []
        for piece, arity in zip(reversed(self.slices), reversed(self.arities())):
            after = piece.arity_after(arity)
            if piece.kind == CUP:
                out.append(Cap(after - piece.position))
            elif piece.kind == CAP:
                out.append(Cup(arity - piece.position))
            elif piece.kind == DOT:
                out.append(Dot(after + 1 - piece.position, -piece.exponent))
            else:
                out.append(Slice(piece.kind, after - piece.position))
        return SliceWord(self.s, out)

    def mirrored(self):
        """镜像：T 与 T⁻¹ 互换，点的指数取反"""
        out = []
        for piece in self.slices:
            if piece.kind == OVER:
                out.append(Under(piece.position))
            elif piece.kind == UNDER:
                out.append(Over(piece.position))
            elif piece.kind == DOT:
                out.append(Dot(piece.position, -piece.exponent))
            else:
                out.append(piece)
        return SliceWord(self.m, out)

    def text(self):
        return ' . '.join(piece.text() for piece in self.slices)

    def __str__(self):
        return self.text() or '1'

    def __repr__(self):
        return f"SliceWord({self.m}->{self.s}: {self})"


_TOKEN_RE = re.compile(r"(Tinv|A|U|T|X)@(\d+)(?:\^([+-]?\d+))?$")


def parse_word(text, m=0):
    """解析切片词文本

    Args:
        text: 如 "U@1 . A@1"，可以跨多行
        m: 源元数

    Returns:
        SliceWord: 解析结果

    Raises:
        WordParseError: 记号无法识别（带行列号）
        ArityMismatch: 元数不一致（带切片下标）
    """
    slices = []
    for line_no, line in enumerate(text.splitlines() or [''], start=1):
        column = 0
        chunks = line.split('.')
        for index, chunk in enumerate(chunks):
            start = column + (len(chunk) - len(chunk.lstrip()))
            token = chunk.strip()
            column += len(chunk) + 1
            if not token:
                # 行首行尾的分隔符用于跨行续写
                if 0 < index < len(chunks) - 1:
                    raise WordParseError("空记号", line_no, start + 1)
                continue
            match = _TOKEN_RE.match(token)
            if not match:
                raise WordParseError(f"无法识别的记号 {token!r}", line_no, start + 1)
            name, position, exponent = match.group(1), int(match.group(2)), match.group(3)
            if name != 'X' and exponent is not None:
                raise WordParseError(f"只有 X 可以带指数: {token!r}", line_no, start + 1)
            if name == 'A':
                slices.append(Cap(position))
            elif name == 'U':
                slices.append(Cup(position))
            elif name == 'T':
                slices.append(Over(position))
            elif name == 'Tinv':
                slices.append(Under(position))
            else:
                slices.append(Dot(position, int(exponent) if exponent is not None else 1))
    return SliceWord(m, slices)
