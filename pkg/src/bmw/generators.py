"""仿射 BMW 代数的生成元

End(ob r) 中的元素用 BmwElement 包装，乘法 a*b = a∘b（先作用 b）。
g_i ↦ T_i，g_i⁻¹ ↦ T_i⁻¹，e_i ↦ U_i∘A_i，x_1 ↦ X_1，x_i = g_{i−1}⋯g_1 x_1 g_1⋯g_{i−1}。
"""
from src.diagrams.basis import Morphism
from src.diagrams.slice_word import Cap, Cup, Dot, Over, SliceWord, Under
from src.rewrite.engine import compose, normalize
from src.utils.exceptions import IncompatibleRing, IndexOutOfRange

GENERATOR_NAMES = ('g', 'g_inv', 'e', 'x', 'x_inv')


class BmwElement:
    """End(ob r) 中绑定参数环境的元素"""

    __slots__ = ('r', 'env', 'morphism')

    def __init__(self, r, env, morphism):
        if morphism.m != r or morphism.s != r:
            raise IndexOutOfRange(f"态射 Hom({morphism.m},{morphism.s}) 不在 End(ob {r}) 中")
        self.r = r
        self.env = env
        self.morphism = morphism

    @classmethod
    def identity(cls, r, env):
        return cls(r, env, Morphism.identity(r, env.ring))

    @classmethod
    def from_word(cls, word, env):
        return cls(word.m, env, normalize(word, env))

    def _coerce(self, other):
        if isinstance(other, BmwElement):
            if other.env is not self.env or other.r != self.r:
                raise IncompatibleRing("元素属于不同的代数")
            return other
        return BmwElement.identity(self.r, self.env).scale(other)

    def __mul__(self, other):
        if isinstance(other, BmwElement):
            other = self._coerce(other)
            return BmwElement(self.r, self.env, compose(self.morphism, other.morphism, self.env))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("只支持非负次幂")
        result = BmwElement.identity(self.r, self.env)
        for _ in range(k):
            result = result * self
        return result

    def __add__(self, other):
        other = self._coerce(other)
        return BmwElement(self.r, self.env, self.morphism + other.morphism)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return BmwElement(self.r, self.env, self.morphism - other.morphism)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return BmwElement(self.r, self.env, -self.morphism)

    def scale(self, scalar):
        return BmwElement(self.r, self.env, self.morphism.scale(scalar))

    @property
    def is_zero(self):
        return self.morphism.is_zero

    def __eq__(self, other):
        if not isinstance(other, BmwElement):
            return NotImplemented
        return self.r == other.r and self.morphism == other.morphism

    def __hash__(self):
        return hash((self.r, self.morphism))

    def __repr__(self):
        return f"BmwElement(r={self.r}, {self.morphism!r})"


def generator_word(name, i, r):
    """生成元对应的切片词（作用顺序）

    Raises:
        IndexOutOfRange: 下标越界或名称未知
    """
    if name not in GENERATOR_NAMES:
        raise IndexOutOfRange(f"未知的生成元: {name}")
    limit = r if name in ('x', 'x_inv') else r - 1
    if not 1 <= i <= limit:
        raise IndexOutOfRange(f"{name}_{i} 要求 1 ≤ i ≤ {limit}，实际 r={r}")
    if name == 'g':
        slices = [Over(i)]
    elif name == 'g_inv':
        slices = [Under(i)]
    elif name == 'e':
        slices = [Cap(i), Cup(i)]
    else:
        cross, exponent = (Over, 1) if name == 'x' else (Under, -1)
        slices = [cross(p) for p in range(i - 1, 0, -1)]
        slices.append(Dot(1, exponent))
        slices.extend(cross(p) for p in range(1, i))
    return SliceWord(r, slices)


def generator(name, i, r, env):
    """返回规范化后的生成元

    Args:
        name: g / g_inv / e / x / x_inv
        i: 下标
        r: 线数
        env: 参数环境

    Returns:
        BmwElement: 生成元
    """
    return BmwElement.from_word(generator_word(name, i, r), env)
