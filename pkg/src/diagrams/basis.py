"""基元图与态射

BasisDiagram 只保存类数据：连接子、每条线指定端点上的点指数、泡泡次数的多重集。
Morphism 是基元图的有限线性组合。
"""
from dataclasses import dataclass

from src.diagrams.connector import (
    Connector, bent_position, endpoint_at_bent, enumerate_connectors,
)
from src.utils.exceptions import ArityMismatch, IncompatibleRing
from src.utils.logger import diagrams_logger

logger = diagrams_logger


@dataclass(frozen=True)
class BasisDiagram:
    """正规序基元图

    Attributes:
        connector: 连接子
        dots: ((线编号, 指数), ...)，只保存非零指数，按线编号排序
        bubbles: 正次数泡泡的有序元组
    """

    connector: Connector
    dots: tuple = ()
    bubbles: tuple = ()

    def __post_init__(self):
        dots = tuple(sorted((int(k), int(e)) for k, e in dict(self.dots).items() if e))
        for index, _ in dots:
            if not 1 <= index <= len(self.connector):
                raise ValueError(f"线编号越界: {index}")
        bubbles = tuple(sorted(int(j) for j in self.bubbles))
        if any(j <= 0 for j in bubbles):
            raise ValueError(f"泡泡次数必须为正: {bubbles}")
        object.__setattr__(self, 'dots', dots)
        object.__setattr__(self, 'bubbles', bubbles)

    @property
    def m(self):
        return self.connector.m

    @property
    def s(self):
        return self.connector.s

    def dot(self, index):
        return dict(self.dots).get(index, 0)

    def sort_key(self):
        return (self.connector.pairs, self.dots, self.bubbles)

    def __str__(self):
        dots = ','.join(f"{k}:{e}" for k, e in self.dots)
        bubbles = ','.join(str(j) for j in self.bubbles)
        return f"{self.connector}[{dots}]{{{bubbles}}}"


class Morphism:
    """Hom(m, s) 中的元素：{BasisDiagram: Scalar}，不保存零系数"""

    __slots__ = ('m', 's', 'ring', 'terms')

    def __init__(self, m, s, ring, terms=None):
        self.m = m
        self.s = s
        self.ring = ring
        self.terms = {}
        for key, coeff in (terms or {}).items():
            if key.m != m or key.s != s:
                raise ArityMismatch(f"基元图 {key} 不在 Hom({m},{s}) 中")
            coeff = ring(coeff)
            if not coeff.is_zero:
                self.terms[key] = coeff

    @classmethod
    def zero(cls, m, s, ring):
        return cls(m, s, ring)

    @classmethod
    def basis(cls, diagram, ring, coeff=1):
        return cls(diagram.m, diagram.s, ring, {diagram: coeff})

    @classmethod
    def identity(cls, r, ring):
        pairs = tuple((i, -i) for i in range(1, r + 1))
        return cls.basis(BasisDiagram(Connector(r, r, pairs)), ring)

    def _check(self, other):
        if not isinstance(other, Morphism):
            raise TypeError(f"不是态射: {other!r}")
        if (self.m, self.s) != (other.m, other.s):
            raise ArityMismatch(f"Hom({self.m},{self.s}) 与 Hom({other.m},{other.s}) 不能相加")
        if self.ring is not other.ring:
            raise IncompatibleRing(f"参数环不同: {self.ring.names} / {other.ring.names}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms[key] + coeff if key in terms else coeff
        return Morphism(self.m, self.s, self.ring, terms)

    def __neg__(self):
        return Morphism(self.m, self.s, self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.ring(scalar)
        return Morphism(self.m, self.s, self.ring, {k: c * scalar for k, c in self.terms.items()})

    def __mul__(self, scalar):
        return self.scale(scalar)

    __rmul__ = __mul__

    @property
    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        if (self.m, self.s) != (other.m, other.s) or self.ring is not other.ring:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.s, tuple(self.items())))

    def items(self):
        """按确定顺序返回 (BasisDiagram, Scalar)"""
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"Morphism({self.m}->{self.s}: 0)"
        body = ' + '.join(f"({c})*{k}" for k, c in self.items())
        return f"Morphism({self.m}->{self.s}: {body})"


def enumerate_kauffmann_basis(m, s):
    """Kauffmann 范畴中 Hom(m, s) 的基：每个连接子一个无点无泡的基元图"""
    basis = [BasisDiagram(c) for c in enumerate_connectors(m, s)]
    logger.debug(f"Kauffmann 基 Hom({m},{s}): {len(basis)} 个元素")
    return basis


# ---------------------------------------------------------------------- 弯折
def bend_diagram(diagram):
    """Hom(m, s) 的基元图 ↦ Hom(0, m+s) 的基元图

    底部端点 i 移到位置 s+m+1−i，顶部端点保持不动；
    底部指定端点上的点在弯折后改变符号。
    """
    m, s = diagram.m, diagram.s
    n = m + s
    pairs = []
    dots = {}
    for index, (first, second) in enumerate(diagram.connector.pairs, start=1):
        pairs.append((-bent_position(first, m, s), -bent_position(second, m, s)))
    bent = Connector.from_pairs(pairs, 0, n)
    for index, (first, _) in enumerate(diagram.connector.pairs, start=1):
        exponent = diagram.dot(index)
        if exponent:
            position = bent_position(first, m, s)
            dots[bent.strand_of(-position)] = -exponent if first > 0 else exponent
    return BasisDiagram(bent, tuple(dots.items()), diagram.bubbles)


def unbend_diagram(diagram, m):
    """bend_diagram 的逆：Hom(0, m+s) ↦ Hom(m, s)"""
    if diagram.m != 0:
        raise ArityMismatch(f"只能对 Hom(0, n) 中的图做逆弯折，实际源元数 {diagram.m}")
    n = diagram.s
    s = n - m
    if s < 0:
        raise ArityMismatch(f"m={m} 超过端点总数 {n}")
    pairs = []
    for first, second in diagram.connector.pairs:
        pairs.append((endpoint_at_bent(-first, m, s), endpoint_at_bent(-second, m, s)))
    connector = Connector.from_pairs(pairs, m, s)
    dots = {}
    for index, (first, _) in enumerate(diagram.connector.pairs, start=1):
        exponent = diagram.dot(index)
        if exponent:
            endpoint = endpoint_at_bent(-first, m, s)
            dots[connector.strand_of(endpoint)] = -exponent if endpoint > 0 else exponent
    return BasisDiagram(connector, tuple(dots.items()), diagram.bubbles)


def bend(f):
    """Hom(m, s) → Hom(0, m+s) 的弯折同构"""
    return Morphism(0, f.m + f.s, f.ring, {bend_diagram(k): c for k, c in f.terms.items()})


def unbend(g, m):
    """Hom(0, m+s) → Hom(m, s) 的逆弯折

    Raises:
        ArityMismatch: g 的源元数不为 0 或 m 过大
    """
    if g.m != 0:
        raise ArityMismatch(f"只能对 Hom(0, n) 中的态射做逆弯折，实际源元数 {g.m}")
    if m > g.s:
        raise ArityMismatch(f"m={m} 超过端点总数 {g.s}")
    return Morphism(m, g.s - m, g.ring, {unbend_diagram(k, m): c for k, c in g.terms.items()})
