"""B/C/D 型自然表示的数据

N = 2n+1（B）或 2n（C、D），i' = N+1−i。
ϱ_i（i ≤ n）取正根半和在自然表示权上的分量，并按 ϱ_{i'} = −ϱ_i 延拓，B 型 ϱ_{n+1} = 0。
B 型系数环为 ℚ(v)，q = v²；C、D 型为 ℚ(q)。
"""
from dataclasses import dataclass
from fractions import Fraction

from src.coefficients.scalar import ScalarRing

FAMILIES = ('B', 'C', 'D')


@dataclass(frozen=True)
class LieType:
    family: str
    n: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"未知的李型: {self.family}")
        minimum = 2 if self.family == 'D' else 1
        if self.n < minimum:
            raise ValueError(f"{self.family} 型的秩至少为 {minimum}")

    @property
    def N(self):
        return 2 * self.n + 1 if self.family == 'B' else 2 * self.n

    @property
    def epsilon(self):
        return -1 if self.family == 'C' else 1

    @property
    def ring(self):
        return ScalarRing(('v',) if self.family == 'B' else ('q',))

    def prime(self, i):
        return self.N + 1 - i

    def rho(self, i):
        """ϱ_i（Fraction）"""
        if self.family == 'B' and i == self.n + 1:
            return Fraction(0)
        if i > self.n:
            return -self.rho(self.prime(i))
        b = 1 if self.family == 'C' else 0
        return Fraction(self.N, 2) - i + b

    def sign(self, i):
        """ς_i：C 型中 n+1 ≤ i ≤ 2n 时为 −1，其余为 1"""
        return -1 if self.family == 'C' and self.n + 1 <= i <= 2 * self.n else 1

    def qpow(self, exponent):
        """q 的（半）整数次幂"""
        exponent = Fraction(exponent)
        if self.family == 'B':
            return self.ring.symbol('v') ** int(exponent * 2)
        if exponent.denominator != 1:
            raise ValueError(f"{self.family} 型中 q 的指数必须为整数: {exponent}")
        return self.ring.symbol('q') ** int(exponent)

    @property
    def q(self):
        return self.qpow(1)

    @property
    def z(self):
        return self.q - self.q.inverse()

    @property
    def delta(self):
        """δ = ε q^{N−ε}"""
        return self.qpow(self.N - self.epsilon) * self.epsilon

    @property
    def omega0(self):
        return self.ring.one + (self.delta - self.delta.inverse()) / self.z

    def label(self):
        return f"{self.family}{self.n}"
