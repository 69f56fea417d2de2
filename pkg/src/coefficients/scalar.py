"""精确标量运算

标量是整数系数多元 Laurent 多项式（或其分式）。底层使用 sympy 的稀疏分式域
`sympy.polys.fields.field(names, ZZ)`，本模块只负责：

- 以固定的生成元名元组缓存参数环；
- 规范化的文本输出（Laurent 形式、按指数向量降序、分母首项系数为正）；
- 与输出格式一致的文本解析，保证打印后再解析得到相同的值。
"""
import re
from fractions import Fraction

from sympy.polys.domains import ZZ
from sympy.polys.fields import field as frac_field

from src.utils.exceptions import IncompatibleRing, NonUnit, ScalarParseError
from src.utils.logger import coefficients_logger

logger = coefficients_logger


class ScalarRing:
    """以生成元名元组为键缓存的参数环（分式域）"""

    _cache = {}

    def __new__(cls, names):
        names = tuple(names)
        ring = cls._cache.get(names)
        if ring is not None:
            return ring
        if len(set(names)) != len(names):
            raise ValueError(f"生成元名重复: {names}")
        ring = super().__new__(cls)
        ring.names = names
        if names:
            built = frac_field(','.join(names), ZZ)
            ring.field = built[0]
            ring._gens = dict(zip(names, built[1:]))
        else:
            # 无生成元时借用一个哑元，所有元素都是常数
            built = frac_field('_c', ZZ)
            ring.field = built[0]
            ring._gens = {}
        cls._cache[names] = ring
        logger.debug(f"创建参数环: {names}")
        return ring

    def __repr__(self):
        return f"ScalarRing({', '.join(self.names)})"

    def __reduce__(self):
        return (ScalarRing, (self.names,))

    @property
    def domain(self):
        """sympy 的分式域 Domain，供 DomainMatrix 做精确消元"""
        return self.field.to_domain()

    @property
    def zero(self):
        return Scalar(self, self.field.zero)

    @property
    def one(self):
        return Scalar(self, self.field.one)

    def symbol(self, name):
        """返回生成元对应的标量

        Args:
            name: 生成元名

        Returns:
            Scalar: 该生成元

        Raises:
            ScalarParseError: 名字不在本环中
        """
        try:
            return Scalar(self, self._gens[name])
        except KeyError:
            raise ScalarParseError(f"符号 {name} 不属于参数环 {self.names}") from None

    def __call__(self, value):
        """把整数、分数或本环标量转换为本环标量"""
        if isinstance(value, Scalar):
            if value.ring is not self:
                raise IncompatibleRing(f"标量属于 {value.ring.names}，期望 {self.names}")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return Scalar(self, self.field(value))
        if isinstance(value, Fraction):
            return Scalar(self, self.field(value.numerator) / self.field(value.denominator))
        raise TypeError(f"无法转换为标量: {value!r}")

    def parse(self, text, aliases=None):
        """解析标量文本

        Args:
            text: 标量文本，如 "delta^-1*z + 2" 或 "(q^2 - 1) / (q)"
            aliases: 可选的别名表 {名字: Scalar}，例如 omega0

        Returns:
            Scalar: 解析结果
        """
        return _ScalarParser(self, text, aliases or {}).parse()


class Scalar:
    """参数环中的一个精确元素（不可变）"""

    __slots__ = ('ring', 'value', '_text')

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value
        self._text = None

    # ------------------------------------------------------------------ 基本运算
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ring is not self.ring:
                raise IncompatibleRing(f"不能混合参数环 {self.ring.names} 与 {other.ring.names}")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.ring(other).value
        return None

    def __add__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Scalar(self.ring, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Scalar(self.ring, self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Scalar(self.ring, v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Scalar(self.ring, self.value * v)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.ring, -self.value)

    def inverse(self):
        """求逆

        Raises:
            NonUnit: 对零求逆
        """
        if self.is_zero:
            raise NonUnit("零不是单位元")
        return Scalar(self.ring, 1 / self.value)

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        if not v:
            raise NonUnit("除数为零")
        return Scalar(self.ring, self.value / v)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is None:
            return NotImplemented
        return Scalar(self.ring, v) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return Scalar(self.ring, self.value ** k)

    # ------------------------------------------------------------------ 比较
    @property
    def is_zero(self):
        return not self.value

    def __bool__(self):
        return not self.is_zero

    def __eq__(self, other):
        if isinstance(other, Scalar):
            if other.ring is not self.ring:
                return False
            return not (self.value - other.value)
        if isinstance(other, (int, Fraction)):
            return not (self.value - self.ring(other).value)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, str(self)))

    # ------------------------------------------------------------------ 替换
    def evaluate(self, mapping, target):
        """环同态：把每个生成元替换成目标环中的标量

        Args:
            mapping: {生成元名: Scalar}；未给出的生成元按同名符号映射到目标环
            target: 目标 ScalarRing

        Returns:
            Scalar: 目标环中的像
        """
        images = []
        for name in self.ring.names:
            if name in mapping:
                images.append(target(mapping[name]))
            else:
                images.append(target.symbol(name))

        def eval_poly(poly):
            total = target.zero
            for monom, coeff in poly.terms():
                term = target(int(coeff))
                for img, e in zip(images, monom):
                    if e:
                        term = term * img ** e
                total = total + term
            return total

        if not self.ring.names:
            return target(int(self.value.numer.LC)) / target(int(self.value.denom.LC))
        return eval_poly(self.value.numer) / eval_poly(self.value.denom)

    # ------------------------------------------------------------------ 文本
    def __str__(self):
        if self._text is None:
            self._text = _format(self)
        return self._text

    def __repr__(self):
        return f"Scalar({self})"

    def sort_key(self):
        return str(self)


# ---------------------------------------------------------------------- 输出
def _laurent_terms(poly, shift, nvars):
    terms = []
    for monom, coeff in poly.terms():
        exps = tuple(monom[i] - shift[i] for i in range(nvars)) if nvars else ()
        terms.append((exps, int(coeff)))
    terms.sort(key=lambda t: t[0], reverse=True)
    return terms


def _format_terms(terms, names):
    if not terms:
        return "0"
    parts = []
    for index, (exps, coeff) in enumerate(terms):
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e != 0:
                factors.append(f"{name}^{e}")
        magnitude = abs(coeff)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = '*'.join(factors)
        else:
            body = f"{magnitude}*" + '*'.join(factors)
        if index == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    return ''.join(parts)


def _format(x):
    names = x.ring.names
    nvars = len(names)
    numer, denom = x.value.numer, x.value.denom
    if not numer:
        return "0"
    if not nvars:
        value = Fraction(int(numer.LC), int(denom.LC))
        return str(value.numerator) if value.denominator == 1 else f"({value.numerator}) / ({value.denominator})"

    # 从分母中提出单项式因子
    den_terms = denom.terms()
    shift = tuple(min(m[i] for m, _ in den_terms) for i in range(nvars))
    sign = 1
    lead_coeff = int(max(den_terms, key=lambda t: t[0])[1])
    if lead_coeff < 0:
        sign = -1
    num_terms = [(e, sign * c) for e, c in _laurent_terms(numer, shift, nvars)]
    den_laurent = [(e, sign * c) for e, c in _laurent_terms(denom, shift, nvars)]

    if len(den_laurent) == 1 and all(v == 0 for v in den_laurent[0][0]):
        c = den_laurent[0][1]
        if all(coeff % c == 0 for _, coeff in num_terms):
            return _format_terms([(e, coeff // c) for e, coeff in num_terms], names)
    return f"({_format_terms(num_terms, names)}) / ({_format_terms(den_laurent, names)})"


# ---------------------------------------------------------------------- 解析
_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _ScalarParser:
    """递归下降解析器：expr := term (('+'|'-') term)*"""

    def __init__(self, ring, text, aliases):
        self.ring = ring
        self.text = text
        self.aliases = aliases
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                raise ScalarParseError(f"无法识别的字符，位置 {pos}: {text!r}")
            kind = 'int' if m.group(1) else 'name' if m.group(2) else 'op'
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.index = 0

    def _peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else (None, None, len(self.text))

    def _take(self):
        tok = self._peek()
        self.index += 1
        return tok

    def _expect(self, op):
        kind, value, pos = self._take()
        if kind != 'op' or value != op:
            raise ScalarParseError(f"位置 {pos} 处期望 {op!r}: {self.text!r}")

    def parse(self):
        if not self.tokens:
            raise ScalarParseError("空的标量文本")
        result = self._expr()
        kind, value, pos = self._peek()
        if kind is not None:
            raise ScalarParseError(f"位置 {pos} 处有多余内容 {value!r}: {self.text!r}")
        return result

    def _expr(self):
        kind, value, _ = self._peek()
        negate = False
        if kind == 'op' and value in '+-':
            self._take()
            negate = value == '-'
        result = self._term()
        if negate:
            result = -result
        while True:
            kind, value, _ = self._peek()
            if kind == 'op' and value in '+-':
                self._take()
                rhs = self._term()
                result = result + rhs if value == '+' else result - rhs
            else:
                return result

    def _term(self):
        result = self._factor()
        while True:
            kind, value, _ = self._peek()
            if kind == 'op' and value in '*/':
                self._take()
                rhs = self._factor()
                result = result * rhs if value == '*' else result / rhs
            else:
                return result

    def _factor(self):
        base = self._atom()
        kind, value, _ = self._peek()
        if kind == 'op' and value == '^':
            self._take()
            sign = 1
            kind, value, pos = self._peek()
            if kind == 'op' and value in '+-':
                self._take()
                sign = -1 if value == '-' else 1
            kind, value, pos = self._take()
            if kind != 'int':
                raise ScalarParseError(f"位置 {pos} 处期望整数指数: {self.text!r}")
            return base ** (sign * int(value))
        return base

    def _atom(self):
        kind, value, pos = self._take()
        if kind == 'int':
            return self.ring(int(value))
        if kind == 'name':
            if value in self.aliases:
                return self.ring(self.aliases[value])
            return self.ring.symbol(value)
        if kind == 'op' and value == '(':
            inner = self._expr()
            self._expect(')')
            return inner
        if kind == 'op' and value == '-':
            return -self._atom()
        raise ScalarParseError(f"位置 {pos} 处语法错误: {self.text!r}")


def parse_scalar(text, env):
    """在参数环境 env 中解析标量文本（支持 omega0 等别名）"""
    return env.ring.parse(text, env.aliases)


def format_scalar(x):
    return str(x)
