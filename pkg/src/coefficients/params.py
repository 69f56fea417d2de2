"""参数环境

三种模式解释 δ、z、ω₀、ω_i、u_i：

- GenericAffine：环 ℤ(δ, z)，泡泡 Δ_j（j > 0）保持为形式符号；
- AdmissibleOmega：给定 ω_1, ω_2, …（符号或具体值），负指标由可容许递推强制确定；
- Cyclotomic：给定次数 a、单位 u_1..u_a 与符号 α，δ = α∏u_i，ω_i 由 u-可容许级数与线性递推导出。

所有环境都满足 δ − δ⁻¹ = z(ω₀ − 1)。
"""
from src.coefficients.scalar import ScalarRing, parse_scalar
from src.utils.config import config
from src.utils.exceptions import InconsistentSign, MissingSeed, NonUnit, RequiresCyclotomic
from src.utils.logger import coefficients_logger

logger = coefficients_logger

ALPHA_CHOICES = ('plus', 'minus', 'qminus', 'qinv')


class ParamEnv:
    """参数环境基类"""

    mode = None

    def __init__(self, ring, delta, z):
        self.ring = ring
        self.delta = delta
        self.z = z
        self.omega0 = ring.one + (delta - delta.inverse()) / z
        self._omega_cache = {0: self.omega0}
        # 约化演算与窗口约化器按需创建，生命周期与环境相同
        self._calculus = None
        self._window_reducer = None

    @property
    def aliases(self):
        """解析标量文本时可用的别名"""
        return {'omega0': self.omega0}

    def parse(self, text):
        return parse_scalar(text, self)

    @property
    def has_formal_bubbles(self):
        return False

    def bubble_value(self, j):
        """泡泡 Δ_j 的值；形式泡泡返回 None"""
        return omega(self, j)

    def _positive_omega(self, i):
        raise NotImplementedError

    def describe(self):
        return {'mode': self.mode, 'ring': list(self.ring.names)}

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(self.ring.names)})"


class GenericAffine(ParamEnv):
    """通用仿射环境：δ、z 为自由符号，泡泡保持形式"""

    mode = 'GenericAffine'

    def __init__(self):
        ring = ScalarRing(('delta', 'z'))
        super().__init__(ring, ring.symbol('delta'), ring.symbol('z'))

    @property
    def has_formal_bubbles(self):
        return True

    def bubble_value(self, j):
        if j > 0:
            return None
        return omega(self, j) if j == 0 else None

    def _positive_omega(self, i):
        raise MissingSeed(f"通用仿射环境中 ω_{i} 保持为形式泡泡")

    def mirror_map(self):
        """镜像自同构在参数上的作用：δ ↦ δ⁻¹，z ↦ −z"""
        return {'delta': self.delta.inverse(), 'z': -self.z}


class AdmissibleOmega(ParamEnv):
    """可容许 ω 环境

    Args:
        seeds: {i: Scalar}（i ≥ 1），为 None 时使用符号 omega1..omegaK
        delta: δ，与 seeds 同环；为 None 时使用符号
        z: z，与 seeds 同环；为 None 时使用符号
        max_index: 符号模式下 K 的取值，默认 config.OMEGA_MAX_INDEX
    """

    mode = 'AdmissibleOmega'

    def __init__(self, seeds=None, delta=None, z=None, max_index=None):
        if seeds is None:
            max_index = max_index or config.OMEGA_MAX_INDEX
            names = ('delta', 'z') + tuple(f"omega{i}" for i in range(1, max_index + 1))
            ring = ScalarRing(names)
            seeds = {i: ring.symbol(f"omega{i}") for i in range(1, max_index + 1)}
            delta, z = ring.symbol('delta'), ring.symbol('z')
        else:
            if delta is None or z is None:
                raise ValueError("显式给定 ω 时必须同时给定 δ 与 z")
            ring = delta.ring
        super().__init__(ring, delta, z)
        self.seeds = {int(i): ring(v) for i, v in seeds.items()}

    def _positive_omega(self, i):
        if i not in self.seeds:
            raise MissingSeed(f"缺少 ω_{i}（已知指标: {sorted(self.seeds)}）")
        return self.seeds[i]

    def describe(self):
        info = super().describe()
        info['seeds'] = len(self.seeds)
        return info


class Cyclotomic(ParamEnv):
    """分圆环境

    a 为奇数时 α ∈ {plus, minus}，z 为自由符号；a 为偶数时 α ∈ {qminus, qinv}
    （即 −q 与 q⁻¹），z = q − q⁻¹。

    Args:
        a: 次数
        alpha: 符号选择
        u: 可选的具体 u 值列表（整数或标量文本），缺省时用符号 u1..ua
    """

    mode = 'Cyclotomic'

    def __init__(self, a, alpha=None, u=None):
        if a < 1:
            raise ValueError(f"次数 a 必须为正: {a}")
        if alpha is None:
            alpha = 'plus' if a % 2 else 'qinv'
        if alpha not in ALPHA_CHOICES:
            raise InconsistentSign(f"未知的 α 取值: {alpha}")
        if (a % 2 == 1) != (alpha in ('plus', 'minus')):
            raise InconsistentSign(f"a={a} 与 α={alpha} 的奇偶性不相容")
        self.a = a
        self.alpha_name = alpha
        base = ('z',) if a % 2 else ('q',)
        u_names = () if u is not None else tuple(f"u{i}" for i in range(1, a + 1))
        ring = ScalarRing(base + u_names)

        if u is None:
            self.u = [ring.symbol(name) for name in u_names]
        else:
            if len(u) != a:
                raise ValueError(f"需要 {a} 个 u 值，实际 {len(u)} 个")
            self.u = [ring(v) if not isinstance(v, str) else ring.parse(v) for v in u]
        for index, value in enumerate(self.u, start=1):
            if value.is_zero:
                raise NonUnit(f"u{index} 不可逆")

        if a % 2:
            z = ring.symbol('z')
            alpha_value = ring.one if alpha == 'plus' else -ring.one
        else:
            q = ring.symbol('q')
            z = q - q.inverse()
            alpha_value = -q if alpha == 'qminus' else q.inverse()
        self.alpha = alpha_value
        product = ring.one
        for value in self.u:
            product = product * value
        self.u_product = product
        super().__init__(ring, alpha_value * product, z)
        self._f_coeffs = None
        self._series = None
        logger.debug(f"分圆环境: a={a}, α={alpha}, 环={ring.names}")

    @property
    def aliases(self):
        aliases = super().aliases
        if self.a % 2 == 0:
            aliases['z'] = self.z
        return aliases

    def _positive_omega(self, i):
        if i < self.a:
            return self._seed_series(self.a)[i]
        b = bmw_f_coeffs(self)
        total = self.ring.zero
        for j in range(1, self.a + 1):
            total = total - b[self.a - j] * omega(self, i - j)
        return total

    def _seed_series(self, order):
        if self._series is None or len(self._series[0]) <= order:
            self._series = _u_admissible_series(self, order)
        return self._series[0]

    def describe(self):
        info = super().describe()
        info.update({'a': self.a, 'alpha': self.alpha_name, 'u': [str(v) for v in self.u]})
        return info


def omega(env, i):
    """返回 ω_i

    非负指标取已存或导出的值；负指标由可容许递推
    ω_{−j} = δ⁻²ω_j + δ⁻¹z Σ_{l=1}^{j−1}(ω_{2l−j} − ω_l ω_{l−j}) 确定。

    Args:
        env: 参数环境
        i: 任意整数

    Returns:
        Scalar: ω_i

    Raises:
        MissingSeed: 缺少所需的 ω_i
    """
    cached = env._omega_cache.get(i)
    if cached is not None:
        return cached
    if i > 0:
        value = env._positive_omega(i)
    else:
        j = -i
        d_inv = env.delta.inverse()
        value = d_inv * d_inv * omega(env, j)
        correction = env.ring.zero
        for l in range(1, j):
            correction = correction + omega(env, 2 * l - j) - omega(env, l) * omega(env, l - j)
        value = value + d_inv * env.z * correction
    env._omega_cache[i] = value
    return value


def bmw_f_coeffs(env):
    """f(t) = ∏(t − u_i) = tᵃ + Σ_j b_j tʲ 的系数 (b_0, …, b_{a−1})

    Raises:
        RequiresCyclotomic: 非分圆环境
    """
    if not isinstance(env, Cyclotomic):
        raise RequiresCyclotomic("f 的系数只在分圆环境中定义")
    if env._f_coeffs is None:
        # 逐个乘上 (t − u_i)，coeffs[k] 是 t^k 的系数
        coeffs = [env.ring.one]
        for u in env.u:
            shifted = [env.ring.zero] + coeffs
            for k in range(len(coeffs)):
                shifted[k] = shifted[k] - u * coeffs[k]
            coeffs = shifted
        env._f_coeffs = coeffs[:-1]
    return list(env._f_coeffs)


# ---------------------------------------------------------------------- u-可容许级数
def _series_mul(a, b, order):
    zero = a[0] - a[0]
    out = [zero] * (order + 1)
    for i, x in enumerate(a[:order + 1]):
        if x.is_zero:
            continue
        for j, y in enumerate(b[:order + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def _series_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _series_scale(a, c):
    return [x * c for x in a]


def _geometric(ring, ratio, order, step=1):
    """1/(1 − ratio·t^step) 展开到 t^order"""
    out = [ring.zero] * (order + 1)
    power = ring.one
    for k in range(0, order + 1, step):
        out[k] = power
        power = power * ratio
    return out


def _linear(ring, c0, c1, order):
    out = [ring.zero] * (order + 1)
    out[0] = ring(c0)
    if order >= 1:
        out[1] = ring(c1)
    return out


def _u_admissible_series(env, order):
    """展开两条生成函数恒等式，t = u⁻¹

    Returns:
        tuple: (正向系数列表 [ω_0..ω_order], 负向字典 {i: ω_{−i}}，1 ≤ i ≤ order)
    """
    ring = env.ring
    P = env.u_product
    zd_inv = (env.z * env.delta).inverse()
    inv_square = _geometric(ring, ring.one, order, step=2)       # 1/(1 − t²)
    t_series = ([ring.zero] + inv_square)[:order + 1]              # t/(1 − t²)
    t2_series = ([ring.zero, ring.zero] + inv_square)[:order + 1]  # t²/(1 − t²)

    forward = _geometric(ring, ring.zero, order)  # 常数 1
    backward = _geometric(ring, ring.zero, order)
    for u in env.u:
        u_inv = u.inverse()
        forward = _series_mul(forward, _linear(ring, 1, -u_inv, order), order)
        forward = _series_mul(forward, _geometric(ring, u, order), order)
        backward = _series_mul(backward, _linear(ring, 1, -u, order), order)
        backward = _series_mul(backward, _geometric(ring, u_inv, order), order)

    if env.a % 2:
        g1 = t_series
        g2 = t_series
    else:
        g1 = _series_scale(inv_square, -1)
        g2 = _series_scale(t2_series, -1)

    constant = [ring.zero] * (order + 1)
    constant[0] = zd_inv * P

    first = _series_mul(_series_add(constant, g1), _series_scale(forward, P), order)
    first = _series_add(first, inv_square)
    first[0] = first[0] - zd_inv

    second = _series_mul(_series_add(constant, _series_scale(g2, -1)), _series_scale(backward, P.inverse()), order)
    second = _series_add(t2_series, _series_scale(second, -1))
    second[0] = second[0] + zd_inv

    negative = {i: second[i] for i in range(1, order + 1)}
    return first, negative


def omega_from_u(env, max_index=None):
    """按 u-可容许生成函数展开 ω

    Args:
        env: 分圆环境
        max_index: 展开阶数，默认 config.OMEGA_MAX_INDEX

    Returns:
        dict: {i: ω_i}，−max_index ≤ i ≤ max_index

    Raises:
        RequiresCyclotomic: 非分圆环境
    """
    if not isinstance(env, Cyclotomic):
        raise RequiresCyclotomic("u-可容许级数只在分圆环境中定义")
    if max_index is None:
        max_index = config.OMEGA_MAX_INDEX
    first, negative = _u_admissible_series(env, max_index)
    values = {i: first[i] for i in range(max_index + 1)}
    values.update({-i: v for i, v in negative.items()})
    logger.debug(f"u-可容许级数展开到 {max_index} 阶")
    return values


def _negative_residual(env, values, j):
    """ω_{−j} − δ⁻²ω_j − δ⁻¹z Σ_{l=1}^{j−1}(ω_{2l−j} − ω_l ω_{l−j})，取值来自 values"""
    d_inv = env.delta.inverse()
    correction = env.ring.zero
    for l in range(1, j):
        correction = correction + values[2 * l - j] - values[l] * values[l - j]
    return values[-j] - d_inv * d_inv * values[j] - d_inv * env.z * correction


def _positive_residual(env, values, i):
    """ω_i + Σ_j b_{a−j} ω_{i−j}，取值来自 values"""
    b = bmw_f_coeffs(env)
    total = values[i]
    for j in range(1, env.a + 1):
        total = total + b[env.a - j] * values[i - j]
    return total


def check_admissible(env, max_index=None):
    """检查 ω 的可容许性

    分圆环境下两条递推都代入 u-可容许级数的展开值检查（负向递推对 i < 0，
    线性递推对 i ≥ a），再把 omega() 的值与级数逐项对比。AdmissibleOmega 的负指标
    本身就由负向递推给出，按构造可容许，只列出取值。

    Args:
        env: AdmissibleOmega 或 Cyclotomic 环境
        max_index: 检查的最大指标

    Returns:
        list: 每行 {'index', 'value', 'series', 'residual', 'ok'}；非分圆环境 series 与 residual 为 None
    """
    if max_index is None:
        max_index = config.OMEGA_MAX_INDEX
    cyclotomic = isinstance(env, Cyclotomic)
    series = omega_from_u(env, max_index) if cyclotomic else None
    rows = []
    for i in range(-max_index, max_index + 1):
        value = omega(env, i)
        row = {'index': i, 'value': str(value), 'series': None, 'residual': None, 'ok': True}
        if cyclotomic:
            residuals = [value - series[i]]
            if i < 0:
                residuals.append(_negative_residual(env, series, -i))
            elif i >= env.a:
                residuals.append(_positive_residual(env, series, i))
            bad = next((r for r in residuals if not r.is_zero), None)
            row.update({'series': str(series[i]), 'residual': str(bad if bad is not None else env.ring.zero),
                        'ok': bad is None})
        rows.append(row)
    failed = sum(1 for row in rows if not row['ok'])
    logger.info(f"可容许性检查完成: {len(rows)} 个指标, {failed} 个不一致")
    return rows


def build_env(mode, a=None, alpha=None, u=None):
    """按命令行参数构造参数环境

    Args:
        mode: affine / admissible / cyclotomic
        a: 分圆次数
        alpha: 符号选择
        u: 逗号分隔的 u 值文本或列表

    Returns:
        ParamEnv: 参数环境
    """
    if mode == 'affine':
        return GenericAffine()
    if mode == 'admissible':
        return AdmissibleOmega()
    if mode == 'cyclotomic':
        if a is None:
            raise ValueError("分圆环境需要 --a")
        if isinstance(u, str):
            u = [part.strip() for part in u.split(',') if part.strip()]
            u = [int(part) if part.lstrip('-').isdigit() else part for part in u]
        return Cyclotomic(a, alpha, u)
    raise ValueError(f"未知的参数环境: {mode}")
