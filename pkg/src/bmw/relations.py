"""关系校验

verify_kauffmann_relations 对生成关系逐条约化 LHS − RHS；
verify_bmw_relations 在 End(ob r) 中检查仿射 BMW 代数的全部定义关系。
每行报告给出关系名、下标、是否为零以及残差文本。
"""
import time

from src.bmw.generators import BmwElement, generator
from src.coefficients.params import omega
from src.diagrams.presentation import KAUFFMANN_RELATIONS, coefficient_values
from src.rewrite.engine import bubble_reduce, normalize, tensor
from src.utils.config import config
from src.utils.logger import bmw_logger

logger = bmw_logger


def residual_text(f):
    """残差的紧凑文本；零态射为 '0'"""
    if f.is_zero:
        return '0'
    return ' + '.join(f"({c})*{d}" for d, c in f.items())


def _row(name, indices, residual):
    return {
        'relation': name,
        'indices': indices,
        'ok': residual.is_zero,
        'residual': residual_text(residual),
    }


def _summary(rows, title, start):
    failed = [row for row in rows if not row['ok']]
    logger.info(f"{title}: {len(rows)} 条, 失败 {len(failed)} 条, 耗时: {time.time() - start:.2f} 秒")
    for row in failed:
        logger.warning(f"关系 {row['relation']}{row['indices']} 不成立: {row['residual']}")
    return rows


def _side_value(side, env, values):
    total = None
    for factor, key, word in side:
        term = normalize(word, env).scale(values[key] * factor)
        total = term if total is None else total + term
    return total


def verify_kauffmann_relations(env, include_affine=True):
    """约化 Kauffmann（及仿射）生成关系的两侧之差

    Args:
        env: 参数环境
        include_affine: 是否包含点的关系

    Returns:
        list: 每条关系一行 {'relation', 'indices', 'ok', 'residual'}
    """
    start = time.time()
    values = coefficient_values(env.delta, env.z, env.omega0)
    rows = []
    for relation in KAUFFMANN_RELATIONS:
        if relation.affine and not include_affine:
            continue
        residual = _side_value(relation.lhs, env, values) - _side_value(relation.rhs, env, values)
        rows.append(_row(relation.name, [], residual))
    return _summary(rows, "Kauffmann 关系", start)


def omega_times(s, element):
    """ω_s·element；通用环境中 ω_s 是形式泡泡"""
    env = element.env
    if env.has_formal_bubbles and s:
        bubble = bubble_reduce(s, env)
        return BmwElement(element.r, env, tensor(bubble, element.morphism, env))
    return element.scale(omega(env, s))


def verify_bmw_relations(r, env, s_max=None):
    """检查仿射 BMW 代数的定义关系

    Args:
        r: 线数，r ≥ 3 时辫关系才可检查
        env: 参数环境
        s_max: e₁x₁ˢe₁ = ω_s e₁ 检查的最大 s，默认取配置

    Returns:
        list: 每条（关系, 下标）一行
    """
    start = time.time()
    s_max = config.RELATION_S_MAX if s_max is None else s_max
    one = BmwElement.identity(r, env)
    g = {i: generator('g', i, r, env) for i in range(1, r)}
    gi = {i: generator('g_inv', i, r, env) for i in range(1, r)}
    e = {i: generator('e', i, r, env) for i in range(1, r)}
    x1 = generator('x', 1, r, env)
    x1i = generator('x_inv', 1, r, env)
    delta, z = env.delta, env.z
    rows = []

    def check(name, indices, lhs, rhs):
        rows.append(_row(name, indices, (lhs - rhs).morphism))

    for i in range(1, r):
        check('(1) g·g⁻¹', [i], g[i] * gi[i], one)
        check('(1) g⁻¹·g', [i], gi[i] * g[i], one)
    check('(2) x·x⁻¹', [1], x1 * x1i, one)
    check('(2) x⁻¹·x', [1], x1i * x1, one)
    for i in range(1, r):
        check('(3) e²', [i], e[i] * e[i], omega_times(0, e[i]))
    for i in range(1, r - 1):
        check('(4) braid', [i], g[i] * g[i + 1] * g[i], g[i + 1] * g[i] * g[i + 1])
    for i in range(1, r):
        check('(5) skein', [i], g[i] - gi[i], (one - e[i]).scale(z))
    if r >= 2:
        check('(6) x₁g₁x₁g₁', [1], x1 * g[1] * x1 * g[1], g[1] * x1 * g[1] * x1)
    for i in range(1, r):
        for j in range(1, r):
            if abs(i - j) < 2:
                continue
            for yn, y in (('g', g), ('e', e)):
                for wn, w in (('g', g), ('e', e)):
                    check(f'(7) {yn}{wn}', [i, j], y[i] * w[j], w[j] * y[i])
    for j in range(2, r):
        check('(8) x₁g', [j], x1 * g[j], g[j] * x1)
        check('(8) x₁e', [j], x1 * e[j], e[j] * x1)
    for i in range(1, r):
        for j in (i - 1, i + 1):
            if 1 <= j < r:
                check('(9) eee', [i, j], e[i] * e[j] * e[i], e[i])
                check('(10) gge', [i, j], g[i] * g[j] * e[i], e[j] * e[i])
                check('(10) egg', [i, j], e[i] * g[j] * g[i], e[i] * e[j])
    if r >= 2:
        for s in range(1, s_max + 1):
            check('(11) e₁x₁ˢe₁', [s], e[1] * (x1 ** s) * e[1], omega_times(s, e[1]))
    for i in range(1, r):
        check('(12) ge', [i], g[i] * e[i], e[i].scale(delta.inverse()))
        check('(12) eg', [i], e[i] * g[i], e[i].scale(delta.inverse()))
    if r >= 2:
        check('(13) e₁x₁g₁x₁', [1], e[1] * x1 * g[1] * x1, e[1].scale(delta))
        check('(13) x₁g₁x₁e₁', [1], x1 * g[1] * x1 * e[1], e[1].scale(delta))
    return _summary(rows, f"仿射 BMW 关系 r={r}", start)


def all_ok(rows):
    return all(row['ok'] for row in rows)
