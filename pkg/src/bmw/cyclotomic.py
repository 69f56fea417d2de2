"""分圆商：点窗口约化、窗口基与结构常数

在弯折图像中，每条线的点都位于右端点，允许的指数区间都是顶部窗口
W_top = {−⌊(a−1)/2⌋, …, ⌊a/2⌋}（底部端点的指数在弯折时变号，恰好对应 W_bot）。

窗口外的点用理想中的关系消去：把线 k 的左端移到位置 1，在位置 1 作用 X^c·f(X)，
再用 T 把左端移回原位、补上其余线的点并约化。这样得到的关系中原状态的系数是 b_0 或 1，
其余各项的点更靠近窗口，或交叉更少。对出现的所有窗口外状态饱和生成关系后，
用 sympy 的 DomainMatrix 在分式域上求行最简形。
"""
import itertools
import time
from dataclasses import dataclass

import pandas as pd
from sympy.polys.matrices import DomainMatrix

from src.coefficients.params import Cyclotomic, bmw_f_coeffs
from src.coefficients.scalar import Scalar
from src.diagrams.basis import BasisDiagram, Morphism, bend_diagram, unbend_diagram
from src.diagrams.connector import double_factorial, enumerate_connectors
from src.diagrams.slice_word import Dot, Over
from src.rewrite.engine import apply_word, calculus_for, compose, diagram_from_state, state_from_diagram
from src.rewrite.layered import add_term, make_state, merge_terms
from src.utils.config import config
from src.utils.exceptions import ClosureViolation, RequiresCyclotomic
from src.utils.logger import bmw_logger

logger = bmw_logger


@dataclass(frozen=True)
class WindowSpec:
    """次数 a 的点指数窗口"""

    a: int

    @property
    def bottom(self):
        return range(-(self.a // 2), (self.a - 1) // 2 + 1)

    @property
    def top(self):
        return range(-((self.a - 1) // 2), self.a // 2 + 1)

    def window_for(self, endpoint):
        """指定端点为底部端点（正编码）时用底部窗口，否则用顶部窗口"""
        return self.bottom if endpoint > 0 else self.top

    def contains_bent(self, exponent):
        return exponent in self.top


def _require_cyclotomic(env):
    if not isinstance(env, Cyclotomic):
        raise RequiresCyclotomic(f"需要分圆环境，实际为 {type(env).__name__}")


class WindowReducer:
    """绑定一个分圆环境的窗口约化器，缓存已解出的状态"""

    def __init__(self, env):
        self.env = env
        self.spec = WindowSpec(env.a)
        self.calc = calculus_for(env)
        self.coeffs = bmw_f_coeffs(env) + [env.ring.one]
        self._relations = {}
        self._solved = {}

    def out_of_window(self, state):
        return any(not self.spec.contains_bent(e) for _, e in state.dots)

    def relation(self, state):
        """以 state 为首项（系数为单位）的理想关系"""
        cached = self._relations.get(state)
        if cached is not None:
            return cached
        dots = dict(state.dots)
        index = next(i for i, (_, r) in enumerate(state.order) if not self.spec.contains_bent(dots.get(r, 0)))
        l, r = state.order[index]
        e = dots[r]
        shift = -e if e > self.spec.top[-1] else -e - self.spec.a
        others = [tuple(x + 1 if x < l else x for x in strand) for i, strand in enumerate(state.order) if i != index]
        order = [(1, r)] + others
        terms = {}
        for j, coeff in enumerate(self.coeffs):
            add_term(terms, make_state(order, {1: shift + j}), coeff)
        word = [Over(p) for p in range(1, l)]
        word += [Dot(q, k) for q, k in state.dots if q != r]
        result = apply_word(self.calc, terms, word)
        self._relations[state] = result
        return result

    def solve(self, states):
        """把窗口外状态表示为窗口内状态的组合

        对饱和生成的关系做 DomainMatrix 行最简形消元，窗口外状态排在前面作主元。

        Raises:
            ClosureViolation: 关系不足以消去某个窗口外状态
        """
        pending = [s for s in states if s not in self._solved and self.out_of_window(s)]
        if not pending:
            return
        start = time.time()
        relations = []
        seen = set(pending)
        queue = list(pending)
        while queue:
            if len(relations) >= config.WINDOW_MAX_RELATIONS:
                raise ClosureViolation(f"窗口关系数超过上限 {config.WINDOW_MAX_RELATIONS}")
            current = queue.pop()
            row = self.relation(current)
            relations.append(row)
            for other in row:
                if other not in seen and other not in self._solved and self.out_of_window(other):
                    seen.add(other)
                    queue.append(other)

        rows = [self._substitute(dict(row)) for row in relations]
        appeared = list(dict.fromkeys(s for row in rows for s in row))
        unknown = [s for s in appeared if self.out_of_window(s)]
        columns = unknown + [s for s in appeared if not self.out_of_window(s)]
        index = {s: k for k, s in enumerate(columns)}
        rep = {i: {index[s]: c.value for s, c in row.items()} for i, row in enumerate(rows) if row}
        matrix = DomainMatrix(rep, (len(rows), len(columns)), self.env.ring.domain)
        reduced, _ = matrix.rref()
        boundary = len(unknown)
        for row in reduced.to_sparse().rep.values():
            # 行最简形中首个非零列即主元，系数为 1
            j = min(row)
            if j >= boundary or any(k < boundary for k in row if k != j):
                continue
            self._solved[columns[j]] = {columns[k]: Scalar(self.env.ring, -v) for k, v in row.items() if k != j}
        missing = [s for s in pending if s not in self._solved]
        if missing:
            raise ClosureViolation(f"无法消去 {len(missing)} 个窗口外状态，例如 {missing[0]}")
        logger.debug(f"窗口约化: {len(relations)} 条关系，耗时: {time.time() - start:.2f} 秒")

    def _substitute(self, row):
        """代入已解出的窗口外状态"""
        for s in [s for s in row if s in self._solved]:
            coeff = row.pop(s)
            merge_terms(row, self._solved[s], coeff)
        return row

    def reduce(self, terms):
        self.solve(list(terms))
        result = {}
        for state, coeff in terms.items():
            if self.out_of_window(state):
                merge_terms(result, self._solved[state], coeff)
            else:
                add_term(result, state, coeff)
        return result


def reducer_for(env):
    _require_cyclotomic(env)
    if env._window_reducer is None:
        env._window_reducer = WindowReducer(env)
    return env._window_reducer


def reduce_state_terms(terms, env):
    """弯折图像中正规状态组合的窗口约化"""
    return reducer_for(env).reduce(terms)


def window_reduce(f, env):
    """把态射中所有点指数约化到窗口内

    Args:
        f: Morphism
        env: 分圆环境

    Returns:
        Morphism: 与 f 在分圆商中相等、点都在窗口内的态射

    Raises:
        RequiresCyclotomic: 非分圆环境
        ClosureViolation: 约化失败
    """
    _require_cyclotomic(env)
    terms = {}
    for diagram, coeff in f.items():
        add_term(terms, state_from_diagram(bend_diagram(diagram)), coeff)
    reduced = reduce_state_terms(terms, env)
    result = {}
    for state, coeff in reduced.items():
        diagram = unbend_diagram(diagram_from_state(state), f.m)
        result[diagram] = result[diagram] + coeff if diagram in result else coeff
    return Morphism(f.m, f.s, env.ring, result)


# ---------------------------------------------------------------------- 基与秩
def rank(category, m, s, a=1):
    """Hom(m, s) 的秩

    Args:
        category: kauffmann / cyclotomic
        m, s: 元数
        a: 分圆次数

    Returns:
        int: 秩；m+s 为奇数时为 0

    Raises:
        ValueError: affine 范畴的秩无限，或类别未知
    """
    if category == 'affine':
        raise ValueError("仿射 Kauffmann 范畴的 Hom 空间秩无限")
    if category not in ('kauffmann', 'cyclotomic'):
        raise ValueError(f"未知的范畴: {category}")
    if (m + s) % 2:
        return 0
    count = double_factorial(m + s - 1)
    if category == 'cyclotomic':
        count *= a ** ((m + s) // 2)
    return count


def cyclotomic_basis(m, s, env):
    """分圆商中 Hom(m, s) 的窗口基：所有连接子 × 所有窗口内的点"""
    _require_cyclotomic(env)
    spec = WindowSpec(env.a)
    basis = []
    for connector in enumerate_connectors(m, s):
        windows = [spec.window_for(first) for first, _ in connector.pairs]
        for exponents in itertools.product(*windows):
            dots = tuple((k, e) for k, e in enumerate(exponents, start=1) if e)
            basis.append(BasisDiagram(connector, dots))
    logger.info(f"分圆基 a={env.a}, Hom({m},{s}): {len(basis)} 个元素")
    return basis


def structure_constants(r, env):
    """End(ob r) 在窗口基下的乘法表

    Returns:
        tuple: (基列表, {(i, j): {k: Scalar}})，第 i 行第 j 列为 b_i∘b_j

    Raises:
        ClosureViolation: 乘积落在基的张成之外
    """
    start = time.time()
    basis = cyclotomic_basis(r, r, env)
    index = {diagram: k for k, diagram in enumerate(basis)}
    table = {}
    for (i, left), (j, right) in itertools.product(enumerate(basis), repeat=2):
        product = compose(Morphism.basis(left, env.ring), Morphism.basis(right, env.ring), env)
        entry = {}
        for diagram, coeff in product.items():
            if diagram not in index:
                raise ClosureViolation(f"b_{i}∘b_{j} 含有基外的图 {diagram}")
            entry[index[diagram]] = coeff
        table[(i, j)] = entry
    logger.info(f"结构常数 r={r}: {len(basis)}² 个乘积，耗时: {time.time() - start:.2f} 秒")
    return basis, table


def structure_constants_table(r, env, table=None):
    """结构常数的长表：row, col, target, coeff

    Args:
        table: 已算好的乘法表；缺省时重新计算
    """
    if table is None:
        _, table = structure_constants(r, env)
    rows = []
    for (i, j), entry in sorted(table.items()):
        for k, coeff in sorted(entry.items()):
            rows.append({'row': i, 'col': j, 'target': k, 'coeff': str(coeff)})
    return pd.DataFrame(rows, columns=['row', 'col', 'target', 'coeff'])
