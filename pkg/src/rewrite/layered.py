"""分层模型中的约化演算

Hom(0, n) 中的一个图由若干条 cup 线组成，每条线记为端点位置 (l, r)，l < r。
线按深度从前到后排成 order，前面的线从上方越过后面的线；两条线相交当且仅当端点交错，
且最多相交一次。点只记录在端点上（作用在最上方的 X），全局泡泡只在通用仿射环境中出现。

正规形：order 按 r 降序排列，点只出现在右端点 r 上。
"""
import random
from typing import NamedTuple

from src.utils.logger import rewrite_logger

logger = rewrite_logger


class LayeredState(NamedTuple):
    order: tuple      # ((l, r), ...) 从前到后
    dots: tuple       # ((位置, 指数), ...) 按位置排序，指数非零
    bubbles: tuple = ()  # 全局泡泡次数，升序

    @property
    def size(self):
        return 2 * len(self.order)


def make_state(order, dots, bubbles=()):
    if isinstance(dots, dict):
        dots = dots.items()
    clean = tuple(sorted((p, e) for p, e in dots if e))
    return LayeredState(tuple(order), clean, tuple(sorted(bubbles)))


def nested_state(m):
    """η_m：m 条嵌套的 cup，第 i 条为 (i, 2m+1−i)"""
    return make_state(tuple((i, 2 * m + 1 - i) for i in range(1, m + 1)), ())


def interleaved(a, b):
    return a[0] < b[0] < a[1] < b[1] or b[0] < a[0] < b[1] < a[1]


def crossing_count(state):
    order = state.order
    return sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if interleaved(order[i], order[j]))


def measure(state):
    """终止度量：(交叉数, 非指定端点上的点数, 逆序数)"""
    dots = dict(state.dots)
    misplaced = sum(abs(dots.get(l, 0)) for l, _ in state.order)
    order = state.order
    inversions = sum(1 for i in range(len(order)) for j in range(i + 1, len(order)) if order[i][1] < order[j][1])
    return (crossing_count(state), misplaced, inversions)


def _shift(x, start, delta):
    return x + delta if x >= start else x


def add_term(acc, state, coeff):
    if coeff.is_zero:
        return
    if state in acc:
        total = acc[state] + coeff
        if total.is_zero:
            del acc[state]
        else:
            acc[state] = total
    else:
        acc[state] = coeff


def merge_terms(acc, terms, coeff):
    for state, c in terms.items():
        add_term(acc, state, c * coeff)


def _strand_index(state, position):
    for index, strand in enumerate(state.order):
        if position in strand:
            return index
    raise KeyError(position)


class LayeredCalculus:
    """绑定参数环境的约化演算

    Args:
        env: 参数环境
        strategy: leftmost（确定）或 random（带种子的随机选择）
        seed: random 策略的种子
        trace: 若为列表，则追加每次规则应用的记录
    """

    def __init__(self, env, strategy='leftmost', seed=0, trace=None):
        if strategy not in ('leftmost', 'random'):
            raise ValueError(f"未知的约化策略: {strategy}")
        self.env = env
        self.ring = env.ring
        self.one = env.ring.one
        self.delta = env.delta
        self.delta_inv = env.delta.inverse()
        self.z = env.z
        self.strategy = strategy
        self._rng = random.Random(seed)
        self.trace = trace
        self._normal_cache = {}
        self._cap_cache = {}
        self._crossing_cache = {}
        self._kink_cache = {}
        self._loop_cache = {}
        self._bubble_cache = {}

    # ------------------------------------------------------------------ 基本重写
    def swap(self, state, j):
        """交换深度相邻的第 j 与 j+1 条线，返回以交换后为主项的展开"""
        order = list(state.order)
        a, b = order[j], order[j + 1]
        swapped = order[:j] + [b, a] + order[j + 2:]
        main = state._replace(order=tuple(swapped))
        if not interleaved(a, b):
            return {main: self.one}
        p1, p2, p3, p4 = sorted(a + b, reverse=True)
        sign = self.z if set(a) == {p1, p3} else -self.z
        nested = state._replace(order=tuple(order[:j] + [(p4, p1), (p3, p2)] + order[j + 2:]))
        side = state._replace(order=tuple(order[:j] + [(p2, p1), (p4, p3)] + order[j + 2:]))
        return {main: self.one, nested: sign, side: -sign}

    def move(self, state, index, target):
        """把第 index 条线逐步移到深度 target

        Returns:
            tuple: (主项状态, 修正项字典)；主项系数为 1
        """
        corrections = {}
        step = 1 if target > index else -1
        current = state
        for j in range(index, target, step):
            k = j if step > 0 else j - 1
            result = self.swap(current, k)
            main = current._replace(order=tuple(
                list(current.order[:k]) + [current.order[k + 1], current.order[k]] + list(current.order[k + 2:])
            ))
            for st, c in result.items():
                if st != main:
                    add_term(corrections, st, c)
            current = main
        return current, corrections

    def transfer_unit(self, state, index, position):
        """把 position 处的一个单位点沿第 index 条线移到另一端

        X_l⁻¹·L(线在最前) = X_r·L(线在最后)，X_l·L(线在最后) = X_r⁻¹·L(线在最前)，
        对 r 端同理。
        """
        dots = dict(state.dots)
        exponent = dots[position]
        last = len(state.order) - 1
        target = 0 if exponent < 0 else last
        main, corrections = self.move(state, index, target)
        strand = main.order[target]
        other = strand[0] if strand[1] == position else strand[1]
        delta = 1 if exponent < 0 else -1
        dots = dict(main.dots)
        dots[position] = dots.get(position, 0) + delta
        dots[other] = dots.get(other, 0) + delta
        order = [s for i, s in enumerate(main.order) if i != target]
        order = order + [strand] if exponent < 0 else [strand] + order
        result = dict(corrections)
        add_term(result, make_state(order, dots, main.bubbles), self.one)
        return result

    # ------------------------------------------------------------------ 正规化
    def _candidates(self, state):
        dots = dict(state.dots)
        misplaced = [('transfer', i, l) for i, (l, _) in enumerate(state.order) if dots.get(l)]
        inversions = [('swap', j, None) for j in range(len(state.order) - 1)
                      if state.order[j][1] < state.order[j + 1][1]]
        return misplaced, inversions

    def _choose(self, state):
        misplaced, inversions = self._candidates(state)
        if self.strategy == 'random':
            pool = misplaced + inversions
            return self._rng.choice(pool) if pool else None
        if misplaced:
            return min(misplaced, key=lambda c: c[2])
        if inversions:
            return inversions[0]
        return None

    def normal(self, state):
        """把状态展开为正规状态的线性组合"""
        cached = self._normal_cache.get(state)
        if cached is not None:
            return cached
        step = self._choose(state)
        if step is None:
            result = {state: self.one}
        else:
            rule, index, position = step
            if rule == 'transfer':
                successors = self.transfer_unit(state, index, position)
            else:
                successors = self.swap(state, index)
            if self.trace is not None:
                after = max(measure(s) for s in successors) if successors else (0, 0, 0)
                self.trace.append({'rule': rule, 'measure_before': list(measure(state)),
                                   'measure_after': list(after)})
            result = {}
            for succ, coeff in successors.items():
                merge_terms(result, self.normal(succ), coeff)
        self._normal_cache[state] = result
        return result

    def normal_terms(self, terms):
        result = {}
        for state, coeff in terms.items():
            merge_terms(result, self.normal(state), coeff)
        return result

    # ------------------------------------------------------------------ 切片作用
    def apply_cup(self, state, i):
        order = [(_shift(l, i, 2), _shift(r, i, 2)) for l, r in state.order]
        dots = [(_shift(p, i, 2), e) for p, e in state.dots]
        return {make_state([(i, i + 1)] + order, dots, state.bubbles): self.one}

    def apply_dot(self, state, p, k):
        dots = dict(state.dots)
        dots[p] = dots.get(p, 0) + k
        return {make_state(state.order, dots, state.bubbles): self.one}

    def _remove_pair(self, state, p, merged=None, slot=None, drop=None):
        """删除位置 p, p+1，大于 p+1 的位置减 2"""
        order = []
        for index, strand in enumerate(state.order):
            if index == drop:
                continue
            if index == slot:
                strand = merged
            if strand is None:
                continue
            order.append(tuple(sorted(_shift(x, p + 2, -2) for x in strand)))
        dots = [(_shift(q, p + 2, -2), e) for q, e in state.dots if q not in (p, p + 1)]
        return make_state(order, dots, state.bubbles)

    def apply_cap(self, state, p):
        key = (state, p)
        cached = self._cap_cache.get(key)
        if cached is not None:
            return cached
        dots = dict(state.dots)
        a_index = _strand_index(state, p)
        b_index = _strand_index(state, p + 1)
        result = {}
        if a_index == b_index:
            j = dots.get(p, 0) - dots.get(p + 1, 0)
            remaining = self._remove_pair(state, p, drop=a_index)
            result = self.local_bubbles(remaining, p, (j,))
        elif dots.get(p) or dots.get(p + 1):
            position = p if dots.get(p) else p + 1
            index = a_index if position == p else b_index
            for succ, coeff in self.transfer_unit(state, index, position).items():
                merge_terms(result, self.apply_cap(succ, p), coeff)
        else:
            target = a_index + 1 if b_index > a_index else a_index - 1
            main, corrections = self.move(state, b_index, target)
            for succ, coeff in corrections.items():
                merge_terms(result, self.apply_cap(succ, p), coeff)
            a_index = _strand_index(main, p)
            b_index = _strand_index(main, p + 1)
            a, b = main.order[a_index], main.order[b_index]
            factor = self.one
            if interleaved(a, b):
                factor = self.delta if a_index < b_index else self.delta_inv
            ends = [x for x in a if x != p] + [x for x in b if x != p + 1]
            merged = (min(ends), max(ends))
            add_term(result, self._remove_pair(main, p, merged=merged, slot=a_index, drop=b_index), factor)
        self._cap_cache[key] = result
        return result

    def apply_crossing(self, state, p, sign):
        """在位置 p, p+1 上叠加 T（sign=1）或 T⁻¹（sign=-1）"""
        key = (state, p, sign)
        cached = self._crossing_cache.get(key)
        if cached is not None:
            return cached
        dots = dict(state.dots)
        a_index = _strand_index(state, p)
        b_index = _strand_index(state, p + 1)
        result = {}
        if a_index == b_index:
            result = self._kink(state, p, sign)
        elif dots.get(p) or dots.get(p + 1):
            position = p if dots.get(p) else p + 1
            index = a_index if position == p else b_index
            for succ, coeff in self.transfer_unit(state, index, position).items():
                merge_terms(result, self.apply_crossing(succ, p, sign), coeff)
        elif (sign > 0) == (a_index < b_index):
            # 越过的线本来就在前面：只需交换端点
            order = list(state.order)
            order[a_index] = tuple(sorted(p + 1 if x == p else x for x in order[a_index]))
            order[b_index] = tuple(sorted(p if x == p + 1 else x for x in order[b_index]))
            result = {state._replace(order=tuple(order)): self.one}
        else:
            # T = T⁻¹ + z(1 − E)，T⁻¹ = T − z(1 − E)
            z = self.z if sign > 0 else -self.z
            merge_terms(result, self.apply_crossing(state, p, -sign), self.one)
            add_term(result, state, z)
            for capped, coeff in self.apply_cap(state, p).items():
                merge_terms(result, self.apply_cup(capped, p), -z * coeff)
        self._crossing_cache[key] = result
        return result

    # ------------------------------------------------------------------ 扭结与泡泡
    def kink_terms(self, sign, b):
        """T^{±1}·y^b·U 的展开：[(c, 局部泡泡, 系数)]，表示 系数·Δ·y^c·U"""
        key = (sign, b)
        cached = self._kink_cache.get(key)
        if cached is not None:
            return cached
        z, d, d_inv = self.z, self.delta, self.delta_inv
        terms = []
        if b == 0:
            terms = [(0, (), d_inv if sign > 0 else d)]
        elif sign > 0 and b < 0:
            k = -b
            terms.append((k, (), d))
            for i in range(1, k):
                terms.append((k - 2 * i, (), -z))
                terms.append((k - i, (i,), z))
        elif sign < 0 and b > 0:
            k = b
            terms.append((-k, (), d_inv))
            for i in range(1, k):
                terms.append((2 * i - k, (), z))
                terms.append((i - k, (-i,), -z))
        elif sign > 0:
            terms = list(self.kink_terms(-1, b)) + [(b, (), z), (0, (-b,), -z)]
        else:
            terms = list(self.kink_terms(1, b)) + [(b, (), -z), (0, (-b,), z)]
        self._kink_cache[key] = terms
        return terms

    def _kink(self, state, p, sign):
        dots = dict(state.dots)
        b = dots.get(p + 1, 0) - dots.get(p, 0)
        result = {}
        for c, bubbles, coeff in self.kink_terms(sign, b):
            new_dots = dict(dots)
            new_dots[p] = 0
            new_dots[p + 1] = c
            base = make_state(state.order, new_dots, state.bubbles)
            merge_terms(result, self.local_bubbles(base, p, bubbles), coeff)
        return result

    def local_bubbles(self, state, region, bubbles):
        """把位于区域 region（端点 region−1 与 region 之间）的局部泡泡移到最左侧"""
        terms = {state: self.one}
        for j in bubbles:
            nxt = {}
            for st, coeff in terms.items():
                merge_terms(nxt, self._resolve_bubble(st, region, j), coeff)
            terms = nxt
        return terms

    def _resolve_bubble(self, state, region, j):
        key = (state, region, j)
        cached = self._bubble_cache.get(key)
        if cached is not None:
            return cached
        if j == 0:
            result = {state: self.env.omega0}
        elif region == 1:
            result = self.global_bubble(state, j)
        else:
            result = {}
            leg = region - 1
            for (b, bubbles), coeff in self.free_loop_terms(j).items():
                dots = dict(state.dots)
                dots[leg] = dots.get(leg, 0) + b
                moved = make_state(state.order, dots, state.bubbles)
                merge_terms(result, self.local_bubbles(moved, leg, bubbles), coeff)
        self._bubble_cache[key] = result
        return result

    def global_bubble(self, state, j):
        value = self.env.bubble_value(j)
        if value is not None:
            return {state: value}
        result = {}
        for monomial, coeff in self.bubble_polynomial(j).items():
            add_term(result, make_state(state.order, state.dots, state.bubbles + monomial), coeff)
        return result

    def bubble_polynomial(self, j):
        """通用环境中 Δ_j 关于正次数泡泡的多项式：{次数多重集: 系数}

        负次数用 Δ_{−k} = δ⁻²Δ_k + δ⁻¹z Σ_{i=1}^{k−1}(Δ_{2i−k} − Δ_iΔ_{i−k}) 消去。
        """
        key = ('poly', j)
        cached = self._loop_cache.get(key)
        if cached is not None:
            return cached
        if j > 0:
            result = {(j,): self.one}
        elif j == 0:
            result = {(): self.env.omega0}
        else:
            k = -j
            result = {}
            for mono, c in self.bubble_polynomial(k).items():
                add_term(result, mono, c * self.delta_inv * self.delta_inv)
            factor = self.delta_inv * self.z
            for i in range(1, k):
                for mono, c in self.bubble_polynomial(2 * i - k).items():
                    add_term(result, mono, c * factor)
                for mono1, c1 in self.bubble_polynomial(i).items():
                    for mono2, c2 in self.bubble_polynomial(i - k).items():
                        add_term(result, tuple(sorted(mono1 + mono2)), -c1 * c2 * factor)
        self._loop_cache[key] = result
        return result

    def free_loop_terms(self, k):
        """一条线右侧带 k 个点的闭环 1⊗Δ_k 的展开

        Returns:
            dict: {(线上点指数 b, 线左侧局部泡泡): 系数}
        """
        key = ('loop', k)
        cached = self._loop_cache.get(key)
        if cached is not None:
            return cached
        if k == 0:
            result = {(0, ()): self.env.omega0}
        elif k > 0:
            result = self._free_loop(k, self.delta, self.z, {})
        else:
            # 镜像：δ ↦ δ⁻¹，z ↦ −z，X ↦ X⁻¹，Δ_i ↦ Δ_{−i}
            raw = self._free_loop(-k, self.delta_inv, -self.z, {})
            result = {}
            for (b, bubbles), coeff in raw.items():
                add_term(result, (-b, tuple(sorted(-x for x in bubbles))), coeff)
        self._loop_cache[key] = result
        return result

    def _free_loop(self, k, d, z, memo):
        if k in memo:
            return memo[k]
        acc = {}

        def put(b, bubbles, coeff):
            add_term(acc, (b, tuple(sorted(bubbles))), coeff)

        # G_k
        put(0, (k,), self.one)
        put(k, (), z * d)
        put(-k, (), -z * d)
        for i in range(1, k):
            put(2 * i - k, (), z * z)
            put(i - k, (i,), -z * z)
        # z Σ X^i C_{k−i}
        for i in range(1, k):
            for (b, bubbles), coeff in self._c_terms(k - i, d, z, memo).items():
                put(b + i, bubbles, z * coeff)
        # −z Σ X^{i−k} D_i
        for i in range(1, k):
            put(-i + i - k, (), -z * d)
            for l in range(1, i):
                put(2 * l - i + i - k, (), z * z)
                put(l - i + i - k, (l,), -z * z)
        memo[k] = acc
        return acc

    def _c_terms(self, j, d, z, memo):
        """C_j = δX^j + zΣ_{i=1}^{j} X^{j−i}F_i − zΣ_{i=1}^{j} X^{j−2i}"""
        acc = {}
        add_term(acc, (j, ()), d)
        for i in range(1, j + 1):
            for (b, bubbles), coeff in self._free_loop(i, d, z, memo).items():
                add_term(acc, (b + j - i, bubbles), z * coeff)
            add_term(acc, (j - 2 * i, ()), -z)
        return acc
