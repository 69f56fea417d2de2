"""基元图的规范切片词

词的结构：泡泡（最左侧的带点闭环）→ 底部点 → 约化的完全下降缠结 → 顶部点。
完全下降缠结按指定端点的序逐条铺设，先铺的线从上方越过后铺的线。
"""
from src.diagrams.connector import bent_position
from src.diagrams.slice_word import Cap, Cup, Dot, Over, SliceWord, Under


def bent_cup_word(pairs, n):
    """Hom(0, n) 中完全下降的 cup 图的切片列表

    每一步取含端点 n 的线 (a, n)，先递归构造其余的线，
    再在最右侧加一个 cup，用 T⁻¹ 把它的左腿移到位置 a（新线始终在最前）。

    Args:
        pairs: [(l, r), ...] 位置 1..n 上的匹配
        n: 端点数

    Returns:
        list: 切片列表（作用顺序）
    """
    if n == 0:
        return []
    partner = next(l if r == n else r for l, r in pairs if n in (l, r))
    rest = []
    for l, r in pairs:
        if n in (l, r):
            continue
        rest.append(tuple(x if x < partner else x - 1 for x in (l, r)))
    slices = bent_cup_word(rest, n - 2)
    slices.append(Cup(n - 1))
    slices.extend(Under(p) for p in range(n - 2, partner - 1, -1))
    return slices


def _permutation_slices(connector):
    """竖直线构成的置换辫：冒泡排序，左线底部编号较小时用 T，否则用 T⁻¹"""
    target = {first: -second for first, second in connector.pairs}
    current = list(range(1, connector.m + 1))
    slices = []
    changed = True
    while changed:
        changed = False
        for p in range(len(current) - 1):
            left, right = current[p], current[p + 1]
            if target[left] > target[right]:
                slices.append(Over(p + 1) if left < right else Under(p + 1))
                current[p], current[p + 1] = right, left
                changed = True
    return slices


def _horizontal_slices(connector):
    """没有竖直线时：旋转后的 cap 部分接 cup 部分"""
    m, s = connector.m, connector.s
    reflected = [(m + 1 - b, m + 1 - a) for a, b in connector.caps]
    cap_word = SliceWord(0, bent_cup_word(reflected, m)).rotated()
    cups = [(-b, -a) for a, b in connector.cups]
    return list(cap_word.slices) + bent_cup_word(cups, s)


def _bent_slices(connector):
    """一般情形：先在左侧铺出弯折后的图，再用 cap 把右侧 m 个端点接到输入线上"""
    m, s = connector.m, connector.s
    n = m + s
    pairs = []
    for first, second in connector.pairs:
        a, b = bent_position(first, m, s), bent_position(second, m, s)
        pairs.append((min(a, b), max(a, b)))
    slices = bent_cup_word(pairs, n)
    slices.extend(Cap(p) for p in range(n, s, -1))
    return slices


def tangle_slices(connector):
    if not connector.caps and not connector.cups:
        return _permutation_slices(connector)
    if not connector.verticals:
        return _horizontal_slices(connector)
    return _bent_slices(connector)


def canonical_word(diagram):
    """实现基元图的切片词，重新规范化后恰好得到 1·diagram

    Args:
        diagram: BasisDiagram

    Returns:
        SliceWord: Hom(m, s) 中的词
    """
    connector = diagram.connector
    slices = []
    for j in diagram.bubbles:
        slices.extend([Cup(1), Dot(1, j), Cap(1)])
    for index, (first, _) in enumerate(connector.pairs, start=1):
        exponent = diagram.dot(index)
        if exponent and first > 0:
            slices.append(Dot(first, exponent))
    slices.extend(tangle_slices(connector))
    for index, (first, _) in enumerate(connector.pairs, start=1):
        exponent = diagram.dot(index)
        if exponent and first < 0:
            slices.append(Dot(-first, exponent))
    return SliceWord(connector.m, slices)

