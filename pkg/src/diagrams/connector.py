"""连接子（端点的完美匹配）

端点编码：底部第 i 个端点记为 i，顶部第 j 个端点记为 -j。
端点全序为 1 < 2 < … < m < s̄ < … < 1̄，由 endpoint_rank 统一给出。
"""
from dataclasses import dataclass


def endpoint_rank(endpoint, m, s):
    """端点在全序中的位置（从1开始）"""
    if endpoint > 0:
        return endpoint
    return m + s + endpoint + 1


def endpoint_from_rank(rank, m, s):
    if rank <= m:
        return rank
    return rank - m - s - 1


def bent_position(endpoint, m, s):
    """弯折到 Hom(0, m+s) 后端点所在的位置：顶部 j ↦ j，底部 i ↦ s+m+1−i"""
    return m + s + 1 - endpoint_rank(endpoint, m, s)


def endpoint_at_bent(position, m, s):
    return endpoint_from_rank(m + s + 1 - position, m, s)


def endpoint_label(endpoint):
    return str(endpoint) if endpoint > 0 else f"{-endpoint}̄"


@dataclass(frozen=True)
class Connector:
    """(m, s)-连接子

    pairs 中每一对 (i_k, j_k) 满足 i_k < j_k（按端点全序），且按 i_k 升序排列。
    每一对的第一个端点 i_k 就是该线的指定端点：竖直线取底端，cap 取左端，cup 取右端。
    """

    m: int
    s: int
    pairs: tuple

    def __post_init__(self):
        seen = sorted(e for pair in self.pairs for e in pair)
        expected = sorted(list(range(1, self.m + 1)) + [-j for j in range(1, self.s + 1)])
        if seen != expected:
            raise ValueError(f"不是 ({self.m},{self.s}) 端点上的完美匹配: {self.pairs}")
        canonical = canonical_pairs(self.pairs, self.m, self.s)
        if canonical != tuple(self.pairs):
            object.__setattr__(self, 'pairs', canonical)

    @classmethod
    def from_pairs(cls, pairs, m, s):
        return cls(m, s, canonical_pairs(pairs, m, s))

    def __len__(self):
        return len(self.pairs)

    def kind(self, index):
        """第 index 条线（从1开始）的类型：vertical / cap / cup"""
        first, second = self.pairs[index - 1]
        if first > 0 and second > 0:
            return 'cap'
        if first < 0 and second < 0:
            return 'cup'
        return 'vertical'

    def strand_of(self, endpoint):
        for index, pair in enumerate(self.pairs, start=1):
            if endpoint in pair:
                return index
        raise KeyError(endpoint)

    @property
    def caps(self):
        return [p for p in self.pairs if p[0] > 0 and p[1] > 0]

    @property
    def cups(self):
        return [p for p in self.pairs if p[0] < 0 and p[1] < 0]

    @property
    def verticals(self):
        return [p for p in self.pairs if (p[0] > 0) != (p[1] > 0)]

    def to_list(self):
        return [list(p) for p in self.pairs]

    def __str__(self):
        return ''.join(f"({endpoint_label(a)},{endpoint_label(b)})" for a, b in self.pairs)


def canonical_pairs(pairs, m, s):
    ordered = []
    for a, b in pairs:
        if endpoint_rank(a, m, s) > endpoint_rank(b, m, s):
            a, b = b, a
        ordered.append((a, b))
    ordered.sort(key=lambda p: endpoint_rank(p[0], m, s))
    return tuple(ordered)


def _matchings(ranks):
    if not ranks:
        yield ()
        return
    first, rest = ranks[0], ranks[1:]
    for index, partner in enumerate(rest):
        remaining = rest[:index] + rest[index + 1:]
        for tail in _matchings(remaining):
            yield ((first, partner),) + tail


def enumerate_connectors(m, s):
    """枚举所有 (m, s)-连接子

    Args:
        m: 底部端点数
        s: 顶部端点数

    Returns:
        list: 按字典序确定排列的 Connector 列表；m+s 为奇数时为空
    """
    if m < 0 or s < 0:
        raise ValueError(f"元数不能为负: ({m}, {s})")
    if (m + s) % 2:
        return []
    ranks = list(range(1, m + s + 1))
    result = []
    for matching in _matchings(ranks):
        pairs = tuple((endpoint_from_rank(a, m, s), endpoint_from_rank(b, m, s)) for a, b in matching)
        result.append(Connector(m, s, pairs))
    return result


def double_factorial(n):
    """(n)!!，约定 (−1)!! = 1"""
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result
