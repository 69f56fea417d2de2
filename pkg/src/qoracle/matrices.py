"""R 矩阵、cap/cup 映射与稀疏精确矩阵

基向量 v_1..v_N 用下标 1..N 表示，张量积的基用下标元组表示。
局部作用以字典给出：输入元组 ↦ {输出元组: 系数}。
"""
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from src.coefficients.scalar import Scalar
from src.utils.logger import qoracle_logger

logger = qoracle_logger


class OracleMatrix:
    """稀疏精确矩阵，行列以基元组为键

    Attributes:
        rows: 行基元组的列表（确定顺序）
        cols: 列基元组的列表
        entries: {(行元组, 列元组): Scalar}，不保存零
    """

    def __init__(self, ring, rows, cols, entries=None):
        self.ring = ring
        self.rows = list(rows)
        self.cols = list(cols)
        self.entries = {}
        for key, value in (entries or {}).items():
            if not value.is_zero:
                self.entries[key] = value

    @classmethod
    def from_columns(cls, ring, rows, cols, columns):
        """由 {列元组: {行元组: 系数}} 构造"""
        entries = {}
        for col, vector in columns.items():
            for row, value in vector.items():
                entries[(row, col)] = value
        return cls(ring, rows, cols, entries)

    @classmethod
    def identity(cls, ring, basis):
        return cls(ring, basis, basis, {(b, b): ring.one for b in basis})

    def columns(self):
        out = {col: {} for col in self.cols}
        for (row, col), value in self.entries.items():
            out[col][row] = value
        return out

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("矩阵维数不一致")

    def __add__(self, other):
        self._same_shape(other)
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries[key] + value if key in entries else value
        return OracleMatrix(self.ring, self.rows, self.cols, entries)

    def __neg__(self):
        return OracleMatrix(self.ring, self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        scalar = self.ring(scalar)
        return OracleMatrix(self.ring, self.rows, self.cols, {k: v * scalar for k, v in self.entries.items()})

    def __matmul__(self, other):
        """矩阵乘积 self·other（先作用 other）"""
        if self.cols != other.rows:
            raise ValueError("矩阵乘积维数不一致")
        by_row = {}
        for (row, mid), value in self.entries.items():
            by_row.setdefault(mid, []).append((row, value))
        entries = {}
        for (mid, col), value in other.entries.items():
            for row, left in by_row.get(mid, ()):
                key = (row, col)
                product = left * value
                entries[key] = entries[key] + product if key in entries else product
        return OracleMatrix(self.ring, self.rows, other.cols, entries)

    def kron(self, other):
        """张量积 self ⊗ other，基元组直接拼接"""
        entries = {}
        for (r1, c1), v1 in self.entries.items():
            for (r2, c2), v2 in other.entries.items():
                entries[(r1 + r2, c1 + c2)] = v1 * v2
        rows = [a + b for a in self.rows for b in other.rows]
        cols = [a + b for a in self.cols for b in other.cols]
        return OracleMatrix(self.ring, rows, cols, entries)

    def to_domain_matrix(self):
        """转成分式域上的 sympy 稀疏 DomainMatrix"""
        row_index = {b: i for i, b in enumerate(self.rows)}
        col_index = {b: j for j, b in enumerate(self.cols)}
        rep = {}
        for (row, col), value in self.entries.items():
            rep.setdefault(row_index[row], {})[col_index[col]] = value.value
        return DomainMatrix(rep, (len(self.rows), len(self.cols)), self.ring.domain)

    @classmethod
    def from_domain_matrix(cls, ring, rows, cols, matrix):
        entries = {}
        for i, vector in matrix.to_sparse().rep.items():
            for j, value in vector.items():
                entries[(rows[i], cols[j])] = Scalar(ring, value)
        return cls(ring, rows, cols, entries)

    def inverse(self):
        """方阵的精确逆

        Raises:
            ValueError: 矩阵奇异或非方阵
        """
        if self.rows != self.cols:
            raise ValueError("只能对方阵求逆")
        try:
            inverse = self.to_domain_matrix().to_dense().inv()
        except DMNonInvertibleMatrixError:
            raise ValueError("矩阵奇异") from None
        return OracleMatrix.from_domain_matrix(self.ring, self.rows, self.cols, inverse)

    @property
    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, OracleMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and (self - other).is_zero

    def __hash__(self):
        return hash((len(self.rows), len(self.cols), len(self.entries)))

    def to_triplets(self):
        """JSON 稀疏三元组 [{row, col, scalar}]，按行列下标排序"""
        row_index = {b: i for i, b in enumerate(self.rows)}
        col_index = {b: i for i, b in enumerate(self.cols)}
        triplets = [
            {'row': row_index[r], 'col': col_index[c], 'scalar': str(v)}
            for (r, c), v in self.entries.items()
        ]
        return sorted(triplets, key=lambda t: (t['row'], t['col']))

    def __repr__(self):
        return f"OracleMatrix({len(self.rows)}x{len(self.cols)}, nnz={len(self.entries)})"


def basis_words(N, k):
    """V^{⊗k} 的基元组，按字典序"""
    words = [()]
    for _ in range(k):
        words = [w + (i,) for w in words for i in range(1, N + 1)]
    return words


def _add(vector, key, value):
    total = vector[key] + value if key in vector else value
    if total.is_zero:
        vector.pop(key, None)
    else:
        vector[key] = total


# ---------------------------------------------------------------------- 局部作用
def r_inverse_action(t):
    """R⁻¹ 在 V⊗V 上的作用：{(k, l): {(a, b): 系数}}"""
    ring = t.ring
    q, z = t.q, t.z
    q_inv = q.inverse()
    N = t.N
    action = {}

    def tail(k):
        # Σ_{i>k} q^{ϱ_i−ϱ_k} ς_i ς_k v_{i'}⊗v_i
        out = {}
        for i in range(k + 1, N + 1):
            _add(out, (t.prime(i), i), t.qpow(t.rho(i) - t.rho(k)) * (t.sign(i) * t.sign(k)))
        return out

    for k in range(1, N + 1):
        for l in range(1, N + 1):
            out = {}
            if t.family == 'B' and k == l == t.n + 1:
                _add(out, (k, l), ring.one)
                for i in range(k + 1, N + 1):
                    _add(out, (t.prime(i), i), -z * t.qpow(t.rho(i)))
            elif k == l:
                _add(out, (k, k), q)
            elif k > l and k != t.prime(l):
                _add(out, (l, k), ring.one)
            elif k > l:
                _add(out, (l, k), q_inv)
                for key, value in tail(k).items():
                    _add(out, key, -z * value)
            elif k != t.prime(l):
                _add(out, (l, k), ring.one)
                _add(out, (k, l), z)
            else:
                _add(out, (l, k), q_inv)
                _add(out, (k, l), z)
                for key, value in tail(k).items():
                    _add(out, key, -z * value)
            action[(k, l)] = out
    return action


def alpha_action(t):
    """α(v_k⊗v_l) = δ_{k,l'} q^{−ϱ_k} ς_k"""
    return {(k, t.prime(k)): t.qpow(-t.rho(k)) * t.sign(k) for k in range(1, t.N + 1)}


def beta_vector(t):
    """β(1) = Σ_i q^{ϱ_{i'}} ς_{i'} v_i⊗v_{i'}"""
    out = {}
    for i in range(1, t.N + 1):
        j = t.prime(i)
        _add(out, (i, j), t.qpow(t.rho(j)) * t.sign(j))
    return out


def _action_matrix(ring, action, rows, cols):
    return OracleMatrix.from_columns(ring, rows, cols, {col: action.get(col, {}) for col in cols})


def r_matrix(t, inverse=False):
    """V⊗V 上的 R 矩阵；inverse=True 时给出按分情形公式写出的 R⁻¹，否则为其精确逆"""
    pairs = basis_words(t.N, 2)
    r_inv = _action_matrix(t.ring, r_inverse_action(t), pairs, pairs)
    if inverse:
        return r_inv
    logger.debug(f"{t.label()}: 求 R⁻¹ 的逆 ({len(pairs)}×{len(pairs)})")
    return r_inv.inverse()


def cap_cup(t):
    """(α, β, E)：α 为 1×N²，β 为 N²×1，E = β∘α"""
    pairs = basis_words(t.N, 2)
    alpha = OracleMatrix(t.ring, [()], pairs, {((), pair): value for pair, value in alpha_action(t).items()})
    beta = OracleMatrix(t.ring, pairs, [()], {(pair, ()): value for pair, value in beta_vector(t).items()})
    return alpha, beta, beta @ alpha


def r_action_from_matrix(matrix):
    """把 V⊗V 上的矩阵转回局部作用字典"""
    return {col: vector for col, vector in matrix.columns().items()}
