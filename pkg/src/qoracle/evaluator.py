"""在自然表示的张量幂上把切片词求值为精确矩阵

左侧留 k 个缓冲因子 M = V^{⊗k}，切片作用在第 k+i 个因子上：
A ↦ α，U ↦ β，T ↦ R⁻¹，T⁻¹ ↦ R；第 p 条线上的 X 为 δ 乘以把该线绕过左侧全部因子再绕回的
R⁻¹ 链 T_{k+p−1}⋯T_1T_1⋯T_{k+p−1}，X⁻¹ 用 δ⁻¹ 与 R。
"""
import time
import warnings
from functools import lru_cache

from src.diagrams.basis import Morphism
from src.diagrams.canonical import canonical_word
from src.diagrams.presentation import KAUFFMANN_RELATIONS, coefficient_values
from src.diagrams.slice_word import CAP, CUP, DOT, OVER, Cap, Cup, Dot, Over, SliceWord
from src.qoracle.matrices import (
    OracleMatrix, alpha_action, basis_words, beta_vector, cap_cup, r_action_from_matrix,
    r_inverse_action, r_matrix,
)
from src.utils.exceptions import ArityMismatch, BufferTooSmall
from src.utils.logger import qoracle_logger

logger = qoracle_logger


def _add(vector, key, value):
    total = vector[key] + value if key in vector else value
    if total.is_zero:
        vector.pop(key, None)
    else:
        vector[key] = total


class OracleEvaluator:
    """绑定李型的求值器，缓存 R、R⁻¹、α、β"""

    def __init__(self, t):
        self.t = t
        self.ring = t.ring
        self.r_inv = r_inverse_action(t)
        self.r = r_action_from_matrix(r_matrix(t))
        self.alpha = alpha_action(t)
        self.beta = beta_vector(t)
        self.delta = t.delta

    def _local(self, vector, pos, action):
        out = {}
        for word, coeff in vector.items():
            for pair, c in action.get(word[pos:pos + 2], {}).items():
                _add(out, word[:pos] + pair + word[pos + 2:], coeff * c)
        return out

    def _cap(self, vector, pos):
        out = {}
        for word, coeff in vector.items():
            c = self.alpha.get(word[pos:pos + 2])
            if c is not None:
                _add(out, word[:pos] + word[pos + 2:], coeff * c)
        return out

    def _cup(self, vector, pos):
        out = {}
        for word, coeff in vector.items():
            for pair, c in self.beta.items():
                _add(out, word[:pos] + pair + word[pos:], coeff * c)
        return out

    def _dot(self, vector, factor, exponent):
        """第 factor 个因子（从1开始）上的 X^exponent"""
        action, scalar = (self.r_inv, self.delta) if exponent > 0 else (self.r, self.delta.inverse())
        chain = list(range(factor - 1, 0, -1)) + list(range(1, factor))
        for _ in range(abs(exponent)):
            for p in chain:
                vector = self._local(vector, p - 1, action)
            vector = {w: c * scalar for w, c in vector.items()}
        return vector

    def apply_slice(self, vector, piece, buffer):
        pos = buffer + piece.position - 1
        if piece.kind == CUP:
            return self._cup(vector, pos)
        if piece.kind == CAP:
            return self._cap(vector, pos)
        if piece.kind == DOT:
            return self._dot(vector, pos + 1, piece.exponent)
        return self._local(vector, pos, self.r_inv if piece.kind == OVER else self.r)

    def word_matrix(self, word, buffer):
        N = self.t.N
        cols = basis_words(N, buffer + word.m)
        rows = basis_words(N, buffer + word.s)
        columns = {}
        for col in cols:
            vector = {col: self.ring.one}
            for piece in word.slices:
                vector = self.apply_slice(vector, piece, buffer)
                if not vector:
                    break
            columns[col] = vector
        return OracleMatrix.from_columns(self.ring, rows, cols, columns)


@lru_cache(maxsize=4)
def evaluator_for(t):
    """按李型复用求值器，最多保留最近的 4 个"""
    return OracleEvaluator(t)


def specialize(f, t):
    """把通用参数 δ、z 特化为 δ = ε q^{N−ε}、z = q − q⁻¹

    Returns:
        Morphism: 系数在 t.ring 中的态射
    """
    if f.ring is t.ring:
        return f
    mapping = {'delta': t.delta, 'z': t.z}
    terms = {diagram: coeff.evaluate(mapping, t.ring) for diagram, coeff in f.items()}
    return Morphism(f.m, f.s, t.ring, terms)


def evaluate(w, t, buffer=0):
    """切片词或态射的矩阵 V^{⊗(k+m)} → V^{⊗(k+s)}

    Args:
        w: SliceWord 或 Morphism
        t: LieType
        buffer: 左侧缓冲因子数 k

    Returns:
        OracleMatrix: 精确矩阵

    Raises:
        ArityMismatch: 缓冲数为负
    """
    if buffer < 0:
        raise ArityMismatch(f"缓冲因子数不能为负: {buffer}")
    evaluator = evaluator_for(t)
    if isinstance(w, SliceWord):
        if buffer == 0 and any(piece.kind == DOT for piece in w.slices):
            warnings.warn("缓冲为 0 时 X 只是 δ 倍恒等，点的信息会丢失", BufferTooSmall)
        return evaluator.word_matrix(w, buffer)
    f = specialize(w, t)
    N = t.N
    result = OracleMatrix(t.ring, basis_words(N, buffer + f.s), basis_words(N, buffer + f.m))
    for diagram, coeff in f.items():
        result = result + evaluate(canonical_word(diagram), t, buffer).scale(coeff)
    return result


def _relation_matrix(side, t, buffer, values):
    total = None
    for factor, key, word in side:
        term = evaluate(word, t, buffer).scale(values[key] * factor)
        total = term if total is None else total + term
    return total


def _row(name, buffer, residual):
    return {
        'relation': name,
        'buffer': buffer,
        'ok': residual.is_zero,
        'residual': 'zero' if residual.is_zero else f"{len(residual.entries)} 个非零元",
    }


def verify_category_relations(t, affine_buffer=2):
    """逐条检查生成关系与 R 矩阵恒等式在矩阵层面成立

    Args:
        t: LieType
        affine_buffer: 点的关系使用的缓冲因子数

    Returns:
        list: 每行 {'relation', 'buffer', 'ok', 'residual'}
    """
    start = time.time()
    values = coefficient_values(t.delta, t.z, t.omega0)
    rows = []
    r_inv, r = r_matrix(t, inverse=True), r_matrix(t)
    alpha, beta, e = cap_cup(t)
    pairs = basis_words(t.N, 2)
    identity = OracleMatrix.identity(t.ring, pairs)
    rows.append(_row('R·R⁻¹', 0, r @ r_inv - identity))
    rows.append(_row('R⁻¹−R−z(1−E)', 0, r_inv - r - (identity - e).scale(t.z)))
    rows.append(_row('E²', 0, e @ e - e.scale(t.omega0)))
    rows.append(_row('α∘β', 0, alpha @ beta - OracleMatrix.identity(t.ring, [()]).scale(t.omega0)))
    for relation in KAUFFMANN_RELATIONS:
        buffers = range(1, affine_buffer + 1) if relation.affine else (0,)
        for buffer in buffers:
            residual = _relation_matrix(relation.lhs, t, buffer, values) - \
                _relation_matrix(relation.rhs, t, buffer, values)
            rows.append(_row(relation.name, buffer, residual))
    failed = sum(1 for row in rows if not row['ok'])
    logger.info(f"{t.label()} 矩阵关系: {len(rows)} 条, 失败 {failed} 条, 耗时: {time.time() - start:.2f} 秒")
    return rows


def check_bubble_centrality(t, j, buffer):
    """检查带 j 个点的闭环在缓冲模上的矩阵与 X、缓冲上的 R⁻¹ 交换

    Returns:
        list: 每行 {'relation', 'buffer', 'ok', 'residual'}
    """
    loop = evaluate(SliceWord(0, [Cup(1), Dot(1, j), Cap(1)]), t, buffer)
    rows = []
    x = evaluate(SliceWord(1, [Dot(1, 1)]), t, buffer)
    vid = OracleMatrix.identity(t.ring, basis_words(t.N, 1))
    lifted = loop.kron(vid)
    rows.append(_row(f'Δ_{j}·X', buffer, lifted @ x - x @ lifted))
    for p in range(1, buffer):
        cross = evaluate(SliceWord(buffer, [Over(p)]), t, 0)
        rows.append(_row(f'Δ_{j}·T_{p}', buffer, loop @ cross - cross @ loop))
    return rows
