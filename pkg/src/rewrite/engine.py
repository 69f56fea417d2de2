"""约化引擎

把切片词或态射在弯折图像 Hom(0, m+s) 中逐片作用、约化为正规序基元图的线性组合，
再逆弯折回 Hom(m, s)。分圆环境下最后做点窗口约化。
"""
from src.diagrams.basis import BasisDiagram, Morphism, bend_diagram, unbend_diagram
from src.diagrams.canonical import canonical_word
from src.diagrams.connector import Connector
from src.diagrams.slice_word import CAP, CUP, DOT, OVER, Cap, Cup, Dot, SliceWord
from src.coefficients.params import Cyclotomic, GenericAffine
from src.rewrite.layered import LayeredCalculus, merge_terms, make_state, nested_state
from src.utils.config import config
from src.utils.exceptions import ArityMismatch
from src.utils.logger import rewrite_logger

logger = rewrite_logger


def calculus_for(env, strategy=None, seed=None, trace=None):
    """返回绑定 env 的约化演算；默认策略下挂在 env 上复用，随 env 一起释放"""
    strategy = strategy or config.NORMALIZE_STRATEGY
    seed = config.STRATEGY_SEED if seed is None else seed
    if strategy == 'leftmost' and trace is None:
        if env._calculus is None:
            env._calculus = LayeredCalculus(env)
        return env._calculus
    return LayeredCalculus(env, strategy=strategy, seed=seed, trace=trace)


# ---------------------------------------------------------------------- 状态与基元图
def state_from_diagram(diagram):
    """Hom(0, n) 的基元图 ↦ 正规状态"""
    if diagram.m != 0:
        raise ArityMismatch(f"需要 Hom(0, n) 中的基元图，实际源元数 {diagram.m}")
    order = []
    dots = {}
    for index, (first, second) in enumerate(diagram.connector.pairs, start=1):
        r, l = -first, -second
        order.append((l, r))
        exponent = diagram.dot(index)
        if exponent:
            dots[r] = exponent
    order.sort(key=lambda strand: -strand[1])
    return make_state(order, dots, diagram.bubbles)


def diagram_from_state(state):
    """正规状态 ↦ Hom(0, n) 的基元图"""
    connector = Connector.from_pairs([(-r, -l) for l, r in state.order], 0, state.size)
    dots = {}
    for position, exponent in state.dots:
        dots[connector.strand_of(-position)] = exponent
    return BasisDiagram(connector, tuple(dots.items()), state.bubbles)


def apply_slice(calc, state, piece):
    if piece.kind == CUP:
        return calc.apply_cup(state, piece.position)
    if piece.kind == CAP:
        return calc.apply_cap(state, piece.position)
    if piece.kind == DOT:
        return calc.apply_dot(state, piece.position, piece.exponent)
    return calc.apply_crossing(state, piece.position, 1 if piece.kind == OVER else -1)


def apply_word(calc, terms, slices):
    """逐片作用并在每片之后约化

    Args:
        calc: LayeredCalculus
        terms: {LayeredState: Scalar}
        slices: 切片序列（作用顺序）

    Returns:
        dict: 正规状态的线性组合
    """
    for piece in slices:
        nxt = {}
        for state, coeff in terms.items():
            merge_terms(nxt, apply_slice(calc, state, piece), coeff)
        terms = calc.normal_terms(nxt)
    return calc.normal_terms(terms)


def _to_morphism(terms, m, n, env):
    if isinstance(env, Cyclotomic):
        from src.bmw.cyclotomic import reduce_state_terms
        terms = reduce_state_terms(terms, env)
    bent = {}
    for state, coeff in terms.items():
        diagram = unbend_diagram(diagram_from_state(state), m)
        bent[diagram] = bent[diagram] + coeff if diagram in bent else coeff
    return Morphism(m, n - m, env.ring, bent)


# ---------------------------------------------------------------------- 公开操作
def normalize(word, env, strategy=None, seed=None, trace=None):
    """把切片词约化为正规序基元图的线性组合

    Args:
        word: SliceWord
        env: 参数环境
        strategy: leftmost / random，默认取配置
        seed: random 策略的种子
        trace: 若为列表，追加每步规则记录 {rule, measure_before, measure_after}

    Returns:
        Morphism: Hom(word.m, word.s) 中的元素
    """
    calc = calculus_for(env, strategy, seed, trace)
    m = word.m
    terms = apply_word(calc, {nested_state(m): env.ring.one}, word.slices)
    logger.debug(f"约化 {len(word)} 个切片 → {len(terms)} 项")
    return _to_morphism(terms, m, m + word.s, env)


def normalize_morphism(f, env):
    """对每个基元图重新约化（分圆环境下即窗口约化）"""
    result = Morphism.zero(f.m, f.s, env.ring)
    for diagram, coeff in f.items():
        result = result + normalize(canonical_word(diagram), env).scale(coeff)
    return result


def compose(f, g, env):
    """f∘g：先 g 后 f

    Raises:
        ArityMismatch: f 的源元数不等于 g 的目标元数
    """
    if f.m != g.s:
        raise ArityMismatch(f"无法复合 Hom({f.m},{f.s}) ∘ Hom({g.m},{g.s})")
    calc = calculus_for(env)
    terms = {}
    for g_diagram, g_coeff in g.items():
        start = {state_from_diagram(bend_diagram(g_diagram)): env.ring.one}
        for f_diagram, f_coeff in f.items():
            result = apply_word(calc, start, canonical_word(f_diagram).slices)
            merge_terms(terms, result, g_coeff * f_coeff)
    return _to_morphism(terms, g.m, g.m + f.s, env)


def tensor(f, g, env):
    """f⊗g：g 的切片右移 f.m 后先作用，再作用 f 的切片"""
    calc = calculus_for(env)
    m = f.m + g.m
    terms = {}
    start = {nested_state(m): env.ring.one}
    for g_diagram, g_coeff in g.items():
        after_g = apply_word(calc, start, canonical_word(g_diagram).shifted(f.m).slices)
        for f_diagram, f_coeff in f.items():
            result = apply_word(calc, after_g, canonical_word(f_diagram).slices)
            merge_terms(terms, result, g_coeff * f_coeff)
    return _to_morphism(terms, m, m + f.s + g.s, env)


def flip(f, env):
    """竖直翻转（反自同构，参数不变）：Hom(m, s) → Hom(s, m)"""
    result = Morphism.zero(f.s, f.m, env.ring)
    for diagram, coeff in f.items():
        result = result + normalize(canonical_word(diagram).flipped(), env).scale(coeff)
    return result


def mirror(f, env):
    """镜像自同构：T ↔ T⁻¹，X ↦ X⁻¹，δ ↦ δ⁻¹，z ↦ −z

    只在通用仿射环境中定义，其他环境的参数不一定在镜像下封闭。
    """
    if not isinstance(env, GenericAffine):
        raise ValueError("镜像只在通用仿射环境中定义")
    mapping = env.mirror_map()
    result = Morphism.zero(f.m, f.s, env.ring)
    for diagram, coeff in f.items():
        image = normalize(canonical_word(diagram).mirrored(), env)
        result = result + image.scale(coeff.evaluate(mapping, env.ring))
    return result


def bubble_reduce(j, env):
    """Δ_j 的正规形：通用环境下为正次数泡泡的多项式，其余环境为标量

    Returns:
        Morphism: Hom(0, 0) 中的元素
    """
    calc = calculus_for(env)
    terms = calc.global_bubble(make_state((), ()), j)
    return _to_morphism(terms, 0, 0, env)


def free_loop(k, env):
    """一条线右侧带 k 个点的闭环 1⊗Δ_k 的正规形（Hom(1, 1)）"""
    return normalize(SliceWord(1, [Cup(2), Dot(2, k), Cap(2)]), env)
