import gc
import os
import sys
import random
import weakref

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.bmw.relations import all_ok, verify_kauffmann_relations
from src.coefficients.params import AdmissibleOmega, GenericAffine, omega
from src.diagrams.basis import BasisDiagram, Morphism, bend, enumerate_kauffmann_basis
from src.diagrams.canonical import canonical_word
from src.diagrams.connector import Connector, enumerate_connectors
from src.diagrams.slice_word import Cap, Cup, Dot, Over, SliceWord, Under, parse_word
from src.rewrite.engine import (
    bubble_reduce, calculus_for, compose, flip, free_loop, mirror, normalize, normalize_morphism, tensor,
)
from src.rewrite.layered import LayeredCalculus, make_state, measure
from src.utils.exceptions import ArityMismatch


@pytest.fixture(scope='module')
def env():
    return GenericAffine()


def empty(env):
    return Morphism.identity(0, env.ring)


def test_closed_loop_is_omega0(env):
    result = normalize(parse_word('U@1 . A@1'), env)
    assert result == empty(env).scale(env.omega0)


def test_kinks(env):
    identity = Morphism.identity(1, env.ring)
    assert normalize(SliceWord(1, [Cup(2), Over(1), Cap(2)]), env) == identity.scale(env.delta)
    assert normalize(SliceWord(1, [Cup(2), Under(1), Cap(2)]), env) == identity.scale(env.delta.inverse())


def test_skein(env):
    lhs = normalize(SliceWord(2, [Over(1)]), env) - normalize(SliceWord(2, [Under(1)]), env)
    rhs = (normalize(SliceWord(2, []), env) - normalize(SliceWord(2, [Cap(1), Cup(1)]), env)).scale(env.z)
    assert lhs == rhs


@pytest.mark.parametrize('m, s', [(2, 2), (1, 3), (0, 4), (3, 1)])
def test_canonical_words_normalize_to_themselves(env, m, s):
    for diagram in enumerate_kauffmann_basis(m, s):
        assert normalize(canonical_word(diagram), env) == Morphism.basis(diagram, env.ring)


def test_dotted_diagrams_normalize_to_themselves(env):
    connector = Connector(2, 2, ((1, -2), (2, -1)))
    for dots in (((1, 1),), ((1, -2), (2, 1)), ((2, 3),)):
        diagram = BasisDiagram(connector, dots)
        assert normalize(canonical_word(diagram), env) == Morphism.basis(diagram, env.ring)


def test_kauffmann_relations_hold(env):
    rows = verify_kauffmann_relations(env)
    assert all_ok(rows), [row for row in rows if not row['ok']]


def test_kauffmann_relations_hold_with_admissible_omega():
    rows = verify_kauffmann_relations(AdmissibleOmega(max_index=4))
    assert all_ok(rows), [row for row in rows if not row['ok']]


def test_positive_bubbles_stay_formal(env):
    bubble = bubble_reduce(2, env)
    diagram = BasisDiagram(Connector(0, 0, ()), (), (2,))
    assert bubble == Morphism.basis(diagram, env.ring)
    assert bubble_reduce(0, env) == empty(env).scale(env.omega0)


def test_negative_bubble_recursion(env):
    d_inv = env.delta.inverse()
    one_bubble = BasisDiagram(Connector(0, 0, ()), (), (1,))
    assert bubble_reduce(-1, env) == Morphism.basis(one_bubble, env.ring, d_inv * d_inv)


@pytest.mark.parametrize('j', [0, 1, 2])
def test_curl_on_dotted_loop(env, j):
    # 带扭结的闭环：去掉扭结得到 δ⁻¹ 乘以反向的点数
    loop = normalize(SliceWord(0, [Cup(1), Dot(2, j), Over(1), Cap(1)]), env)
    assert loop == bubble_reduce(-j, env).scale(env.delta.inverse())


def test_bubbles_are_numbers_in_admissible_env():
    env = AdmissibleOmega(max_index=4)
    assert bubble_reduce(2, env) == empty(env).scale(omega(env, 2))
    assert bubble_reduce(-3, env) == empty(env).scale(omega(env, -3))


def test_free_loop_without_dots(env):
    assert free_loop(0, env) == Morphism.identity(1, env.ring).scale(env.omega0)


def test_compose_and_identity(env):
    f = normalize(SliceWord(2, [Over(1), Dot(1, 1)]), env)
    identity = Morphism.identity(2, env.ring)
    assert compose(f, identity, env) == f
    assert compose(identity, f, env) == f


def test_compose_matches_concatenation(env):
    first = SliceWord(2, [Over(1), Dot(2, 1)])
    second = SliceWord(2, [Cap(1), Cup(1), Under(1)])
    expected = normalize(first.then(second), env)
    assert compose(normalize(second, env), normalize(first, env), env) == expected


def test_compose_arity_mismatch(env):
    with pytest.raises(ArityMismatch):
        compose(Morphism.identity(1, env.ring), Morphism.identity(2, env.ring), env)


def test_tensor(env):
    one = Morphism.identity(1, env.ring)
    assert tensor(one, one, env) == Morphism.identity(2, env.ring)
    cup = normalize(SliceWord(0, [Cup(1)]), env)
    result = tensor(one, cup, env)
    assert result == normalize(SliceWord(1, [Cup(2)]), env)


def test_flip_swaps_cap_and_cup(env):
    cap = normalize(SliceWord(2, [Cap(1)]), env)
    cup = normalize(SliceWord(0, [Cup(1)]), env)
    assert flip(cap, env) == cup
    over = normalize(SliceWord(2, [Over(1)]), env)
    assert flip(over, env) == over


def test_mirror_exchanges_crossings(env):
    over = normalize(SliceWord(2, [Over(1)]), env)
    under = normalize(SliceWord(2, [Under(1)]), env)
    assert mirror(over, env) == under
    kink = normalize(SliceWord(1, [Cup(2), Over(1), Cap(2)]), env)
    assert mirror(kink, env) == normalize(SliceWord(1, [Cup(2), Under(1), Cap(2)]), env)
    with pytest.raises(ValueError):
        mirror(over, AdmissibleOmega(max_index=2))


def test_normalize_morphism_is_idempotent(env):
    f = normalize(SliceWord(2, [Over(1), Dot(1, 2), Cap(1), Cup(1)]), env)
    assert normalize_morphism(f, env) == f


def test_random_strategy_is_confluent(env):
    word = SliceWord(3, [Over(1), Dot(2, 1), Under(2), Over(1), Dot(1, -1), Cap(2), Cup(1)])
    expected = normalize(word, env)
    for seed in (1, 7, 42):
        assert normalize(word, env, strategy='random', seed=seed) == expected


def test_trace_measure_decreases(env):
    trace = []
    normalize(SliceWord(2, [Over(1), Dot(1, 1), Over(1)]), env, trace=trace)
    assert trace
    for event in trace:
        assert event['rule'] in ('swap', 'transfer')
        assert event['measure_after'] < event['measure_before']


def test_swap_of_crossing_strands(env):
    calc = LayeredCalculus(env)
    state = make_state(((2, 4), (1, 3)), ())
    result = calc.swap(state, 0)
    assert len(result) == 3
    swapped = make_state(((1, 3), (2, 4)), ())
    assert result[swapped] == env.ring.one
    for other in result:
        if other != swapped:
            assert measure(other)[0] < measure(state)[0]


def test_unknown_strategy(env):
    with pytest.raises(ValueError):
        LayeredCalculus(env, strategy='greedy')


def random_word(rng, max_arity=3, length=8):
    """随机生成元数不超过 max_arity 的切片词"""
    m = rng.randint(0, max_arity)
    arity = m
    slices = []
    for _ in range(length):
        choices = []
        if arity + 2 <= max_arity:
            choices.append('cup')
        if arity >= 2:
            choices.extend(['cap', 'over', 'under'])
        if arity >= 1:
            choices.append('dot')
        kind = rng.choice(choices)
        if kind == 'cup':
            slices.append(Cup(rng.randint(1, arity + 1)))
            arity += 2
        elif kind == 'cap':
            slices.append(Cap(rng.randint(1, arity - 1)))
            arity -= 2
        elif kind == 'over':
            slices.append(Over(rng.randint(1, arity - 1)))
        elif kind == 'under':
            slices.append(Under(rng.randint(1, arity - 1)))
        else:
            exponent = rng.choice([-3, -2, -1, 1, 2, 3])
            slices.append(Dot(rng.randint(1, arity), exponent))
    return SliceWord(m, slices)


@pytest.mark.parametrize('seed', range(20))
def test_strategies_agree_on_random_words(env, seed):
    word = random_word(random.Random(seed))
    assert normalize(word, env, strategy='random', seed=seed) == normalize(word, env)


@pytest.mark.slow
def test_strategies_agree_on_many_random_words(env):
    rng = random.Random(500)
    for k in range(500):
        word = random_word(rng)
        assert normalize(word, env, strategy='random', seed=k) == normalize(word, env), word


@pytest.mark.parametrize('j', [1, 2, 3, 4])
def test_negative_dotted_loop_matches_recursion(env, j):
    loop = normalize(SliceWord(0, [Cup(1), Dot(1, -j), Cap(1)]), env)
    assert loop == bubble_reduce(-j, env)
    assert all(all(b > 0 for b in d.bubbles) for d, _ in loop.items())


def nested_cups(m):
    """η: ob 0 → ob 2m，第 i 个端点与第 2m+1−i 个端点相连"""
    return SliceWord(0, [Cup(i) for i in range(1, m + 1)])


@pytest.mark.parametrize('m, s', [(1, 1), (2, 2), (1, 3), (2, 0)])
def test_bend_is_zigzag_composition(env, m, s):
    eta = normalize(nested_cups(m), env)
    identity = Morphism.identity(m, env.ring)
    for diagram in enumerate_kauffmann_basis(m, s):
        f = Morphism.basis(diagram, env.ring)
        assert compose(tensor(f, identity, env), eta, env) == bend(f), diagram


def test_bend_of_dotted_identity_is_zigzag(env):
    eta = normalize(nested_cups(1), env)
    identity = Morphism.identity(1, env.ring)
    for k in (-2, 1, 3):
        f = normalize(SliceWord(1, [Dot(1, k)]), env)
        assert compose(tensor(f, identity, env), eta, env) == bend(f)


@pytest.mark.parametrize('m, s', [(2, 2), (1, 3), (0, 4)])
def test_flip_maps_basis_onto_basis(env, m, s):
    images = set()
    for diagram in enumerate_kauffmann_basis(m, s):
        flipped = Connector.from_pairs([(-a, -b) for a, b in diagram.connector.pairs], s, m)
        image = flip(Morphism.basis(diagram, env.ring), env)
        # 其余各项的交叉更少，连接子不同
        assert image.terms[BasisDiagram(flipped)] == env.ring.one
        assert flip(image, env) == Morphism.basis(diagram, env.ring)
        images.add(flipped)
    assert images == set(enumerate_connectors(s, m))


def test_flip_fixes_dotted_identity(env):
    for k in (-2, 1, 3):
        f = normalize(SliceWord(2, [Dot(1, k), Dot(2, -1)]), env)
        assert flip(f, env) == f
        single = normalize(SliceWord(1, [Dot(1, k)]), env)
        assert flip(single, env) == single


def test_tensor_is_associative(env):
    f = normalize(SliceWord(2, [Over(1), Dot(1, 1)]), env)
    g = normalize(SliceWord(0, [Cup(1)]), env)
    h = normalize(SliceWord(1, [Dot(1, -1)]), env)
    assert tensor(tensor(f, g, env), h, env) == tensor(f, tensor(g, h, env), env)


def test_interchange_law(env):
    f = normalize(SliceWord(2, [Over(1), Dot(2, 1)]), env)
    g = normalize(SliceWord(1, [Cup(2), Under(1)]), env)
    product = tensor(f, g, env)
    assert (product.m, product.s) == (3, 5)
    lift_g = tensor(Morphism.identity(2, env.ring), g, env)
    left = compose(tensor(f, Morphism.identity(3, env.ring), env), lift_g, env)
    right = compose(lift_g, tensor(f, Morphism.identity(1, env.ring), env), env)
    assert left == product
    assert right == product


def test_calculus_lives_and_dies_with_env():
    env = GenericAffine()
    calc = calculus_for(env)
    assert calculus_for(env) is calc
    assert calculus_for(GenericAffine()) is not calc
    normalize(SliceWord(2, [Over(1), Under(1)]), env)
    ref = weakref.ref(env)
    del env, calc
    gc.collect()
    assert ref() is None
