import gc
import os
import sys
import weakref

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.bmw.cyclotomic import (
    WindowSpec, cyclotomic_basis, rank, reducer_for, structure_constants, structure_constants_table, window_reduce,
)
from src.bmw.generators import BmwElement, generator, generator_word
from src.bmw.relations import all_ok, verify_bmw_relations
from src.coefficients.params import AdmissibleOmega, Cyclotomic, GenericAffine, omega
from src.diagrams.basis import BasisDiagram, Morphism
from src.diagrams.connector import enumerate_connectors
from src.diagrams.slice_word import Dot, Over, SliceWord
from src.rewrite.engine import compose, flip, normalize
from src.utils.exceptions import IndexOutOfRange, RequiresCyclotomic


@pytest.fixture(scope='module')
def env():
    return GenericAffine()


def test_generator_words():
    assert generator_word('x', 2, 2).slices == (Over(1), Dot(1, 1), Over(1))
    assert generator_word('x', 1, 3).slices == (Dot(1, 1),)
    with pytest.raises(IndexOutOfRange):
        generator_word('e', 3, 3)
    with pytest.raises(IndexOutOfRange):
        generator_word('x', 0, 2)
    with pytest.raises(IndexOutOfRange):
        generator_word('h', 1, 2)


def test_element_arithmetic(env):
    g = generator('g', 1, 2, env)
    g_inv = generator('g_inv', 1, 2, env)
    one = BmwElement.identity(2, env)
    assert g * g_inv == one
    assert (g - g_inv) == (one - generator('e', 1, 2, env)).scale(env.z)
    assert g ** 0 == one
    assert (2 * g - g - g).is_zero


def test_jucys_murphy_elements_commute(env):
    x1 = generator('x', 1, 2, env)
    x2 = generator('x', 2, 2, env)
    assert x1 * x2 == x2 * x1


def test_bmw_relations_two_strands(env):
    rows = verify_bmw_relations(2, env, s_max=3)
    assert rows
    assert all_ok(rows), [row for row in rows if not row['ok']]


@pytest.mark.slow
def test_bmw_relations_three_strands(env):
    rows = verify_bmw_relations(3, env, s_max=2)
    assert any(row['relation'] == '(4) braid' for row in rows)
    assert all_ok(rows), [row for row in rows if not row['ok']]


def test_windows():
    assert list(WindowSpec(1).top) == [0]
    assert list(WindowSpec(2).bottom) == [-1, 0]
    assert list(WindowSpec(2).top) == [0, 1]
    assert list(WindowSpec(3).bottom) == [-1, 0, 1]
    assert list(WindowSpec(4).top) == [-1, 0, 1, 2]


@pytest.mark.parametrize('category, m, s, a, expected', [
    ('kauffmann', 0, 0, 1, 1),
    ('kauffmann', 2, 2, 1, 3),
    ('kauffmann', 3, 3, 1, 15),
    ('kauffmann', 4, 4, 1, 105),
    ('kauffmann', 1, 2, 1, 0),
    ('cyclotomic', 1, 1, 1, 1),
    ('cyclotomic', 2, 2, 1, 3),
    ('cyclotomic', 1, 1, 2, 2),
    ('cyclotomic', 2, 2, 2, 12),
    ('cyclotomic', 1, 1, 3, 3),
])
def test_rank(category, m, s, a, expected):
    assert rank(category, m, s, a) == expected


def test_rank_rejects_affine():
    with pytest.raises(ValueError):
        rank('affine', 1, 1)


def test_cyclotomic_basis_matches_rank():
    for a in (1, 2, 3):
        env = Cyclotomic(a)
        for m, s in ((1, 1), (2, 2), (0, 2)):
            assert len(cyclotomic_basis(m, s, env)) == rank('cyclotomic', m, s, a)


def test_degree_one_dot_is_scalar():
    env = Cyclotomic(1)
    u = env.u[0]
    identity = Morphism.identity(1, env.ring)
    assert normalize(SliceWord(1, [Dot(1, 1)]), env) == identity.scale(u)
    assert normalize(SliceWord(1, [Dot(1, 2)]), env) == identity.scale(u * u)
    assert normalize(SliceWord(1, [Dot(1, -1)]), env) == identity.scale(u.inverse())


def test_degree_two_dot_satisfies_polynomial():
    env = Cyclotomic(2)
    u1, u2 = env.u
    x = normalize(SliceWord(1, [Dot(1, 1)]), env)
    x_squared = normalize(SliceWord(1, [Dot(1, 2)]), env)
    identity = normalize(SliceWord(1, []), env)
    assert x_squared == x.scale(u1 + u2) - identity.scale(u1 * u2)


def test_window_reduce_requires_cyclotomic(env):
    with pytest.raises(RequiresCyclotomic):
        window_reduce(Morphism.identity(1, env.ring), env)


def test_window_reduce_keeps_window_elements():
    env = Cyclotomic(2)
    for diagram in cyclotomic_basis(2, 2, env):
        f = Morphism.basis(diagram, env.ring)
        assert window_reduce(f, env) == f


def test_structure_constants_one_strand():
    env = Cyclotomic(2)
    u1, u2 = env.u
    basis, table = structure_constants(1, env)
    assert len(basis) == 2
    identity = next(i for i, d in enumerate(basis) if not d.dots)
    inverse = 1 - identity
    for j in range(2):
        assert table[(identity, j)] == {j: env.ring.one}
    # x⁻² = ((u1+u2)x⁻¹ − 1)/(u1u2)
    square = table[(inverse, inverse)]
    assert square[inverse] == (u1 + u2) / (u1 * u2)
    assert square[identity] == -(u1 * u2).inverse()


def test_structure_constants_table_columns():
    env = Cyclotomic(1)
    frame = structure_constants_table(2, env)
    assert list(frame.columns) == ['row', 'col', 'target', 'coeff']
    assert set(frame['row']) == {0, 1, 2}


@pytest.mark.slow
def test_cyclotomic_bmw_relations():
    env = Cyclotomic(2)
    rows = verify_bmw_relations(2, env, s_max=3)
    assert all_ok(rows), [row for row in rows if not row['ok']]


def test_cyclotomic_composition_is_associative():
    env = Cyclotomic(2)
    basis = cyclotomic_basis(2, 2, env)
    f, g, h = (Morphism.basis(basis[k], env.ring) for k in (1, 4, 9))
    assert compose(compose(f, g, env), h, env) == compose(f, compose(g, h, env), env)


@pytest.mark.slow
def test_bmw_relations_with_symbolic_omega():
    env = AdmissibleOmega(max_index=6)
    rows = verify_bmw_relations(3, env, s_max=5)
    assert all_ok(rows), [row for row in rows if not row['ok']]


@pytest.mark.slow
@pytest.mark.parametrize('a, r', [(1, 2), (2, 2), (3, 1)])
def test_products_stay_in_window_span(a, r):
    env = Cyclotomic(a)
    basis, table = structure_constants(r, env)
    assert len(table) == len(basis) ** 2


@pytest.fixture(scope='module')
def cyc3():
    return Cyclotomic(3)


@pytest.mark.parametrize('s', range(-3, 7))
def test_contracted_dots_give_omega(cyc3, s):
    e = generator('e', 1, 2, cyc3)
    power = generator('x', 1, 2, cyc3) ** s if s >= 0 else generator('x_inv', 1, 2, cyc3) ** -s
    assert e * power * e == e.scale(omega(cyc3, s))


def test_e_squared_row_of_structure_constants():
    env = Cyclotomic(1)
    basis, table = structure_constants(2, env)
    assert len(basis) == 3
    e = next(k for k, d in enumerate(basis) if (1, 2) in d.connector.pairs)
    identity = next(k for k, d in enumerate(basis) if (1, -1) in d.connector.pairs)
    assert table[(e, e)] == {e: env.omega0}
    assert table[(identity, e)] == {e: env.ring.one}


def assert_reduction_is_stable(f, env):
    reduced = window_reduce(f, env)
    window = set(cyclotomic_basis(f.m, f.s, env))
    assert all(d in window for d, _ in reduced.items())
    assert window_reduce(reduced, env) == reduced
    assert window_reduce(flip(f, env), env) == flip(reduced, env)


@pytest.mark.parametrize('exponent', [2, 4, -2, -3])
def test_window_reduce_on_one_strand(cyc3, exponent):
    connector = enumerate_connectors(1, 1)[0]
    f = Morphism.basis(BasisDiagram(connector, ((1, exponent),)), cyc3.ring)
    assert_reduction_is_stable(f, cyc3)


@pytest.mark.slow
@pytest.mark.parametrize('index, dots', [(0, ((1, 2),)), (2, ((2, -2),)), (1, ((1, 3), (2, 1)))])
def test_window_reduce_on_two_strands(cyc3, index, dots):
    connector = enumerate_connectors(2, 2)[index]
    f = Morphism.basis(BasisDiagram(connector, dots), cyc3.ring)
    assert_reduction_is_stable(f, cyc3)


def test_reducer_lives_and_dies_with_env():
    env = Cyclotomic(2)
    reducer = reducer_for(env)
    assert reducer_for(env) is reducer
    assert reducer_for(Cyclotomic(2)) is not reducer
    normalize(SliceWord(1, [Dot(1, 3)]), env)
    ref = weakref.ref(env)
    del env, reducer
    gc.collect()
    assert ref() is None
