import os
import sys

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.coefficients.params import GenericAffine
from src.diagrams.basis import (
    BasisDiagram, Morphism, bend, bend_diagram, enumerate_kauffmann_basis, unbend, unbend_diagram,
)
from src.diagrams.canonical import canonical_word
from src.diagrams.connector import Connector, enumerate_connectors
from src.diagrams.presentation import KAUFFMANN_RELATIONS
from src.diagrams.serialization import morphism_from_json, morphism_to_json
from src.diagrams.slice_word import Cap, Cup, Dot, Over, SliceWord, Under, parse_word
from src.utils.exceptions import ArityMismatch, WordParseError


@pytest.mark.parametrize('m, s, count', [(0, 0, 1), (1, 1, 1), (2, 2, 3), (3, 3, 15), (4, 4, 105), (0, 4, 3), (1, 2, 0)])
def test_connector_counts(m, s, count):
    assert len(enumerate_connectors(m, s)) == count


def test_connector_order_for_two_strands():
    pairs = [c.pairs for c in enumerate_connectors(2, 2)]
    assert pairs == [
        ((1, 2), (-2, -1)),
        ((1, -2), (2, -1)),
        ((1, -1), (2, -2)),
    ]


def test_connector_rejects_bad_matching():
    with pytest.raises(ValueError):
        Connector(2, 2, ((1, 2), (-1, -1)))
    with pytest.raises(ValueError):
        Connector(1, 1, ((1, 2),))


def test_connector_pairs_are_canonicalised():
    connector = Connector.from_pairs([(-1, 2), (-2, 1)], 2, 2)
    assert connector.pairs == ((1, -2), (2, -1))
    assert connector.kind(1) == 'vertical'
    assert Connector(2, 0, ((1, 2),)).kind(1) == 'cap'


def test_basis_diagram_drops_zero_dots():
    connector = Connector(1, 1, ((1, -1),))
    assert BasisDiagram(connector, ((1, 0),)) == BasisDiagram(connector)
    with pytest.raises(ValueError):
        BasisDiagram(connector, ((2, 1),))
    with pytest.raises(ValueError):
        BasisDiagram(connector, (), (0,))


def test_bend_is_invertible():
    for connector in enumerate_connectors(2, 2):
        for dots in ((), ((1, 2),), ((1, -1), (2, 3))):
            diagram = BasisDiagram(connector, dots)
            bent = bend_diagram(diagram)
            assert (bent.m, bent.s) == (0, 4)
            assert unbend_diagram(bent, 2) == diagram


def test_bend_flips_bottom_dot_sign():
    diagram = BasisDiagram(Connector(1, 1, ((1, -1),)), ((1, 2),))
    bent = bend_diagram(diagram)
    assert bent.connector.pairs == ((-2, -1),)
    assert bent.dots == ((1, -2),)


def test_unbend_checks_arity():
    ring = GenericAffine().ring
    f = Morphism.identity(1, ring)
    with pytest.raises(ArityMismatch):
        unbend(f, 1)
    with pytest.raises(ArityMismatch):
        unbend(bend(f), 3)
    assert unbend(bend(f), 1) == f


def test_parse_word():
    word = parse_word('U@1 . A@1')
    assert word.slices == (Cup(1), Cap(1))
    assert (word.m, word.s) == (0, 0)
    word = parse_word('T@1 .\n Tinv@1 . X@2^-3 . X@1', 2)
    assert word.slices == (Over(1), Under(1), Dot(2, -3), Dot(1, 1))


def test_parse_word_errors():
    with pytest.raises(WordParseError) as info:
        parse_word('U@1 . B@2')
    assert (info.value.line, info.value.column) == (1, 7)
    with pytest.raises(WordParseError):
        parse_word('T@1^2', 2)
    with pytest.raises(ArityMismatch) as info:
        parse_word('U@1 . A@3')
    assert info.value.slice_index == 1


def test_word_text_round_trip():
    word = SliceWord(2, [Over(1), Dot(2, -1), Cap(1), Cup(1)])
    assert parse_word(word.text(), 2) == word


def test_flip_and_rotate_arity():
    word = SliceWord(1, [Cup(2), Over(1)])
    assert (word.flipped().m, word.flipped().s) == (3, 1)
    assert word.flipped().slices == (Over(1), Cap(2))
    rotated = word.rotated()
    assert (rotated.m, rotated.s) == (3, 1)


def test_canonical_words_for_small_diagrams():
    dotted = BasisDiagram(Connector(1, 1, ((1, -1),)), ((1, 1),))
    assert canonical_word(dotted).slices == (Dot(1, 1),)
    e = BasisDiagram(Connector(2, 2, ((1, 2), (-2, -1))))
    assert canonical_word(e).slices == (Cap(1), Cup(1))
    crossing = BasisDiagram(Connector(2, 2, ((1, -2), (2, -1))))
    assert canonical_word(crossing).slices == (Over(1),)


def test_canonical_word_arity():
    for m, s in ((0, 4), (4, 0), (1, 3), (3, 1), (2, 2)):
        for diagram in enumerate_kauffmann_basis(m, s):
            word = canonical_word(diagram)
            assert (word.m, word.s) == (m, s)


def test_relations_are_well_formed():
    names = [relation.name for relation in KAUFFMANN_RELATIONS]
    assert len(names) == len(set(names))
    for relation in KAUFFMANN_RELATIONS:
        arities = {(word.m, word.s) for _, _, word in relation.lhs + relation.rhs}
        assert len(arities) == 1, relation.name


def test_json_round_trip():
    env = GenericAffine()
    connector = Connector(2, 2, ((1, -2), (2, -1)))
    f = Morphism(2, 2, env.ring, {
        BasisDiagram(connector, ((1, 2),), (1, 3)): env.parse('delta^-1*z'),
        BasisDiagram(Connector(2, 2, ((1, 2), (-2, -1)))): env.omega0,
    })
    assert morphism_from_json(morphism_to_json(f), env) == f


def test_json_rejects_wrong_arity():
    env = GenericAffine()
    text = '{"source": 1, "target": 1, "terms": [{"coeff": "1", "connector": [[1, 2]], "dots": {}}]}'
    with pytest.raises(ArityMismatch):
        morphism_from_json(text, env)
