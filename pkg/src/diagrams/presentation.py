"""Kauffmann 范畴与仿射 Kauffmann 范畴的生成关系

每条关系的两侧都是 (整数因子, 参数名, 切片词) 的和，参数名取自
one / delta / delta_inv / z / omega0，由调用方在各自的系数环中解释。
"""
from dataclasses import dataclass

from src.diagrams.slice_word import Cap, Cup, Dot, Over, SliceWord, Under


@dataclass(frozen=True)
class Relation:
    name: str
    lhs: tuple
    rhs: tuple
    affine: bool = False

    @property
    def arity(self):
        word = (self.lhs or self.rhs)[0][2]
        return word.m, word.s


def _w(m, *slices):
    return SliceWord(m, slices)


def _side(*terms):
    return tuple(terms)


KAUFFMANN_RELATIONS = (
    Relation('kink-cancel', _side((1, 'one', _w(1, Cup(2), Under(1), Cap(2), Cup(2), Over(1), Cap(2)))),
             _side((1, 'one', _w(1)))),
    Relation('invertible', _side((1, 'one', _w(2, Over(1), Under(1)))), _side((1, 'one', _w(2)))),
    Relation('invertible-rev', _side((1, 'one', _w(2, Under(1), Over(1)))), _side((1, 'one', _w(2)))),
    Relation('braid', _side((1, 'one', _w(3, Over(1), Over(2), Over(1)))),
             _side((1, 'one', _w(3, Over(2), Over(1), Over(2))))),
    Relation('skein', _side((1, 'one', _w(2, Over(1))), (-1, 'one', _w(2, Under(1)))),
             _side((1, 'z', _w(2)), (-1, 'z', _w(2, Cap(1), Cup(1))))),
    Relation('kink', _side((1, 'one', _w(1, Cup(2), Over(1), Cap(2)))), _side((1, 'delta', _w(1)))),
    Relation('kink-inverse', _side((1, 'one', _w(1, Cup(2), Under(1), Cap(2)))), _side((1, 'delta_inv', _w(1)))),
    Relation('loop', _side((1, 'one', _w(0, Cup(1), Cap(1)))), _side((1, 'omega0', _w(0)))),
    Relation('zigzag-left', _side((1, 'one', _w(1, Cup(1), Cap(2)))), _side((1, 'one', _w(1)))),
    Relation('zigzag-right', _side((1, 'one', _w(1, Cup(2), Cap(1)))), _side((1, 'one', _w(1)))),
    Relation('rotate-over', _side((1, 'one', _w(2, Cup(3), Under(2), Cap(1)))), _side((1, 'one', _w(2, Over(1))))),
    Relation('rotate-under', _side((1, 'one', _w(2, Cup(3), Over(2), Cap(1)))), _side((1, 'one', _w(2, Under(1))))),
    Relation('dot-inverse', _side((1, 'one', _w(1, Dot(1, -1), Dot(1, 1)))), _side((1, 'one', _w(1))), affine=True),
    Relation('dot-crossing', _side((1, 'one', _w(2, Over(1), Dot(1, 1), Over(1)))),
             _side((1, 'one', _w(2, Dot(2, 1)))), affine=True),
    Relation('dot-cap', _side((1, 'one', _w(2, Dot(1, 1), Cap(1)))),
             _side((1, 'one', _w(2, Dot(2, -1), Cap(1)))), affine=True),
    Relation('dot-cup', _side((1, 'one', _w(0, Cup(1), Dot(1, 1)))),
             _side((1, 'one', _w(0, Cup(1), Dot(2, -1)))), affine=True),
)


def coefficient_values(delta, z, omega0):
    """参数名到具体系数的映射"""
    one = delta / delta
    return {'one': one, 'delta': delta, 'delta_inv': one / delta, 'z': z, 'omega0': omega0}
