import os
import sys
from fractions import Fraction

import pytest

# 添加src目录到Python路径
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.coefficients.params import (
    AdmissibleOmega, Cyclotomic, GenericAffine, bmw_f_coeffs, build_env, check_admissible, omega,
    omega_from_u,
)
from src.coefficients.scalar import ScalarRing, format_scalar, parse_scalar
from src.utils.exceptions import (
    IncompatibleRing, InconsistentSign, MissingSeed, NonUnit, RequiresCyclotomic, ScalarParseError,
)


@pytest.fixture
def ring():
    return ScalarRing(('delta', 'z'))


def test_ring_is_cached_by_names(ring):
    assert ScalarRing(('delta', 'z')) is ring
    assert ScalarRing(('z', 'delta')) is not ring


def test_printed_scalar_parses_back(ring):
    delta, z = ring.symbol('delta'), ring.symbol('z')
    values = [
        delta.inverse() * z + 2,
        (delta - delta.inverse()) / z,
        -delta ** 3 + 5 * z ** -2,
        ring(Fraction(3, 4)) * delta,
    ]
    for value in values:
        assert ring.parse(str(value)) == value


def test_laurent_printing(ring):
    delta = ring.symbol('delta')
    assert str(delta ** -2) == 'delta^-2'
    assert str(ring.zero) == '0'
    assert str(-delta + 1) == '-delta + 1'


def test_non_unit_and_ring_mixing(ring):
    with pytest.raises(NonUnit):
        ring.zero.inverse()
    other = ScalarRing(('q',))
    with pytest.raises(IncompatibleRing):
        ring.symbol('z') + other.symbol('q')


def test_parse_errors(ring):
    with pytest.raises(ScalarParseError):
        ring.parse('delta +')
    with pytest.raises(ScalarParseError):
        ring.parse('q')


def test_evaluate_substitutes_generators(ring):
    target = ScalarRing(('q',))
    q = target.symbol('q')
    value = ring.parse('delta^-1*z + 2')
    image = value.evaluate({'delta': -q ** 3, 'z': q - q.inverse()}, target)
    assert image == 2 - (q - q.inverse()) / q ** 3


def test_omega0_identity():
    for env in (GenericAffine(), Cyclotomic(1), Cyclotomic(2)):
        d = env.delta
        assert d - d.inverse() == env.z * (env.omega0 - 1)


def test_negative_omega_from_recursion():
    env = AdmissibleOmega(max_index=4)
    d, z = env.delta, env.z
    w1, w2 = env.seeds[1], env.seeds[2]
    assert omega(env, -1) == d ** -2 * w1
    expected = d ** -2 * w2 + d.inverse() * z * (env.omega0 - d ** -2 * w1 * w1)
    assert omega(env, -2) == expected


def test_missing_seed():
    env = AdmissibleOmega(max_index=2)
    with pytest.raises(MissingSeed):
        omega(env, 3)
    with pytest.raises(MissingSeed):
        omega(GenericAffine(), 1)


def test_cyclotomic_sign_parity():
    with pytest.raises(InconsistentSign):
        Cyclotomic(2, 'plus')
    with pytest.raises(InconsistentSign):
        Cyclotomic(3, 'qinv')
    env = Cyclotomic(1)
    assert env.ring.names == ('z', 'u1')
    assert env.delta == env.ring.symbol('u1')


def test_even_cyclotomic_uses_q():
    env = Cyclotomic(2, 'qminus')
    q = env.ring.symbol('q')
    u1, u2 = env.u
    assert env.z == q - q.inverse()
    assert env.delta == -q * u1 * u2


def test_bmw_f_coefficients():
    env = Cyclotomic(2)
    u1, u2 = env.u
    assert bmw_f_coeffs(env) == [u1 * u2, -(u1 + u2)]
    with pytest.raises(RequiresCyclotomic):
        bmw_f_coeffs(GenericAffine())


def test_cyclotomic_omega_linear_recursion():
    env = Cyclotomic(1)
    u = env.u[0]
    assert omega(env, 1) == u * env.omega0
    assert omega(env, 3) == u ** 3 * env.omega0


@pytest.mark.parametrize('a', [1, 2, 3])
def test_series_agrees_with_recursion(a):
    env = Cyclotomic(a)
    rows = check_admissible(env, max_index=10)
    assert [row['index'] for row in rows] == list(range(-10, 11))
    assert all(row['ok'] for row in rows), [row for row in rows if not row['ok']]


def test_check_admissible_uses_series_values(monkeypatch):
    import src.coefficients.params as params

    env = Cyclotomic(1)
    true_series = omega_from_u

    def broken_series(env, max_index=None):
        values = true_series(env, max_index)
        values[5] = values[5] + 1
        return values

    monkeypatch.setattr(params, 'omega_from_u', broken_series)
    rows = {row['index']: row for row in check_admissible(env, max_index=6)}
    assert not rows[5]['ok']
    # ω_6 本身与级数一致，只有线性递推能发现 ω_5 的错误
    assert rows[6]['series'] == rows[6]['value']
    assert not rows[6]['ok']
    assert rows[4]['ok']


def test_admissible_omega_rows_carry_no_verdict():
    env = AdmissibleOmega(max_index=3)
    rows = check_admissible(env, max_index=3)
    assert len(rows) == 7
    assert all(row['series'] is None and row['residual'] is None for row in rows)
    assert rows[0]['value'] == str(omega(env, -3))


def test_series_requires_cyclotomic():
    with pytest.raises(RequiresCyclotomic):
        omega_from_u(GenericAffine())


def test_build_env_with_concrete_u():
    env = build_env('cyclotomic', a=2, u='1,2')
    q = env.ring.symbol('q')
    assert env.ring.names == ('q',)
    assert env.delta == 2 * q.inverse()
    with pytest.raises(ValueError):
        build_env('cyclotomic')
    with pytest.raises(ValueError):
        build_env('nonsense')
    with pytest.raises(NonUnit):
        build_env('cyclotomic', a=1, u='0')


def test_omega0_alias_in_env():
    env = GenericAffine()
    value = parse_scalar('omega0 * z', env)
    assert value == env.omega0 * env.z
    assert parse_scalar(format_scalar(value), env) == value
    assert 'omega0' not in format_scalar(value)


def test_bubble_value():
    generic = GenericAffine()
    assert generic.bubble_value(0) == generic.omega0
    assert generic.bubble_value(2) is None
    assert generic.bubble_value(-1) is None
    env = AdmissibleOmega(max_index=3)
    assert env.bubble_value(2) == omega(env, 2)
    assert env.bubble_value(-2) == omega(env, -2)
