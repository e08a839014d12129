import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import analytic_class_number, pell_unit, sympy_value
from triplesym.ok_ring import (
    QuadField,
    class_numbers,
    congruent,
    form_cycles,
    fundamental_unit,
    real_signs,
    sqrt_element,
)

F5 = QuadField(5)
SMALL_PRIMES = [p for p in sympy.primerange(5, 400) if p % 4 == 1]

ints = st.integers(min_value=-10**6, max_value=10**6)
elements = st.builds(F5.element, ints, ints)


@pytest.mark.parametrize("bad", [3, 7, 15, 21, 1, 2, -5])
def test_field_gate(bad):
    with pytest.raises(ValueError):
        QuadField(bad)


def test_basic_arithmetic():
    pi1 = F5.parse("33+8√5")
    assert pi1 == F5.element(25, 16)
    assert pi1.norm() == 769
    pi3 = F5.parse("(23+5√5)/2")
    assert pi3.norm() == 101
    assert real_signs(pi3) == (1, 1)
    assert real_signs(F5.omega) == (1, -1)
    assert str(pi1) == "33 + 8√5" and str(pi3) == "(23 + 5√5)/2"
    assert F5.parse("sqrt(5)") == F5.sqrt_p
    assert F5.parse(pi1.to_text()) == pi1


@pytest.mark.parametrize(
    "p, expected",
    [(5, (1, 1, 2)), (13, (3, 1, 2)), (29, (5, 1, 2))],
)
def test_fundamental_unit_table(p, expected):
    F = QuadField(p)
    u = fundamental_unit(F)
    assert u.fundamental_unit == F.from_sqrt(*expected)
    assert u.unit_norm == -1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_fundamental_unit_matches_pell(p):
    F = QuadField(p)
    t, u, sign = pell_unit(p)
    unit = fundamental_unit(F)
    assert unit.fundamental_unit == F.from_half(t, u)
    assert unit.unit_norm == sign == unit.fundamental_unit.norm()


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_class_number_matches_analytic_formula(p):
    F = QuadField(p)
    cls = class_numbers(F)
    assert cls.h == analytic_class_number(p)
    assert cls.h_plus == len(form_cycles(p))
    # prime discriminant: the unit has norm -1, so the narrow group equals the wide one
    assert cls.h_plus == cls.h


@pytest.mark.parametrize("p, h", [(229, 3), (257, 3), (401, 5), (577, 7), (1009, 7)])
def test_larger_class_numbers(p, h):
    assert analytic_class_number(p) == h
    assert class_numbers(QuadField(p)).h == h


@given(elements, elements)
def test_norm_multiplicative_and_conj(x, y):
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x * x.conj() == F5.element(x.norm())
    assert (x + x.conj()) == F5.element(x.trace())


@given(elements, elements, elements)
@settings(max_examples=200)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == F5.zero


@given(elements)
def test_real_signs_match_floats(x):
    if not x:
        return
    val = sympy_value(x.a, x.b, 5)
    conj = sympy_value(x.conj().a, x.conj().b, 5)
    assert real_signs(x) == (int(sympy.sign(val)), int(sympy.sign(conj)))


@given(elements)
def test_sqrt_element_of_squares(x):
    if not x:
        return
    r = sqrt_element(x * x)
    assert r is not None and r * r == x * x


def test_sqrt_element_examples():
    assert sqrt_element(F5.from_sqrt(81, 36)) == F5.from_sqrt(6, 3)
    assert sqrt_element(F5.element(4)) == F5.element(2)
    assert sqrt_element(F5.from_sqrt(1, 1)) is None


def test_congruences():
    x = F5.from_sqrt(-23, -14)
    assert congruent(x - 2, F5.one, 4)
    assert congruent(F5.from_sqrt(33, 8), F5.one, 4)
    with pytest.raises(ValueError):
        congruent(x, x, 0)


def test_unit_powers_have_unit_norm():
    eps = fundamental_unit(F5).fundamental_unit
    for j in range(-8, 9):
        assert (eps ** j).norm() in (1, -1)
    assert eps ** 3 * eps ** -3 == F5.one


def test_json_round_trip():
    x = F5.from_sqrt(-23, -14)
    assert type(x).from_json(x.to_json()) == x
