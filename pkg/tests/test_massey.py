import random
from itertools import product

import pytest

from oracles import naive_magnus
from wordgen import even_word

from triplesym.errors import HypothesisViolated, InvalidPerturbation, NotACoboundary
from triplesym.magnus import FreeWord, expand, random_depth3_word, random_word, relator_word
from triplesym.massey import (
    CochainFunctional,
    TwoCochainValue,
    coboundary,
    cup,
    defining_system,
    massey_pairing2,
    solve_primitive,
    triple_massey_pairing,
)

mu = CochainFunctional.of
CHI = [CochainFunctional.dual(i) for i in (1, 2, 3)]
ZERO = CochainFunctional(frozenset())


def W(text, s=3):
    return FreeWord.parse(text, s)


def test_text_round_trip():
    f = mu((1, 2, 3)) + mu((1,))
    assert f.to_text() == "mu[1,2,3]+mu[1]"
    assert CochainFunctional.parse(f.to_text()) == f
    assert CochainFunctional.parse("0") == ZERO
    with pytest.raises(ValueError):
        CochainFunctional.parse("nu[1]")


def test_coboundary_examples():
    assert coboundary(mu((1, 2))) == cup(CHI[0], CHI[1])
    assert not coboundary(CHI[0])
    assert coboundary(mu((1, 2, 3))) == cup(mu((1,)), mu((2, 3))) + cup(mu((1, 2)), mu((3,)))


def test_coboundary_is_cocycle_formula():
    """(d f)(v, w) = f(v) + f(w) + f(vw) on random words."""
    rng = random.Random(0)
    for _ in range(200):
        I = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
        f = mu(I)
        v, w = random_word(rng, 3, 4), random_word(rng, 3, 4)
        lhs = coboundary(f).evaluate(v, w, 4)
        assert lhs == (f.evaluate(v, 4) + f.evaluate(w, 4) + f.evaluate(v * w, 4)) % 2


def test_d_squared_vanishes():
    """d(d f) = 0: the pairs (J, K) of df satisfy the 2-cocycle identity."""
    rng = random.Random(1)
    basis = [I for d in (1, 2, 3) for I in product((1, 2, 3), repeat=d)]
    for I in basis:
        z = coboundary(mu(I))
        for _ in range(5):
            u, v, w = (random_word(rng, 3, 3) for _ in range(3))
            lhs = z.evaluate(v, w) ^ z.evaluate(u * v, w) ^ z.evaluate(u, v * w) ^ z.evaluate(u, v)
            assert lhs == 0


def test_defining_system():
    o13, o24 = defining_system(*CHI)
    assert (o13, o24) == (mu((1, 2)), mu((2, 3)))
    o13, o24 = defining_system(*CHI, lambda1=CHI[2], lambda2=CHI[0] + CHI[1])
    assert coboundary(o13) == cup(CHI[0], CHI[1])
    assert coboundary(o24) == cup(CHI[1], CHI[2])
    with pytest.raises(InvalidPerturbation):
        defining_system(*CHI, lambda1=mu((1, 3)))
    with pytest.raises(ValueError):
        defining_system(mu((1, 2)), CHI[1], CHI[2])


def test_solve_primitive_examples():
    z = cup(CHI[0], mu((2, 3))) + cup(mu((1, 2)), CHI[2])
    assert solve_primitive(z, 3) == mu((1, 2, 3))
    z2 = cup(CHI[0], mu((2, 3)) + CHI[1]) + cup(mu((1, 2)), CHI[2])
    assert solve_primitive(z2, 3) == mu((1, 2, 3)) + mu((1, 2))
    assert solve_primitive(cup(CHI[0], CHI[1]), 3) == mu((1, 2))
    assert solve_primitive(TwoCochainValue(frozenset()), 3) == ZERO
    with pytest.raises(NotACoboundary):
        # only d(mu[1,2,3]) contains this pair, and it also brings in mu[1,2]*mu[3]
        solve_primitive(cup(CHI[0], mu((2, 3))), 3)


def test_solve_primitive_inverts_coboundary():
    rng = random.Random(2)
    basis = [I for d in (2, 3) for I in product((1, 2, 3), repeat=d)]
    for _ in range(100):
        f = mu(*rng.sample(basis, rng.randint(1, 6)))
        b = solve_primitive(coboundary(f), 3)
        assert coboundary(b) == coboundary(f)


def test_pairing_examples():
    c12 = W("x1 x2 x1^-1 x2^-1")
    assert triple_massey_pairing(*CHI, c12.commutator(W("x3"))) == 1
    assert triple_massey_pairing(*CHI, c12.commutator(W("x2"))) == 0
    assert triple_massey_pairing(*CHI, W("x1^4")) == 0
    with pytest.raises(HypothesisViolated):
        triple_massey_pairing(*CHI, c12)
    with pytest.raises(HypothesisViolated):
        triple_massey_pairing(*CHI, W("x1"))


def test_length_two_pairing_is_magnus():
    rng = random.Random(3)
    for _ in range(300):
        f = even_word(rng, 3)
        series = expand(f, 4)
        for i, j in product((1, 2, 3), repeat=2):
            assert massey_pairing2(CHI[i - 1], CHI[j - 1], f) == series.coefficient((i, j))


def test_relator_pairings():
    """On x_a^(N-1)[x_a, y] the pairing picks up mu(i j) of y when a sits at an end."""
    rng = random.Random(4)
    for _ in range(100):
        y = even_word(rng, 3)
        sy = expand(y, 4)
        for a in (1, 2, 3):
            r = relator_word(a, rng.choice([5, 13, 17]), y)
            value = triple_massey_pairing(*CHI, r)
            expected = ((a == 1) * sy.coefficient((2, 3))) ^ ((a == 3) * sy.coefficient((1, 2)))
            assert value == expected


def test_massey_equals_milnor_on_random_words():
    rng = random.Random(5)
    values = set()
    for _ in range(500):
        f = random_depth3_word(rng, 3)
        value = triple_massey_pairing(*CHI, f)
        assert value == naive_magnus(f.letters, 4).get((1, 2, 3), 0)
        values.add(value)
    assert values == {0, 1}


def test_perturbation_independence():
    lambdas = [sum((CHI[k] for k in range(3) if mask >> k & 1), ZERO) for mask in range(8)]
    rng = random.Random(6)
    words = [random_depth3_word(rng, 3) for _ in range(20)]
    for f in words:
        series = expand(f, 4)
        base = triple_massey_pairing(*CHI, series)
        for l1, l2 in product(lambdas, repeat=2):
            assert triple_massey_pairing(*CHI, series, l1, l2) == base
