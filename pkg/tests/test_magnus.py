import random
from itertools import product

import pytest

from oracles import heisenberg_image, naive_magnus, zassenhaus3_quotient
from wordgen import even_word
from triplesym.errors import HypothesisViolated
from triplesym.magnus import (
    D8_S,
    D8_T,
    IDENTITY,
    FreeWord,
    TruncatedSeries,
    UnipotentMatrix,
    d8_translate,
    expand,
    fox_mu2,
    milnor_triple,
    mu2,
    random_depth3_word,
    random_word,
    relator_word,
    rho,
    zassenhaus_depth,
)


def W(text, s=3):
    return FreeWord.parse(text, s)


def as_dict(series: TruncatedSeries) -> dict:
    return {I: 1 for I in series.support()}


# -- words -------------------------------------------------------------------


def test_canonical_form():
    w = FreeWord.of([(1, 2), (1, -2), (2, 1), (2, 1), (1, 0)], 2)
    assert w.letters == ((2, 2),)
    assert (W("x1 x2") * W("x2^-1 x1^-1")).letters == ()
    assert W("x1^3 x2^-1 x1").to_text() == "x1^3 x2^-1 x1"
    assert W("1") == FreeWord.identity(3) and W("") == FreeWord.identity(3)
    with pytest.raises(ValueError):
        W("y1")


def test_commutator_shape():
    x1, x2 = FreeWord.gen(1, 2), FreeWord.gen(2, 2)
    assert x1.commutator(x2).to_text() == "x1 x2 x1^-1 x2^-1"


# -- expansion examples --------------------------------------------------------


def test_expand_examples():
    assert as_dict(expand(W("x1"), 4)) == {(): 1, (1,): 1}
    assert as_dict(expand(W("x1^-1"), 4)) == {(): 1, (1,): 1, (1, 1): 1, (1, 1, 1): 1}
    assert as_dict(expand(W("x1 x2 x1^-1 x2^-1"), 3)) == {(): 1, (1, 2): 1, (2, 1): 1}
    assert as_dict(expand(W("x1^2"), 4)) == {(): 1, (1, 1): 1}
    assert expand(W("x1^4"), 4) == TruncatedSeries.one(3, 4)
    with pytest.raises(ValueError):
        expand(W("x1"), 1)


def test_series_dump():
    lines = expand(W("x1 x2 x1^-1 x2^-1", 2), 3).lines()
    assert lines == ["():1", "12:1", "21:1"]


def test_mu2_examples():
    c = W("x1 x2 x1^-1 x2^-1")
    assert mu2((1, 2), c) == 1
    for I in [(1,), (2,), (1, 2), (3, 2, 1)]:
        assert mu2(I, FreeWord.identity(3)) == 0
    with pytest.raises(ValueError):
        mu2((1, 2, 3), c, D=3)


@pytest.mark.parametrize("D", [3, 4, 5])
def test_expand_matches_naive_oracle(D):
    rng = random.Random(D)
    for _ in range(200):
        w = random_word(rng, 3, rng.randint(0, 8), max_exp=5)
        assert as_dict(expand(w, D)) == naive_magnus(w.letters, D)


def test_large_exponents_use_binomials():
    # (1+X)^(2^16 - 1) = (1+X)^-1 once exponents are stored mod 2^16
    assert expand(W("x1^65535"), 5) == expand(W("x1^-1"), 5)
    assert as_dict(expand(W("x1^6"), 5)) == naive_magnus(((1, 6),), 5)


# -- product rule, inverse, Fox ----------------------------------------------


@pytest.mark.parametrize("D", [4, 5])
def test_product_rule(D):
    rng = random.Random(100 + D)
    for _ in range(1000):
        v, w = random_word(rng, 3, 5), random_word(rng, 3, 5)
        sv, sw, svw = expand(v, D), expand(w, D), expand(v * w, D)
        assert svw == sv * sw
        I = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, D - 1)))
        rhs = sum(sv.coefficient(I[:k]) * sw.coefficient(I[k:]) for k in range(len(I) + 1)) % 2
        assert svw.coefficient(I) == rhs


def test_inverse_expansion():
    rng = random.Random(7)
    one = TruncatedSeries.one(3, 5)
    for _ in range(300):
        w = random_word(rng, 3, 7, max_exp=6)
        assert expand(w, 5) * expand(w.inverse(), 5) == one


def test_fox_route_agrees():
    rng = random.Random(11)
    indices = [I for d in (1, 2, 3) for I in product((1, 2, 3), repeat=d)]
    for _ in range(500):
        w = random_word(rng, 3, 5)
        series = expand(w, 4)
        for I in indices:
            assert fox_mu2(I, w) == series.coefficient(I), (I, w)
    assert mu2((1, 2), W("x1 x2 x1^-1 x2^-1"), validate=True) == 1


# -- Zassenhaus depth ----------------------------------------------------------


def _words(max_len):
    alphabet = [(1, 1), (1, -1), (2, 1), (2, -1)]
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def test_depth_examples():
    assert zassenhaus_depth(W("x1 x2 x1^-1 x2^-1")) == 2
    assert zassenhaus_depth(W("x1^2")) == 2
    assert zassenhaus_depth(FreeWord.identity(3)) == 4
    assert zassenhaus_depth(W("x1^4")) == 4


def test_depth_matches_nilpotent_quotient():
    for letters in _words(6):
        w = FreeWord.of(letters, 2)
        a, b, c = zassenhaus3_quotient(letters)
        expected = 1 if a % 2 or b % 2 else 2 if (a, b, c) != (0, 0, 0) else 3
        assert zassenhaus_depth(w, 3) == expected, letters


# -- rho and D8 ------------------------------------------------------------------


def test_rho_examples():
    assert rho(W("x1")) == UnipotentMatrix(1, 0, 0)
    assert rho(W("x3")) == IDENTITY
    assert rho(W("x1 x2 x1^-1 x2^-1")) == UnipotentMatrix(0, 0, 1)
    with pytest.raises(ValueError):
        rho(FreeWord.gen(1, 1))


def test_rho_matches_matrix_oracle_and_is_homomorphic():
    rng = random.Random(3)
    for _ in range(500):
        v, w = random_word(rng, 3, 6), random_word(rng, 3, 6)
        m = rho(v)
        assert m.rows() == [list(r) for r in heisenberg_image(v.letters)]
        assert rho(v * w) == m * rho(w)
        assert rho(v.inverse()) == m.inverse()


def test_unipotent_group():
    elems = [UnipotentMatrix(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    for x in elems:
        assert x * x.inverse() == IDENTITY
        for y in elems:
            assert x * y in elems
    assert sorted(m.order() for m in elems) == [1, 2, 2, 2, 2, 2, 4, 4]


def test_d8_translation():
    assert d8_translate(D8_S) == "s"
    assert d8_translate(D8_T) == "t"
    assert d8_translate(IDENTITY) == ""
    assert D8_S * D8_S == IDENTITY and D8_T.order() == 4
    assert D8_S * D8_T * D8_S.inverse() == D8_T.inverse()
    assert len({d8_translate(UnipotentMatrix(a, b, c)) for a in (0, 1) for b in (0, 1) for c in (0, 1)}) == 8


# -- relators and Milnor numbers --------------------------------------------------


def test_relator_word_gate():
    with pytest.raises(ValueError):
        relator_word(1, 7, W("x2"))


def test_relator_expansions():
    rng = random.Random(5)
    for _ in range(200):
        y = even_word(rng, 3)
        Np = rng.choice([5, 13, 17, 29, 37, 41, 61])
        i = rng.randint(1, 3)
        r = relator_word(i, Np, y)
        assert zassenhaus_depth(r, 4) >= 3
        assert rho(r) == IDENTITY
        assert zassenhaus_depth(FreeWord.gen(i, 3, Np - 1), 4) == 4
        # degree-3 part of x_i^(N-1)[x_i, y] is X_i Y2 + Y2 X_i, Y2 the degree-2 part of y
        sy, sr = expand(y, 4), expand(r, 4)
        for I in product((1, 2, 3), repeat=3):
            expected = (I[0] == i) * sy.coefficient(I[1:]) ^ (I[2] == i) * sy.coefficient(I[:2])
            assert sr.coefficient(I) == expected, (I, y, i)


def test_milnor_examples():
    assert milnor_triple(W("x1 x2 x1^-1 x2^-1")) == 1
    assert milnor_triple(W("x1^2 x2^2")) == 0
    assert milnor_triple(FreeWord.identity(3)) == 0
    with pytest.raises(HypothesisViolated):
        milnor_triple(W("x1"))


def test_invariance_moves():
    rng = random.Random(2024)
    for _ in range(200):
        y = even_word(rng, 3)
        base = milnor_triple(y)
        # (i) conjugate y
        c = random_word(rng, 3, 5)
        assert milnor_triple(y.conjugate(c)) == base
        # (ii) replace one generator by a conjugate of itself
        j = rng.randint(1, 3)
        img = FreeWord.gen(j, 3).conjugate(random_word(rng, 3, 4))
        assert milnor_triple(y.substitute({j: img})) == base
        # (iii) relator conjugates and squares of depth-2 words
        i = rng.randint(1, 3)
        rel = relator_word(i, rng.choice([5, 13, 17, 29]), even_word(rng, 3, 4))
        sq = (even_word(rng, 3, 4) * random_depth3_word(rng, 3, 1, 2)) ** 2
        moved = y * rel.conjugate(random_word(rng, 3, 4)) * sq.conjugate(random_word(rng, 3, 4))
        assert milnor_triple(moved) == base
