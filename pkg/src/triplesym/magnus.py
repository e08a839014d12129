"""Free-group words, truncated mod-2 Magnus expansions, Fox derivatives, and
the representation onto upper unitriangular 3x3 matrices over F_2.

A truncated series of degree D keeps the coefficients of all monomials
X_I with |I| < D.  Degree-d coefficients live in a dense uint8 array of
shape (s,)*d, so products are sums of outer products.
"""
from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass
from functools import reduce as _fold
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import HypothesisViolated

DEFAULT_TRUNCATION = 4
EXP_BITS = 16
EXP_MOD = 1 << EXP_BITS


def _signed_exp(e: int) -> int:
    e %= EXP_MOD
    return e - EXP_MOD if e > EXP_MOD // 2 else e


@dataclass(frozen=True)
class FreeWord:
    """Reduced word in x_1..x_s; letters are (generator, exponent) pairs.

    Exponents are kept modulo 2^16 (signed representative), which leaves
    every Magnus coefficient of degree < 16 unchanged.
    """

    letters: tuple[tuple[int, int], ...]
    s: int

    @classmethod
    def of(cls, letters: Iterable[tuple[int, int]], s: int) -> FreeWord:
        stack: list[list[int]] = []
        for g, e in letters:
            if not 1 <= g <= s:
                raise ValueError(f"generator x{g} outside 1..{s}")
            e = _signed_exp(e)
            if e == 0:
                continue
            if stack and stack[-1][0] == g:
                stack[-1][1] = _signed_exp(stack[-1][1] + e)
                if stack[-1][1] == 0:
                    stack.pop()
            else:
                stack.append([g, e])
        return cls(tuple((g, e) for g, e in stack), s)

    @classmethod
    def identity(cls, s: int) -> FreeWord:
        return cls((), s)

    @classmethod
    def gen(cls, i: int, s: int, e: int = 1) -> FreeWord:
        return cls.of([(i, e)], s)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord.of(self.letters + other.letters, max(self.s, other.s))

    def inverse(self) -> FreeWord:
        return FreeWord.of([(g, -e) for g, e in reversed(self.letters)], self.s)

    def __pow__(self, n: int) -> FreeWord:
        if n < 0:
            return self.inverse() ** (-n)
        return FreeWord.of(self.letters * n, self.s)

    def conjugate(self, by: FreeWord) -> FreeWord:
        """by * self * by^-1"""
        return by * self * by.inverse()

    def commutator(self, other: FreeWord) -> FreeWord:
        """[self, other] = self other self^-1 other^-1"""
        return self * other * self.inverse() * other.inverse()

    def substitute(self, images: Mapping[int, FreeWord]) -> FreeWord:
        out = FreeWord.identity(self.s)
        for g, e in self.letters:
            img = images.get(g, FreeWord.gen(g, self.s))
            out = out * img ** e
        return out

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def to_text(self) -> str:
        return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)

    __str__ = to_text

    @classmethod
    def parse(cls, text: str, s: int) -> FreeWord:
        """Parse 'x1^3 x2^-1 x1'; '1' or '' is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return cls.identity(s)
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"bad letter {tok!r}")
            letters.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls.of(letters, s)


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    return u.commutator(v)


class TruncatedSeries:
    """Element of F_2<<X_1..X_s>> modulo monomials of degree >= D."""

    __slots__ = ("grades", "s", "D")

    def __init__(self, grades: Sequence[np.ndarray], s: int, D: int):
        self.grades = tuple(grades)
        self.s = s
        self.D = D

    @classmethod
    def one(cls, s: int, D: int) -> TruncatedSeries:
        grades = [np.ones((), dtype=np.uint8)] + [np.zeros((s,) * d, dtype=np.uint8) for d in range(1, D)]
        return cls(grades, s, D)

    @classmethod
    def generator_power(cls, i: int, e: int, s: int, D: int) -> TruncatedSeries:
        """(1 + X_i)^e; binom(e mod 2^16, k) is odd iff k's bits lie in e's."""
        e %= EXP_MOD
        out = cls.one(s, D)
        for k in range(1, D):
            if (k & e) == k:
                out.grades[k][(i - 1,) * k] = 1
        return out

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        D = min(self.D, other.D)
        grades = []
        for n in range(D):
            acc = np.zeros((self.s,) * n, dtype=np.uint8)
            for d in range(n + 1):
                a, b = self.grades[d], other.grades[n - d]
                if a.any() and b.any():
                    acc = acc + np.multiply.outer(a, b)
            grades.append(acc & 1)
        return TruncatedSeries(grades, self.s, D)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return TruncatedSeries([a ^ b for a, b in zip(self.grades, other.grades)], self.s, min(self.D, other.D))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.D == other.D and all(np.array_equal(a, b) for a, b in zip(self.grades, other.grades))

    def coefficient(self, I: Sequence[int]) -> int:
        if len(I) >= self.D:
            raise ValueError(f"|I| = {len(I)} exceeds truncation degree {self.D - 1}")
        if not I:
            return int(self.grades[0])
        return int(self.grades[len(I)][tuple(i - 1 for i in I)])

    def support(self) -> list[tuple[int, ...]]:
        out = []
        for d, g in enumerate(self.grades):
            for idx in zip(*np.nonzero(g)) if d else ([()] if g else []):
                out.append(tuple(int(i) + 1 for i in idx))
        return sorted(out, key=lambda I: (len(I), I))

    def lines(self) -> list[str]:
        """Golden-file form: one 'I:bit' line per nonzero coefficient."""
        return [f"{''.join(map(str, I)) or '()'}:1" for I in self.support()]

    def __str__(self):
        terms = ["1" if not I else "X" + "".join(map(str, I)) for I in self.support()]
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"TruncatedSeries({self}, D={self.D})"


def expand(w: FreeWord, D: int = DEFAULT_TRUNCATION, s: int | None = None) -> TruncatedSeries:
    """Mod-2 Magnus expansion of w, exact in degrees < D."""
    if D < 2:
        raise ValueError("truncation degree must be at least 2")
    s = s or w.s
    factors = [TruncatedSeries.generator_power(g, e, s, D) for g, e in w.letters]
    return _fold(TruncatedSeries.__mul__, factors, TruncatedSeries.one(s, D))


def fox_mu2(I: Sequence[int], w: FreeWord) -> int:
    """Magnus coefficient via iterated Fox derivatives and augmentation, mod 2.

    The coefficient of X_{i1}..X_{in} is the augmentation of
    d/dx_{i1}( ... d/dx_{in}(w)).
    """
    elem: dict[tuple, int] = {w.letters: 1}
    for i in reversed(I):
        elem = _fox_derivative(elem, i, w.s)
        if not elem:
            return 0
    return sum(elem.values()) % 2


def _fox_derivative(elem: dict[tuple, int], i: int, s: int) -> dict[tuple, int]:
    out: dict[tuple, int] = defaultdict(int)
    for letters, c in elem.items():
        prefix = FreeWord.identity(s)
        for g, e in letters:
            if g == i:
                if e > 0:
                    powers = range(0, e)
                else:
                    powers = range(-1, e - 1, -1)
                for t in powers:
                    key = (prefix * FreeWord.gen(i, s, t)).letters
                    out[key] = (out[key] + c) % 2
            prefix = prefix * FreeWord.gen(g, s, e)
    return {k: v for k, v in out.items() if v}


def mu2(I: Sequence[int], w: FreeWord, D: int | None = None, validate: bool = False) -> int:
    I = tuple(I)
    D = D or max(len(I) + 1, DEFAULT_TRUNCATION)
    if len(I) > D - 1:
        raise ValueError("multi-index longer than the truncation allows")
    value = expand(w, D).coefficient(I)
    if validate:
        fox = fox_mu2(I, w)
        if fox != value:
            raise AssertionError(f"Fox route gives {fox}, expansion gives {value} for {I} on {w}")
    return value


def zassenhaus_depth(w: FreeWord, D: int = DEFAULT_TRUNCATION) -> int:
    """Least |I| >= 1 with mu2(I; w) = 1.  The value D means 'at least D'."""
    series = expand(w, D)
    for d in range(1, D):
        if series.grades[d].any():
            return d
    return D


@dataclass(frozen=True)
class UnipotentMatrix:
    """[[1, e12, e13], [0, 1, e23], [0, 0, 1]] over F_2."""

    e12: int = 0
    e23: int = 0
    e13: int = 0

    def __mul__(self, other: UnipotentMatrix) -> UnipotentMatrix:
        return UnipotentMatrix(
            self.e12 ^ other.e12,
            self.e23 ^ other.e23,
            self.e13 ^ other.e13 ^ (self.e12 & other.e23),
        )

    def inverse(self) -> UnipotentMatrix:
        return UnipotentMatrix(self.e12, self.e23, self.e13 ^ (self.e12 & self.e23))

    def is_identity(self) -> bool:
        return not (self.e12 or self.e23 or self.e13)

    def order(self) -> int:
        g, n = self, 1
        while not g.is_identity():
            g, n = g * self, n + 1
        return n

    def rows(self) -> list[list[int]]:
        return [[1, self.e12, self.e13], [0, 1, self.e23], [0, 0, 1]]

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, r)) for r in self.rows()) + "]"


IDENTITY = UnipotentMatrix()
D8_S = UnipotentMatrix(0, 1, 0)
D8_T = UnipotentMatrix(1, 1, 0)


def rho(w: FreeWord) -> UnipotentMatrix:
    if w.s < 2:
        raise ValueError("rho needs at least two generators")
    series = expand(w, 3)
    return UnipotentMatrix(series.coefficient((1,)), series.coefficient((2,)), series.coefficient((1, 2)))


def _d8_table() -> dict[UnipotentMatrix, str]:
    table = {}
    for a in (0, 1):
        for b in range(4):
            m = IDENTITY
            for _ in range(a):
                m = m * D8_S
            for _ in range(b):
                m = m * D8_T
            parts = (["s"] if a else []) + ([] if b == 0 else ["t"] if b == 1 else [f"t^{b}"])
            table.setdefault(m, " ".join(parts))
    assert len(table) == 8
    return table


_D8_WORDS = _d8_table()


def d8_translate(m: UnipotentMatrix) -> str:
    """m as s^a t^b in <s, t | s^2 = t^4 = 1, s t s^-1 = t^-1>; '' is the identity."""
    return _D8_WORDS[m]


def relator_word(i: int, Np: int, y: FreeWord) -> FreeWord:
    """x_i^(Np - 1) [x_i, y]."""
    if Np % 4 != 1:
        raise ValueError("relator words need Np = 1 mod 4")
    x = FreeWord.gen(i, y.s)
    return x ** (Np - 1) * x.commutator(y)


def milnor_triple(y3: FreeWord, D: int = DEFAULT_TRUNCATION) -> int:
    """mu2((1 2); y3), the candidate for mu2(123); needs mu2((1)) = mu2((2)) = 0."""
    series = expand(y3, max(D, 3))
    if series.coefficient((1,)) or series.coefficient((2,)):
        raise HypothesisViolated("degree-1 coefficients of y3 must vanish")
    return series.coefficient((1, 2))


def random_word(rng, s: int, length: int, max_exp: int = 3) -> FreeWord:
    """Random word of at most `length` letters with exponents in [-max_exp, max_exp]."""
    letters = [(rng.randint(1, s), rng.choice([e for e in range(-max_exp, max_exp + 1) if e])) for _ in range(length)]
    return FreeWord.of(letters, s)


def random_depth3_word(rng, s: int, pieces: int = 3, length: int = 4) -> FreeWord:
    """Random element of the third Zassenhaus term: a product of conjugates of
    [[u, v], w], [u^2, v], u^4 and [u, v]^2 for random words u, v, w."""
    out = FreeWord.identity(s)
    for _ in range(pieces):
        u, v, w, c = (random_word(rng, s, length) for _ in range(4))
        kind = rng.randrange(4)
        if kind == 0:
            g = u.commutator(v).commutator(w)
        elif kind == 1:
            g = (u ** 2).commutator(v)
        elif kind == 2:
            g = u ** 4
        else:
            g = u.commutator(v) ** 2
        out = out * g.conjugate(c)
    return out
