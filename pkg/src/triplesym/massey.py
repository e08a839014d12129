"""Mod-2 Massey products on a free group, built from Magnus-coefficient cochains.

A 1-cochain is an F_2-combination of the functionals mu_I(w) = mu2(I; w).
Its coboundary is a sum of cup products mu_J (x) mu_K, stored as pairs (J, K).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import HypothesisViolated, InvalidPerturbation, NotACoboundary
from .magnus import FreeWord, TruncatedSeries, expand

Index = tuple[int, ...]


def _xor_set(items: Iterable) -> frozenset:
    out: set = set()
    for it in items:
        out ^= {it}
    return frozenset(out)


@dataclass(frozen=True)
class CochainFunctional:
    terms: frozenset  # of multi-indices

    @classmethod
    def of(cls, *indices: Sequence[int]) -> CochainFunctional:
        return cls(_xor_set(tuple(I) for I in indices))

    @classmethod
    def dual(cls, i: int) -> CochainFunctional:
        """Kronecker dual of x_i."""
        return cls.of((i,))

    def __add__(self, other: CochainFunctional) -> CochainFunctional:
        return CochainFunctional(self.terms ^ other.terms)

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(I) for I in self.terms), default=0)

    def evaluate(self, w: FreeWord | TruncatedSeries, D: int | None = None) -> int:
        series = w if isinstance(w, TruncatedSeries) else expand(w, D or max(self.degree() + 1, 2))
        return sum(series.coefficient(I) for I in self.terms) % 2

    def coboundary(self) -> TwoCochainValue:
        return coboundary(self)

    def sorted_terms(self) -> list[Index]:
        return sorted(self.terms, key=lambda I: (-len(I), I))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return "+".join("mu[" + ",".join(map(str, I)) + "]" for I in self.sorted_terms())

    __str__ = to_text

    @classmethod
    def parse(cls, text: str) -> CochainFunctional:
        text = text.replace(" ", "")
        if text == "0":
            return cls(frozenset())
        terms = []
        for part in text.split("+"):
            m = re.fullmatch(r"mu\[(\d+(?:,\d+)*)\]", part)
            if not m:
                raise ValueError(f"bad cochain term {part!r}")
            terms.append(tuple(int(t) for t in m.group(1).split(",")))
        return cls.of(*terms)


@dataclass(frozen=True)
class TwoCochainValue:
    """Sum of products mu_J(v) mu_K(w) over the stored pairs (J, K)."""

    pairs: frozenset

    def __add__(self, other: TwoCochainValue) -> TwoCochainValue:
        return TwoCochainValue(self.pairs ^ other.pairs)

    def __bool__(self):
        return bool(self.pairs)

    def evaluate(self, v: FreeWord, w: FreeWord, D: int = 4) -> int:
        sv, sw = expand(v, D), expand(w, D)
        return sum(sv.coefficient(J) * sw.coefficient(K) for J, K in self.pairs) % 2

    def __str__(self):
        if not self.pairs:
            return "0"
        fmt = lambda I: "mu[" + ",".join(map(str, I)) + "]"
        return "+".join(f"{fmt(J)}*{fmt(K)}" for J, K in sorted(self.pairs))


def cup(f: CochainFunctional, g: CochainFunctional) -> TwoCochainValue:
    return TwoCochainValue(_xor_set((J, K) for J in f.terms for K in g.terms))


def coboundary(f: CochainFunctional) -> TwoCochainValue:
    """(df)(v, w) = f(v) + f(w) + f(vw): the nontrivial splits of each term."""
    return TwoCochainValue(_xor_set((I[:k], I[k:]) for I in f.terms for k in range(1, len(I))))


def _dual_index(chi: CochainFunctional) -> int:
    if len(chi.terms) != 1:
        raise ValueError(f"{chi} is not a Kronecker dual")
    (I,) = chi.terms
    if len(I) != 1:
        raise ValueError(f"{chi} is not a Kronecker dual")
    return I[0]


def defining_system(
    chi1: CochainFunctional,
    chi2: CochainFunctional,
    chi3: CochainFunctional,
    lambda1: CochainFunctional | None = None,
    lambda2: CochainFunctional | None = None,
) -> tuple[CochainFunctional, CochainFunctional]:
    """(omega13, omega24) with d(omega13) = chi1 chi2 and d(omega24) = chi2 chi3.

    The canonical choice mu_(i j) is perturbed by the lambdas, which must be
    1-cocycles (homomorphisms to F_2).
    """
    i, j, k = (_dual_index(c) for c in (chi1, chi2, chi3))
    zero = CochainFunctional(frozenset())
    out = []
    for (a, b), lam, target in (((i, j), lambda1, cup(chi1, chi2)), ((j, k), lambda2, cup(chi2, chi3))):
        lam = lam or zero
        if coboundary(lam):
            raise InvalidPerturbation(f"{lam} is not a cocycle")
        omega = CochainFunctional.of((a, b)) + lam
        assert coboundary(omega) == target
        out.append(omega)
    return out[0], out[1]


@lru_cache(maxsize=4096)
def solve_primitive(z: TwoCochainValue, s: int, D: int = 4) -> CochainFunctional:
    """Minimal-support b with d(b) = z among functionals of degree < D.

    Gaussian elimination over F_2 on the coboundaries of the mu_I.  Degree-1
    functionals are cocycles, so they never enter and the answer has none.
    """
    pair_index: dict = {}

    def mask(c: TwoCochainValue) -> int:
        bits = 0
        for p in c.pairs:
            bits |= 1 << pair_index.setdefault(p, len(pair_index))
        return bits

    basis: dict[int, tuple[int, frozenset]] = {}  # leading bit -> (vector, combination)
    for d in range(2, D):
        for I in product(range(1, s + 1), repeat=d):
            v, combo = mask(coboundary(CochainFunctional.of(I))), frozenset({I})
            while v:
                top = v.bit_length() - 1
                if top not in basis:
                    basis[top] = (v, combo)
                    break
                bv, bc = basis[top]
                v, combo = v ^ bv, combo ^ bc
    v, combo = mask(z), frozenset()
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            raise NotACoboundary(f"{z} is not a coboundary")
        bv, bc = basis[top]
        v, combo = v ^ bv, combo ^ bc
    return CochainFunctional(combo)


def _check_vanishing(f: FreeWord | TruncatedSeries, depth: int, D: int) -> TruncatedSeries:
    series = f if isinstance(f, TruncatedSeries) else expand(f, D)
    for d in range(1, depth + 1):
        if series.grades[d].any():
            raise HypothesisViolated(f"mu2 of length {d} does not vanish on {f}")
    return series


def massey_pairing2(chi1: CochainFunctional, chi2: CochainFunctional, f: FreeWord | TruncatedSeries, D: int = 4) -> int:
    """<chi1 cup chi2, f> for f with vanishing degree-1 coefficients."""
    series = _check_vanishing(f, 1, D)
    b = solve_primitive(cup(chi1, chi2), series.s, D)
    return b.evaluate(series)


def triple_massey_pairing(
    chi1: CochainFunctional,
    chi2: CochainFunctional,
    chi3: CochainFunctional,
    f: FreeWord | TruncatedSeries,
    lambda1: CochainFunctional | None = None,
    lambda2: CochainFunctional | None = None,
    D: int = 4,
) -> int:
    """<chi1, chi2, chi3>_omega evaluated on f in the third Zassenhaus term.

    f may be given already expanded to degree D.
    """
    series = _check_vanishing(f, 2, D)
    omega13, omega24 = defining_system(chi1, chi2, chi3, lambda1, lambda2)
    z = cup(chi1, omega24) + cup(omega13, chi3)
    b = solve_primitive(z, series.s, D)
    value = b.evaluate(series)
    direct = series.coefficient(tuple(_dual_index(c) for c in (chi1, chi2, chi3)))
    if value != direct:
        raise AssertionError(f"pairing {value} differs from the Magnus coefficient {direct}")
    return value
