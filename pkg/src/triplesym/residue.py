"""Prime ideals of O_k, residue fields, and quadratic / Hilbert symbols."""
from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Optional, Union

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod as _int_sqrt_mod

from .errors import NonResidue, NormalizationUnreachable, NotCoprime
from .ok_ring import QuadField, RingElement, fundamental_unit, real_signs

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"

# associates +-eps^j * pi are searched for |j| <= UNIT_WINDOW
UNIT_WINDOW = 8


@dataclass(frozen=True)
class PrimeIdeal:
    ell: int
    kind: str
    root: Optional[int]
    field: QuadField
    generator: Optional[RingElement] = dc_field(default=None, compare=False, hash=False)

    @property
    def norm(self) -> int:
        return self.ell * self.ell if self.kind == INERT else self.ell

    def contains(self, e: RingElement) -> bool:
        return reduce(e, self).is_zero()

    def with_generator(self, g: RingElement) -> PrimeIdeal:
        return PrimeIdeal(self.ell, self.kind, self.root, self.field, g)

    def sort_key(self):
        return (self.norm, self.root if self.root is not None else -1)

    def to_text(self) -> str:
        root = "-" if self.root is None else str(self.root)
        return f"({self.ell},{self.kind},{root})"

    def to_json(self) -> dict:
        return {
            "ell": str(self.ell),
            "kind": self.kind,
            "root": None if self.root is None else str(self.root),
            "p": self.field.p,
            "generator": None if self.generator is None else self.generator.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> PrimeIdeal:
        F = QuadField(int(data["p"]))
        gen = data.get("generator")
        return cls(
            int(data["ell"]),
            data["kind"],
            None if data["root"] is None else int(data["root"]),
            F,
            None if gen is None else RingElement.from_json(gen),
        )

    __str__ = to_text


def _generator_search_bound(field: QuadField, ell: int) -> int:
    # some generator has iota_1 in [sqrt(l), eps*sqrt(l)), so |y| sqrt p <= (eps+1) sqrt l
    u_eps = fundamental_unit(field).fundamental_unit.half()[0]
    return isqrt((u_eps + 1) ** 2 * ell // field.p) + 2


def _find_split_generator(field: QuadField, ell: int, root: int) -> Optional[RingElement]:
    p = field.p
    for y in range(0, _generator_search_bound(field, ell) + 1):
        for sign in (4, -4):
            x2 = p * y * y + sign * ell
            if x2 < 0:
                continue
            x = isqrt(x2)
            if x * x != x2 or (x - y) % 2:
                continue
            for yy in (y, -y) if y else (0,):
                if (x + yy * root) % ell == 0:
                    return field.from_half(x, yy)
    return None


@lru_cache(maxsize=None)
def splitting_type(field: QuadField, ell: int) -> tuple[str, tuple[PrimeIdeal, ...]]:
    """Decomposition of an odd rational prime, with generators when principal."""
    if ell % 2 == 0:
        raise ValueError("even primes are not supported")
    if not isprime(ell):
        raise ValueError(f"{ell} is not prime")
    p = field.p
    if ell == p:
        return RAMIFIED, (PrimeIdeal(ell, RAMIFIED, 0, field, field.sqrt_p),)
    if pow(p, (ell - 1) // 2, ell) != 1:
        return INERT, (PrimeIdeal(ell, INERT, None, field, field.element(ell)),)
    r = int(_int_sqrt_mod(p % ell, ell))
    ideals = []
    for root in sorted({r, ell - r}):
        ideals.append(PrimeIdeal(ell, SPLIT, root, field, _find_split_generator(field, ell, root)))
    return SPLIT, tuple(ideals)


def prime_ideal_of(pi: RingElement) -> PrimeIdeal:
    """The prime ideal generated by a prime element; pi becomes its generator."""
    field = pi.field
    n = abs(pi.norm())
    if n > 1 and isprime(n):
        if n == 2:
            raise ValueError("dyadic primes are not supported")
        kind, ideals = splitting_type(field, n)
        for P in ideals:
            if P.contains(pi):
                return P.with_generator(pi)
    r = isqrt(n)
    if r * r == n and isprime(r) and r != 2:
        kind, ideals = splitting_type(field, r)
        q = pi.exact_div(r)
        if kind == INERT and q is not None and q.norm() in (1, -1):
            return ideals[0].with_generator(pi)
    raise ValueError(f"{pi} is not an odd prime element of {field}")


def ideals_above(field: QuadField, ell: int) -> tuple[PrimeIdeal, ...]:
    return splitting_type(field, ell)[1]


def parse_ideal(text: str, field: QuadField) -> PrimeIdeal:
    """Accept '(ell,kind,root)' or a generator such as '33+8√5'."""
    m = re.fullmatch(r"\s*\(\s*(\d+)\s*,\s*(\w+)\s*,\s*(-|\d+)\s*\)\s*", text)
    if m:
        ell, kind, root = int(m.group(1)), m.group(2), m.group(3)
        for P in ideals_above(field, ell):
            if P.kind == kind and (root == "-" or P.root == int(root)):
                return P
        raise ValueError(f"no ideal {text} in {field}")
    return prime_ideal_of(field.parse(text))


def normalized_generator(
    ideal: PrimeIdeal,
    require_one_mod4: bool = False,
    require_totally_positive: bool = False,
) -> RingElement:
    """The first associate +-eps^j * pi (|j| small, + before -) with the requested flags."""
    if ideal.generator is None:
        raise NormalizationUnreachable(f"{ideal} has no principal generator")
    field = ideal.field
    eps = fundamental_unit(field).fundamental_unit
    eps_inv = eps.unit_inverse()
    base = ideal.generator
    up, down = base, base
    for j in range(UNIT_WINDOW + 1):
        for cand in ((up,) if j == 0 else (up, down)):
            for signed in (cand, -cand):
                if require_one_mod4 and (signed - 1).exact_div(4) is None:
                    continue
                if require_totally_positive and not signed.is_totally_positive():
                    continue
                return signed
        up, down = up * eps, down * eps_inv
    raise NormalizationUnreachable(
        f"no associate of {base} within |j| <= {UNIT_WINDOW} satisfies the flags"
    )


class ResidueElement:
    """Element c + d*theta of O_k/P; theta^2 = p, and d = 0 unless P is inert."""

    __slots__ = ("c", "d", "ideal")

    def __init__(self, c: int, d: int, ideal: PrimeIdeal):
        ell = ideal.ell
        self.c = c % ell
        self.d = d % ell if ideal.kind == INERT else 0
        self.ideal = ideal

    @property
    def value(self):
        return self.c if self.ideal.kind != INERT else (self.c, self.d)

    def _make(self, c, d):
        return ResidueElement(c, d, self.ideal)

    def _lift(self, other) -> ResidueElement:
        if isinstance(other, ResidueElement):
            return other
        return self._make(other, 0)

    def __add__(self, other):
        o = self._lift(other)
        return self._make(self.c + o.c, self.d + o.d)

    def __sub__(self, other):
        o = self._lift(other)
        return self._make(self.c - o.c, self.d - o.d)

    def __neg__(self):
        return self._make(-self.c, -self.d)

    def __mul__(self, other):
        o = self._lift(other)
        if self.ideal.kind != INERT:
            return self._make(self.c * o.c, 0)
        p = self.ideal.field.p
        return self._make(self.c * o.c + p * self.d * o.d, self.c * o.d + self.d * o.c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result, base = self._make(1, 0), self
        if n < 0:
            base, n = self.inverse(), -n
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> ResidueElement:
        if self.is_zero():
            raise ZeroDivisionError("zero residue")
        return self ** (self.ideal.norm - 2)

    def is_zero(self) -> bool:
        return self.c == 0 and self.d == 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._lift(other)
        if not isinstance(other, ResidueElement):
            return NotImplemented
        return (self.c, self.d, self.ideal) == (other.c, other.d, other.ideal)

    def __hash__(self):
        return hash((self.c, self.d, self.ideal))

    def key(self) -> tuple[int, int]:
        return self.c, self.d

    def __repr__(self):
        if self.ideal.kind == INERT:
            return f"Residue({self.c}+{self.d}θ mod {self.ideal.ell})"
        return f"Residue({self.c} mod {self.ideal.ell})"


def reduce(e: Union[RingElement, int], ideal: PrimeIdeal) -> ResidueElement:
    """O_k -> O_k/P, sending sqrt p to the ideal's root (or to theta when inert)."""
    if isinstance(e, int):
        return ResidueElement(e, 0, ideal)
    ell = ideal.ell
    inv2 = (ell + 1) // 2
    u, v = e.half()
    if ideal.kind == INERT:
        return ResidueElement(u * inv2, v * inv2, ideal)
    return ResidueElement((u + v * ideal.root) * inv2, 0, ideal)


def euler_criterion(r: ResidueElement) -> int:
    if r.is_zero():
        raise NotCoprime("zero residue has no quadratic character")
    t = r ** ((r.ideal.norm - 1) // 2)
    if t == 1:
        return 1
    assert t == -1, t
    return -1


def _nonresidue(ideal: PrimeIdeal) -> ResidueElement:
    ell = ideal.ell
    ds = range(ell) if ideal.kind == INERT else (0,)
    for d in ds:
        for c in range(ell):
            z = ResidueElement(c, d, ideal)
            if not z.is_zero() and euler_criterion(z) == -1:
                return z
    raise AssertionError("residue field has no nonresidue")  # pragma: no cover


def _tonelli_shanks(a: ResidueElement) -> ResidueElement:
    if a.is_zero():
        return a
    q = a.ideal.norm
    if (a ** ((q - 1) // 2)) != 1:
        raise NonResidue(f"{a} is not a square")
    t, s = q - 1, 0
    while t % 2 == 0:
        t //= 2
        s += 1
    z = _nonresidue(a.ideal)
    c = z ** t
    x = a ** ((t + 1) // 2)
    b = a ** t
    m = s
    while b != 1:
        i, b2 = 0, b
        while b2 != 1:
            b2 = b2 * b2
            i += 1
        g = c ** (1 << (m - i - 1))
        x = x * g
        c = g * g
        b = b * c
        m = i
    return x


def sqrt_mod(ideal: PrimeIdeal, a: Union[ResidueElement, RingElement, int]) -> ResidueElement:
    """Canonical square root: the lexicographically smaller of +-s."""
    if not isinstance(a, ResidueElement):
        a = reduce(a, ideal)
    s = _tonelli_shanks(a)
    return min(s, -s, key=ResidueElement.key)


def quad_symbol(a: Union[RingElement, int], ideal: PrimeIdeal) -> int:
    r = reduce(a, ideal)
    if r.is_zero():
        raise NotCoprime(f"{a} lies in {ideal}")
    return euler_criterion(r)


@dataclass(frozen=True)
class Place:
    tag: str  # "finite" | "infinite_1" | "infinite_2" | "dyadic"
    ideal: Optional[PrimeIdeal] = None

    @classmethod
    def finite(cls, ideal: PrimeIdeal) -> Place:
        return cls("finite", ideal)

    def __str__(self):
        return str(self.ideal) if self.tag == "finite" else self.tag


INF1 = Place("infinite_1")
INF2 = Place("infinite_2")
DYADIC = Place("dyadic")


def place_symbol(a: RingElement, place: Place) -> int:
    if place.tag == "infinite_1":
        return real_signs(a)[0]
    if place.tag == "infinite_2":
        return real_signs(a)[1]
    raise ValueError("place_symbol is defined at real places only; use quad_symbol")


def valuation(e: RingElement, ideal: PrimeIdeal) -> tuple[int, RingElement]:
    """(v, u) with e = pi^v * u and u not in P."""
    if not e:
        raise ValueError("valuation of zero")
    pi = ideal.generator
    if pi is None:
        raise ValueError(f"{ideal} has no generator")
    v = 0
    while reduce(e, ideal).is_zero():
        e = e.exact_div(pi)
        v += 1
    return v, e


def hilbert_symbol(a: RingElement, b: RingElement, place: Place) -> int:
    """(a, b) at an odd finite place or a real place."""
    if not a or not b:
        raise ValueError("Hilbert symbol of zero")
    if place.tag in ("infinite_1", "infinite_2"):
        return -1 if place_symbol(a, place) < 0 and place_symbol(b, place) < 0 else 1
    if place.tag == "dyadic":
        raise ValueError("dyadic place: use dyadic_hilbert")
    P = place.ideal
    alpha, u = valuation(a, P)
    beta, w = valuation(b, P)
    # (-1)^(alpha beta) u^beta w^-alpha; w^-alpha has the symbol of w^alpha
    sym = 1
    if (alpha * beta) % 2:
        sym *= quad_symbol(-1, P)
    if beta % 2:
        sym *= quad_symbol(u, P)
    if alpha % 2:
        sym *= quad_symbol(w, P)
    return sym


def _two_adic_reduce(e: RingElement) -> tuple[int, int]:
    """Strip factors of 4 (squares); return coordinates mod 64 of the result."""
    a, b = e.a, e.b
    while a % 4 == 0 and b % 4 == 0:
        a //= 4
        b //= 4
    return a % 64, b % 64


@lru_cache(maxsize=None)
def _squares_mod64(m: int) -> frozenset:
    out = set()
    for c, d in product(range(64), repeat=2):
        # (c + d w)^2 = c^2 + d^2 m + (2cd + d^2) w
        out.add(((c * c + d * d * m) % 64, (2 * c * d + d * d) % 64))
    return frozenset(out)


def _mul64(x, y, m):
    return (
        (x[0] * y[0] + x[1] * y[1] * m) % 64,
        (x[0] * y[1] + x[1] * y[0] + x[1] * y[1]) % 64,
    )


@lru_cache(maxsize=None)
def _dyadic_isotropic(m: int, a: tuple[int, int], b: tuple[int, int]) -> bool:
    sq = _squares_mod64(m)
    a_sq = {_mul64(a, s, m) for s in sq}
    b_sq = {_mul64(b, s, m) for s in sq}

    def sub(x, y):
        return (x[0] - y[0]) % 64, (x[1] - y[1]) % 64

    one = (1, 0)
    # primitive solutions have a unit coordinate, which scales to 1
    if any(sub(one, t) in b_sq for t in a_sq):  # z = 1
        return True
    if any(sub(s, a) in b_sq for s in sq):  # x = 1
        return True
    if any(sub(s, b) in a_sq for s in sq):  # y = 1
        return True
    return False


def dyadic_hilbert(a: RingElement, b: RingElement) -> int:
    """(a, b) at the prime 2, by solving z^2 = a x^2 + b y^2 mod 2^6.

    Requires p = 5 mod 8 so that 2 is inert and O/2^6 = (Z/64)[w].
    """
    if not a or not b:
        raise ValueError("Hilbert symbol of zero")
    field = a.field
    if field.p % 8 != 5:
        raise ValueError("dyadic_hilbert requires p = 5 mod 8")
    return 1 if _dyadic_isotropic(field.m % 64, _two_adic_reduce(a), _two_adic_reduce(b)) else -1


def relevant_places(a: RingElement, b: RingElement) -> list[Place]:
    field = a.field
    ells = set(factorint(abs(a.norm()))) | set(factorint(abs(b.norm())))
    places = [INF1, INF2, DYADIC]
    for ell in sorted(ells):
        if ell == 2:
            continue
        for P in ideals_above(field, ell):
            if P.contains(a) or P.contains(b):
                places.append(Place.finite(P))
    return places


def local_symbols(a: RingElement, b: RingElement) -> dict[str, int]:
    out = {}
    for place in relevant_places(a, b):
        if place.tag == "dyadic":
            out[str(place)] = dyadic_hilbert(a, b)
        else:
            out[str(place)] = hilbert_symbol(a, b, place)
    return out


def product_formula_check(a: RingElement, b: RingElement) -> bool:
    """True iff the Hilbert symbols of (a, b) multiply to +1 over all places."""
    total = 1
    for v in local_symbols(a, b).values():
        total *= v
    return total == 1
