"""Exact arithmetic in the ring of integers of Q(sqrt p), p prime, p = 1 mod 4.

Elements are stored in the basis {1, w} with w = (1 + sqrt p)/2, so every
algebraic integer has integer coordinates.  Real embeddings are never
evaluated numerically; signs come from integer comparisons.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt
from typing import Optional, Union

from sympy import isprime

IntLike = Union[int, "RingElement"]


@dataclass(frozen=True)
class QuadField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 5 or not isprime(self.p) or self.p % 4 != 1:
            raise ValueError(f"p must be a prime congruent to 1 mod 4, got {self.p!r}")

    @property
    def omega_disc(self) -> int:
        return self.p

    @property
    def m(self) -> int:
        """w^2 = w + m."""
        return (self.p - 1) // 4

    def element(self, a: int, b: int = 0) -> RingElement:
        return RingElement(a, b, self)

    def from_half(self, u: int, v: int) -> RingElement:
        """The integer (u + v sqrt p)/2; u and v must have equal parity."""
        if (u - v) % 2:
            raise ValueError(f"({u} + {v}*sqrt{self.p})/2 is not integral")
        return RingElement((u - v) // 2, v, self)

    def from_sqrt(self, x: int, y: int, den: int = 1) -> RingElement:
        """The integer (x + y sqrt p)/den for den in {1, 2}."""
        if den == 1:
            return self.from_half(2 * x, 2 * y)
        if den == 2:
            return self.from_half(x, y)
        raise ValueError("den must be 1 or 2")

    @property
    def one(self) -> RingElement:
        return RingElement(1, 0, self)

    @property
    def zero(self) -> RingElement:
        return RingElement(0, 0, self)

    @property
    def omega(self) -> RingElement:
        return RingElement(0, 1, self)

    @property
    def sqrt_p(self) -> RingElement:
        return RingElement(-1, 2, self)

    def parse(self, text: str) -> RingElement:
        return parse_element(text, self)

    def __str__(self):
        return f"Q(sqrt{self.p})"


@dataclass(frozen=True)
class RingElement:
    """a + b*w with w = (1 + sqrt p)/2."""

    a: int
    b: int
    field: QuadField

    def _coerce(self, other) -> RingElement:
        if isinstance(other, RingElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, int):
            return RingElement(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(-self.a, -self.b, self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        bd = self.b * o.b
        return RingElement(
            self.a * o.a + bd * self.field.m,
            self.a * o.b + self.b * o.a + bd,
            self.field,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            inv = self.unit_inverse()
            if inv is None:
                raise ValueError("negative power of a non-unit")
            return inv ** (-n)
        result, base = self.field.one, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a or self.b)

    def conj(self) -> RingElement:
        # conj(w) = 1 - w
        return RingElement(self.a + self.b, -self.b, self.field)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b - self.field.m * self.b * self.b

    def trace(self) -> int:
        return 2 * self.a + self.b

    def half(self) -> tuple[int, int]:
        """(u, v) with self = (u + v sqrt p)/2."""
        return 2 * self.a + self.b, self.b

    def height(self) -> int:
        return max(abs(self.a), abs(self.b))

    def exact_div(self, other: IntLike) -> Optional[RingElement]:
        """self/other if it lies in O_k, else None."""
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element")
        t = self * o.conj()
        if t.a % n or t.b % n:
            return None
        return RingElement(t.a // n, t.b // n, self.field)

    def divides(self, other: IntLike) -> bool:
        return self._coerce(other).exact_div(self) is not None

    def unit_inverse(self) -> Optional[RingElement]:
        n = self.norm()
        if n not in (1, -1):
            return None
        c = self.conj()
        return c if n == 1 else -c

    def is_totally_positive(self) -> bool:
        return bool(self) and real_signs(self) == (1, 1)

    def to_text(self) -> str:
        return f"{self.a}{self.b:+d}w"

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "p": self.field.p}

    @classmethod
    def from_json(cls, data: dict) -> RingElement:
        return cls(int(data["a"]), int(data["b"]), QuadField(int(data["p"])))

    def __str__(self):
        u, v = self.half()
        g = gcd(gcd(u, v), 2)
        u, v, den = u // g, v // g, 2 // g
        if v == 0:
            body = str(u)
        else:
            coeff = "" if abs(v) == 1 else str(abs(v))
            rad = f"{coeff}√{self.field.p}"
            if u == 0:
                body = ("-" if v < 0 else "") + rad
            else:
                body = f"{u} {'-' if v < 0 else '+'} {rad}"
        if den == 1:
            return body
        return f"({body})/{den}"

    def __repr__(self):
        return f"RingElement({self.to_text()}, p={self.field.p})"


def norm_trace_conj(e: RingElement) -> tuple[int, int, RingElement]:
    return e.norm(), e.trace(), e.conj()


def _sign_sqrt_form(u: int, v: int, p: int) -> int:
    """Sign of u + v*sqrt(p), exactly."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0 or (u > 0) == (v > 0):
        return 1 if v > 0 else -1
    # opposite signs: the larger square wins
    if u * u > v * v * p:
        return 1 if u > 0 else -1
    return 1 if v > 0 else -1


def real_signs(e: RingElement) -> tuple[int, int]:
    """Signs of e under the identity embedding and under the conjugate embedding."""
    if not e:
        raise ValueError("zero has no sign")
    u, v = e.half()
    p = e.field.p
    return _sign_sqrt_form(u, v, p), _sign_sqrt_form(u, -v, p)


@dataclass(frozen=True)
class UnitData:
    fundamental_unit: RingElement
    unit_norm: int


@dataclass(frozen=True)
class ClassData:
    h: int
    h_plus: int


def omega_convergents(field: QuadField):
    """Yield the continued-fraction convergents (h, k) of w = (1 + sqrt p)/2."""
    D = field.p
    r = isqrt(D)
    P, Q = 1, 2
    h_prev, h = 1, 0
    k_prev, k = 0, 1
    while True:
        a = (P + r) // Q
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        # (h_prev, k_prev) is now the newest convergent
        yield h_prev, k_prev
        P = a * Q - P
        Q = (D - P * P) // Q


@lru_cache(maxsize=None)
def fundamental_unit(field: QuadField) -> UnitData:
    """Smallest unit > 1, read off the first convergent h/k of w with
    N(h - k*conj(w)) = +-1."""
    for h, k in omega_convergents(field):
        eps = RingElement(h - k, k, field)
        n = eps.norm()
        if n in (1, -1) and real_signs(eps)[0] > 0 and eps != field.one:
            return UnitData(eps, n)
    raise AssertionError("unreachable")  # pragma: no cover


def unit_power(field: QuadField, j: int) -> RingElement:
    return fundamental_unit(field).fundamental_unit ** j


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """All reduced indefinite forms (a, b, c) of discriminant D (D not a square)."""
    r = isqrt(D)
    out = []
    for b in range(1, r + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        if ac >= 0:
            continue
        n = -ac
        for d in range(1, n + 1):
            if n % d:
                continue
            # reduced: sqrt D - b < 2|a| < sqrt D + b
            if (2 * d + b) ** 2 <= D:
                continue
            if 2 * d - b > 0 and (2 * d - b) ** 2 >= D:
                continue
            for a in (d, -d):
                out.append((a, b, ac // a))
    return sorted(out)


def _rho(form: tuple[int, int, int], D: int) -> tuple[int, int, int]:
    a, b, c = form
    r = isqrt(D)
    m = 2 * abs(c)
    b2 = r - ((r + b) % m)
    return c, b2, (b2 * b2 - D) // (4 * c)


def form_cycles(D: int) -> list[list[tuple[int, int, int]]]:
    forms = reduced_forms(D)
    seen: set = set()
    cycles = []
    for f in forms:
        if f in seen:
            continue
        cyc = []
        g = f
        while g not in seen:
            seen.add(g)
            cyc.append(g)
            g = _rho(g, D)
        cycles.append(cyc)
    return cycles


@lru_cache(maxsize=None)
def class_numbers(field: QuadField) -> ClassData:
    """Class numbers from cycles of reduced forms of discriminant p.

    Cycles count proper classes (the narrow group).  The wide class number
    counts cycles up to (a, b, c) -> (-a, b, -c).
    """
    cycles = form_cycles(field.p)
    index = {f: i for i, cyc in enumerate(cycles) for f in cyc}
    orbits = {frozenset((i, index[(-a, b, -c)])) for i, cyc in enumerate(cycles) for a, b, c in cyc[:1]}
    h = len(orbits)
    h_cycles = len(cycles)
    unit_norm = fundamental_unit(field).unit_norm
    h_plus = h if unit_norm == -1 else 2 * h
    assert h_plus == h_cycles, (h, h_plus, h_cycles)
    return ClassData(h, h_plus)


def congruent(e1: RingElement, e2: RingElement, m: IntLike) -> bool:
    """e1 = e2 mod m O_k."""
    mm = e1._coerce(m)
    if not mm:
        raise ValueError("zero modulus")
    return (e1 - e2).exact_div(mm) is not None


def sqrt_element(t: RingElement) -> Optional[RingElement]:
    """A square root of t in O_k, or None.

    With t = (u + v sqrt p)/2 and s = (x + y sqrt p)/2, s^2 = t means
    x^2 + p y^2 = 2u and x y = v.
    """
    if not t:
        return t
    if not t.is_totally_positive():
        return None
    n = t.norm()
    r = isqrt(n)
    if r * r != n:
        return None
    u, v = t.half()
    p = t.field.p
    for sigma in (1, -1):
        # x^2 - p y^2 = 4 sigma r
        x2 = u + 2 * sigma * r
        py2 = u - 2 * sigma * r
        if x2 < 0 or py2 < 0 or py2 % p:
            continue
        x, y = isqrt(x2), isqrt(py2 // p)
        if x * x != x2 or y * y != py2 // p:
            continue
        if x * y != abs(v):
            continue
        if v < 0:
            y = -y
        if (x - y) % 2:
            continue
        s = t.field.from_half(x, y)
        if s * s == t:
            return s
    return None


_TERM = re.compile(r"([+-]?)(\d*)\*?(w|√\d+|sqrt\(?\d+\)?|s)?")


def parse_element(text: str, field: QuadField) -> RingElement:
    """Parse '33+8w', '33+8√5', '(23+5*sqrt5)/2', '17', '-1-9sqrt(5)'."""
    s = text.replace(" ", "")
    den = 1
    m = re.fullmatch(r"\((.*)\)/(\d+)", s)
    if m:
        s, den = m.group(1), int(m.group(2))
    if not s:
        raise ValueError(f"cannot parse element {text!r}")
    u_int = v_sqrt = v_w = 0
    pos = 0
    while pos < len(s):
        mt = _TERM.match(s, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse element {text!r}")
        sign = -1 if mt.group(1) == "-" else 1
        digits, unit = mt.group(2), mt.group(3)
        if not digits and not unit:
            raise ValueError(f"cannot parse element {text!r}")
        coeff = sign * (int(digits) if digits else 1)
        if unit is None:
            u_int += coeff
        elif unit == "w":
            v_w += coeff
        else:
            rad = re.sub(r"\D", "", unit)
            if rad and int(rad) != field.p:
                raise ValueError(f"radical {unit} does not match p={field.p}")
            v_sqrt += coeff
        pos = mt.end()
    # (u_int + v_w*w + v_sqrt*sqrt p)/den
    num = RingElement(u_int, v_w, field) + field.sqrt_p * v_sqrt
    if den == 1:
        return num
    q = num.exact_div(den)
    if q is None:
        raise ValueError(f"{text!r} is not an algebraic integer")
    return q
