"""Exact arithmetic in towers of quadratic extensions over Q(sqrt p).

An element of a level-n extension is c0 + c1 * sqrt(r), where c0, c1 and the
radicand r live one level down.  The base level stores x + y sqrt(p) with
Fraction coordinates.  Mixed-level operations coerce the lower operand up.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .ok_ring import RingElement

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class BaseElt:
    """x + y sqrt(p) with rational x, y."""

    x: Fraction
    y: Fraction
    p: int
    depth = 0

    @classmethod
    def of(cls, p: int, x: Scalar = 0, y: Scalar = 0) -> BaseElt:
        return cls(Fraction(x), Fraction(y), p)

    @classmethod
    def from_ring(cls, e: RingElement) -> BaseElt:
        # a + b w = (2a + b)/2 + (b/2) sqrt p
        return cls(Fraction(2 * e.a + e.b, 2), Fraction(e.b, 2), e.field.p)

    def _coerce(self, o) -> BaseElt:
        if isinstance(o, BaseElt):
            return o
        if isinstance(o, RingElement):
            return BaseElt.from_ring(o)
        return BaseElt(Fraction(o), Fraction(0), self.p)

    def __add__(self, o):
        if isinstance(o, Ext):
            return NotImplemented
        o = self._coerce(o)
        return BaseElt(self.x + o.x, self.y + o.y, self.p)

    __radd__ = __add__

    def __neg__(self):
        return BaseElt(-self.x, -self.y, self.p)

    def __sub__(self, o):
        if isinstance(o, Ext):
            return NotImplemented
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, Ext):
            return NotImplemented
        o = self._coerce(o)
        return BaseElt(self.x * o.x + self.p * self.y * o.y, self.x * o.y + self.y * o.x, self.p)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def conj(self) -> BaseElt:
        return BaseElt(self.x, -self.y, self.p)

    def inverse(self) -> BaseElt:
        n = self.x * self.x - self.p * self.y * self.y
        return BaseElt(self.x / n, -self.y / n, self.p)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def is_integral(self) -> bool:
        """Membership in O_k: trace and norm are integers (p = 1 mod 4)."""
        t = 2 * self.x
        n = self.x * self.x - self.p * self.y * self.y
        return t.denominator == 1 and n.denominator == 1


@dataclass(frozen=True)
class Ext:
    """c0 + c1 sqrt(r) over the field containing c0, c1, r."""

    c0: object
    c1: object
    r: object

    @property
    def depth(self) -> int:
        return self.r.depth + 1

    @classmethod
    def sqrt_of(cls, r) -> Ext:
        return cls(r * 0, r * 0 + 1, r)

    def _coerce(self, o) -> Ext:
        if isinstance(o, Ext) and o.depth == self.depth:
            if o.r != self.r:
                raise ValueError("elements of different extensions")
            return o
        zero = self.r * 0
        return Ext(zero + o, zero, self.r)

    def __add__(self, o):
        if isinstance(o, Ext) and o.depth > self.depth:
            return o + self
        o = self._coerce(o)
        return Ext(self.c0 + o.c0, self.c1 + o.c1, self.r)

    __radd__ = __add__

    def __neg__(self):
        return Ext(-self.c0, -self.c1, self.r)

    def __sub__(self, o):
        if isinstance(o, Ext) and o.depth > self.depth:
            return -o + self
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, Ext) and o.depth > self.depth:
            return o * self
        o = self._coerce(o)
        return Ext(
            self.c0 * o.c0 + self.c1 * o.c1 * self.r,
            self.c0 * o.c1 + self.c1 * o.c0,
            self.r,
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.c0.is_zero() and self.c1.is_zero()

    def conj(self) -> Ext:
        return Ext(self.c0, -self.c1, self.r)

    def relative_trace(self):
        return self.c0 * 2

    def relative_norm(self):
        return self.c0 * self.c0 - self.c1 * self.c1 * self.r

    def scale(self, q: Scalar) -> Ext:
        q = Fraction(q)
        return Ext(_scale(self.c0, q), _scale(self.c1, q), self.r)


def _scale(e, q: Fraction):
    if isinstance(e, BaseElt):
        return BaseElt(e.x * q, e.y * q, e.p)
    return e.scale(q)


def horner(coeffs: Sequence[int], t):
    """Evaluate sum coeffs[i] t^(n-i) (highest degree first)."""
    acc = t * 0
    for c in coeffs:
        acc = acc * t + c
    return acc
