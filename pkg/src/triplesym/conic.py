"""Solutions of x^2 - pi1 y^2 - pi2 z^2 = 0 over O_k.

The search scans (y, z) with y in 2 O_k by increasing height and tests
pi1 y^2 + pi2 z^2 for being a square.  Candidate norms are filtered with
integer quadratic-residue tables before any exact square root is taken.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Optional

import numpy as np
from sympy import factorint

from .errors import HeightExhausted, NormalizationUnreachable, PreconditionFailed
from .ok_ring import RingElement, fundamental_unit, real_signs, sqrt_element
from .residue import PrimeIdeal, ideals_above, quad_symbol, UNIT_WINDOW

DEFAULT_HEIGHT_BOUND = 200

_FILTER_MODULI = (64, 63, 65, 11, 17, 19, 23)
_SQUARE_TABLES = {
    m: np.isin(np.arange(m), np.array([(i * i) % m for i in range(m)])) for m in _FILTER_MODULI
}
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class ConicSolution:
    x: RingElement
    y: RingElement
    z: RingElement
    primitive: bool
    y_even: bool
    xy_normalized: bool

    @classmethod
    def from_coords(cls, x: RingElement, y: RingElement, z: RingElement) -> ConicSolution:
        return cls(x, y, z, *solution_flags(x, y, z))

    def residual(self, pi1: RingElement, pi2: RingElement) -> RingElement:
        return self.x * self.x - pi1 * self.y * self.y - pi2 * self.z * self.z

    def projective_key(self):
        """Identifies solutions up to scaling and independent coordinate signs."""
        x2 = self.x * self.x
        return (_ratio(self.y * self.y, x2), _ratio(self.z * self.z, x2))

    def to_json(self) -> dict:
        return {
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "z": self.z.to_json(),
            "primitive": self.primitive,
            "y_even": self.y_even,
            "xy_normalized": self.xy_normalized,
        }

    @classmethod
    def from_json(cls, data: dict) -> ConicSolution:
        return cls(
            RingElement.from_json(data["x"]),
            RingElement.from_json(data["y"]),
            RingElement.from_json(data["z"]),
            bool(data["primitive"]),
            bool(data["y_even"]),
            bool(data["xy_normalized"]),
        )


def _ratio(num: RingElement, den: RingElement) -> tuple[Fraction, Fraction]:
    t = num * den.conj()
    n = den.norm()
    return Fraction(t.a, n), Fraction(t.b, n)


def _common_prime_ideals(coords) -> list:
    """Prime ideals (2 reported as the int 2) containing every nonzero coordinate."""
    nz = [c for c in coords if c]
    if not nz:
        return []
    g = 0
    for c in nz:
        g = gcd(g, abs(c.norm()))
    out = []
    for ell in factorint(g):
        if ell == 2:
            if all(c.a % 2 == 0 and c.b % 2 == 0 for c in nz):
                out.append(2)
            continue
        for P in ideals_above(nz[0].field, ell):
            if all(P.contains(c) for c in nz):
                out.append(P)
    return out


def solution_flags(x: RingElement, y: RingElement, z: RingElement) -> tuple[bool, bool, bool]:
    primitive = bool(x or y or z) and not _common_prime_ideals((x, y, z))
    y_even = y.a % 2 == 0 and y.b % 2 == 0
    xy_normalized = (x - y - 1).exact_div(4) is not None
    return primitive, y_even, xy_normalized


def verify_solution(sol: ConicSolution, pi1: RingElement, pi2: RingElement) -> bool:
    """Exact re-check of the equation, nontriviality and the stored flags."""
    if not (sol.x or sol.y or sol.z):
        return False
    if sol.residual(pi1, pi2):
        return False
    return solution_flags(sol.x, sol.y, sol.z) == (sol.primitive, sol.y_even, sol.xy_normalized)


def check_conic_hypotheses(pi1: RingElement, pi2: RingElement) -> list[str]:
    from .residue import prime_ideal_of

    reasons = []
    eps = fundamental_unit(pi1.field).fundamental_unit
    ideals = []
    for name, pi in (("pi1", pi1), ("pi2", pi2)):
        if (pi - 1).exact_div(4) is None:
            reasons.append(f"{name} not 1 mod 4")
        if not pi.is_totally_positive():
            reasons.append(f"{name} not totally positive")
        try:
            ideals.append(prime_ideal_of(pi))
        except ValueError:
            reasons.append(f"{name} not prime")
    if len(ideals) == 2:
        P1, P2 = ideals
        if P1 == P2:
            reasons.append("ideals coincide")
        else:
            if quad_symbol(pi1, P2) != 1 or quad_symbol(pi2, P1) != 1:
                reasons.append("pair symbol")
            if quad_symbol(eps, P1) != 1 or quad_symbol(eps, P2) != 1:
                reasons.append("unit symbol")
    return reasons


@lru_cache(maxsize=4)
def _canonical_coords(H: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates of all nonzero a + b w with max(|a|, |b|) <= H, ordered by
    (height, a, b)."""
    r = np.arange(-H, H + 1, dtype=np.int64)
    A, B = np.meshgrid(r, r, indexing="ij")
    A, B = A.ravel(), B.ravel()
    keep = (A != 0) | (B != 0)
    A, B = A[keep], B[keep]
    heights = np.maximum(np.abs(A), np.abs(B))
    order = np.lexsort((B, A, heights))
    return A[order], B[order], heights[order]


def _square_candidates(norms: np.ndarray) -> np.ndarray:
    mask = norms >= 0
    for m, table in _SQUARE_TABLES.items():
        mask &= table[np.mod(norms, m)]
    return np.nonzero(mask)[0]


def _times_squares(pi: RingElement, A: np.ndarray, B: np.ndarray, exact: bool):
    """Coordinates of pi * z^2 for the z = A + B w."""
    m = pi.field.m
    if exact:
        A, B = A.astype(object), B.astype(object)
    z2a = A * A + B * B * m
    z2b = 2 * A * B + B * B
    return pi.a * z2a + pi.b * z2b * m, pi.a * z2b + pi.b * z2a + pi.b * z2b


def _fits_int64(pi1: RingElement, pi2: RingElement, h: int) -> bool:
    m = pi1.field.m
    sq = (m + 3) * (2 * h) ** 2
    w = sum((abs(pi.a) + abs(pi.b)) * (m + 2) * sq for pi in (pi1, pi2))
    return (m + 2) * w * w < _INT64_SAFE


def iter_conic_solutions(
    pi1: RingElement,
    pi2: RingElement,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
    avoid: Optional[PrimeIdeal] = None,
) -> Iterator[ConicSolution]:
    """Raw solutions (x, 2y', z) with y', z of height <= height_bound, in scan order.

    Pairs are visited shell by shell in max(height(y'), height(z)); within a
    shell by the (height, a, b) order of y' and then of z.
    """
    field = pi1.field
    m = field.m
    A, B, heights = _canonical_coords(height_bound)
    block = 0
    for h in range(1, height_bound + 1):
        shell_start = int(np.searchsorted(heights, h, side="left"))
        shell_end = int(np.searchsorted(heights, h, side="right"))
        if shell_end > block:
            block_h = min(height_bound, max(2 * h, 8))
            block = int(np.searchsorted(heights, block_h, side="right"))
            exact = not _fits_int64(pi1, pi2, block_h)
            q2a, q2b = _times_squares(pi2, A[:block], B[:block], exact)
        for iy in range(shell_end):
            lo = 0 if heights[iy] == h else shell_start
            y = field.element(2 * int(A[iy]), 2 * int(B[iy]))
            Y = pi1 * y * y
            ta = q2a[lo:shell_end] + Y.a
            tb = q2b[lo:shell_end] + Y.b
            norms = ta * ta + ta * tb - m * tb * tb
            if exact:
                cand = [i for i, n in enumerate(norms) if n >= 0 and isqrt(n) ** 2 == n]
            else:
                cand = _square_candidates(norms)
            for i in cand:
                n = int(norms[i])
                if isqrt(n) ** 2 != n:
                    continue
                z = field.element(int(A[lo + i]), int(B[lo + i]))
                if avoid is not None and avoid.contains(z):
                    continue
                x = sqrt_element(field.element(int(ta[i]), int(tb[i])))
                if x is None:
                    continue
                yield ConicSolution.from_coords(x, y, z)


def _strip_common_factors(x: RingElement, y: RingElement, z: RingElement):
    while True:
        common = _common_prime_ideals((x, y, z))
        if not common:
            return x, y, z
        P = common[0]
        g = P if P == 2 else P.generator
        if g is None:
            raise NormalizationUnreachable(f"common factor {P} is not principal")
        x, y, z = (c.exact_div(g) for c in (x, y, z))


def normalize_solution(sol: ConicSolution, pi1: RingElement, pi2: RingElement) -> ConicSolution:
    """Primitive representative with y in 2 O_k and x - y = 1 mod 4 O_k.

    The orbit searched is (+-eps^j x, +-eps^j y, +-eps^j z), |j| <= 8, together
    with a sign change of x alone.  Units = 1 mod 4 keep a solution normalized,
    so the member of least height is returned (y positive at the first real
    place on ties); the result then does not depend on the representative
    passed in.  z is returned positive at the first real place.
    """
    x, y, z = _strip_common_factors(sol.x, sol.y, sol.z)
    field = x.field
    eps = fundamental_unit(field).fundamental_unit
    eps_inv = eps.unit_inverse()
    best = None
    up = down = field.one
    for j in range(UNIT_WINDOW + 1):
        for u in ((up,) if j == 0 else (up, down)):
            for s in (u, -u):
                for xs in (s, -s):
                    cand = ConicSolution.from_coords(xs * x, s * y, s * z)
                    if cand.primitive and cand.y_even and cand.xy_normalized:
                        zz = cand.z if real_signs(cand.z)[0] > 0 else -cand.z
                        key = (max(c.height() for c in (cand.x, cand.y, zz)),
                               -real_signs(cand.y)[0] if cand.y else 0,
                               [(c.a, c.b) for c in (cand.x, cand.y, zz)])
                        if best is None or key < best[0]:
                            best = (key, ConicSolution(cand.x, cand.y, zz, True, True, True))
        up, down = up * eps, down * eps_inv
    if best is None:
        raise NormalizationUnreachable("no orbit member of the solution is normalized")
    return best[1]


def solve_conic(
    pi1: RingElement,
    pi2: RingElement,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
    avoid: Optional[PrimeIdeal] = None,
    check: bool = True,
) -> ConicSolution:
    """First normalizable solution in scan order, normalized."""
    for sol in iter_normalized_solutions(pi1, pi2, height_bound, avoid, check):
        return sol
    raise HeightExhausted(f"no solution with height <= {height_bound}")


def iter_normalized_solutions(
    pi1: RingElement,
    pi2: RingElement,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
    avoid: Optional[PrimeIdeal] = None,
    check: bool = True,
) -> Iterator[ConicSolution]:
    """Normalized solutions, one per projective class, in scan order."""
    if check:
        reasons = check_conic_hypotheses(pi1, pi2)
        if reasons:
            raise PreconditionFailed(", ".join(reasons))
    seen = set()
    for raw in iter_conic_solutions(pi1, pi2, height_bound, avoid):
        key = raw.projective_key()
        if key in seen:
            continue
        try:
            sol = normalize_solution(raw, pi1, pi2)
        except NormalizationUnreachable:
            continue
        seen.add(key)
        yield sol


def solve_rational_conic(p1: int, p2: int, bound: int = 10_000) -> tuple[int, int, int]:
    """Primitive integers with x^2 = p1 y^2 + p2 z^2, y even, x - y = 1 mod 4."""
    for h in range(1, bound + 1):
        for y, z in [(2 * h, k) for k in range(1, h + 1)] + [(2 * k, h) for k in range(1, h)]:
            t = p1 * y * y + p2 * z * z
            x = isqrt(t)
            if x * x != t or gcd(gcd(x, y), z) != 1:
                continue
            if (x - y) % 4 != 1:
                x = -x
            return x, y, z
    raise HeightExhausted(f"no rational solution with height <= {bound}")
