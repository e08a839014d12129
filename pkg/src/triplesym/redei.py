"""Rédei-type D8 extension data, the triple quadratic residue symbol, and the
Frobenius class of a third prime in the 3x3 unipotent group over F_2.

For an admissible pair the extension is K = k(sqrt pi1, sqrt pi2, sqrt alpha1)
with alpha1 = x + y sqrt pi1 coming from a normalized solution of
x^2 = pi1 y^2 + pi2 z^2.  A third prime splits completely in K exactly when
x + y s is a square modulo it, where s is a square root of pi1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional

from .conic import (
    DEFAULT_HEIGHT_BOUND,
    ConicSolution,
    iter_normalized_solutions,
    solve_rational_conic,
)
from .errors import (
    DegenerateSolution,
    HeightExhausted,
    NormalizationUnreachable,
    PreconditionFailed,
    WitnessFailed,
)
from .magnus import UnipotentMatrix, d8_translate
from .ok_ring import RingElement, class_numbers, fundamental_unit
from .residue import (
    INERT,
    PrimeIdeal,
    ResidueElement,
    euler_criterion,
    normalized_generator,
    quad_symbol,
    reduce,
    sqrt_mod,
)
from .tower import BaseElt, Ext


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def _generator(P: PrimeIdeal) -> Optional[RingElement]:
    return _normalized(P, P.generator)


@lru_cache(maxsize=1 << 14)
def _normalized(P: PrimeIdeal, generator: Optional[RingElement]) -> Optional[RingElement]:
    try:
        return normalized_generator(P, True, True)
    except NormalizationUnreachable:
        return generator


@lru_cache(maxsize=1 << 16)
def _symbol(a: RingElement, P: PrimeIdeal) -> int:
    return quad_symbol(a, P)


def _ideal_reasons(P: PrimeIdeal, eps: RingElement, label: str) -> list[str]:
    reasons = []
    if P.norm % 4 != 1:
        reasons.append(f"norm of {label} not 1 mod 4")
    if P.generator is None:
        reasons.append(f"{label} not principal")
    elif _symbol(eps, P) != 1:
        reasons.append("unit symbol")
    return reasons


def _symbol_reasons(ideals: list[PrimeIdeal]) -> list[str]:
    gens = [_generator(P) for P in ideals]
    if any(g is None for g in gens):
        return []
    for i, Pi in enumerate(ideals):
        for j, Pj in enumerate(ideals):
            if i != j and _symbol(gens[i], Pj) != 1:
                return ["pair symbol" if {i, j} == {0, 1} else "third symbol"]
    return []


def pair_admissible(p1: PrimeIdeal, p2: PrimeIdeal) -> Admissibility:
    field_ = p1.field
    if p2.field != field_:
        return Admissibility(False, ("different fields",))
    if p1 == p2:
        return Admissibility(False, ("repeated ideal",))
    reasons = []
    if class_numbers(field_).h_plus != 1:
        reasons.append("narrow class number")
    eps = fundamental_unit(field_).fundamental_unit
    for label, P in (("p1", p1), ("p2", p2)):
        if P.kind != INERT and P.ell == field_.p:
            reasons.append(f"{label} ramified")
            continue
        reasons += [r for r in _ideal_reasons(P, eps, label) if r not in reasons]
    if not reasons:
        reasons += _symbol_reasons([p1, p2])
    return Admissibility(not reasons, tuple(reasons))


def triple_admissible(p1: PrimeIdeal, p2: PrimeIdeal, p3: PrimeIdeal) -> Admissibility:
    if len({p1, p2, p3}) < 3:
        return Admissibility(False, ("repeated ideal",))
    pair = pair_admissible(p1, p2)
    reasons = list(pair.reasons)
    if p3.field != p1.field:
        reasons.append("different fields")
        return Admissibility(False, tuple(reasons))
    if p3.ell == p3.field.p:
        reasons.append("p3 ramified")
    else:
        eps = fundamental_unit(p3.field).fundamental_unit
        reasons += [r for r in _ideal_reasons(p3, eps, "p3") if r not in reasons]
    if not reasons:
        reasons += _symbol_reasons([p1, p2, p3])
    return Admissibility(not reasons, tuple(reasons))


@dataclass(frozen=True)
class RedeiData:
    p1: PrimeIdeal
    p2: PrimeIdeal
    pi1: RingElement
    pi2: RingElement
    solution: ConicSolution
    tower: tuple[str, ...]
    composite: Optional[tuple[int, int, int]] = None
    witness: Optional[object] = field(default=None, compare=False)

    @property
    def alpha1(self) -> tuple[RingElement, RingElement]:
        return self.solution.x, self.solution.y

    def alpha1_text(self) -> str:
        return f"({self.solution.x}) + ({self.solution.y})·√π₁"

    def to_json(self) -> dict:
        return {
            "p1": self.p1.to_json(),
            "p2": self.p2.to_json(),
            "pi1": self.pi1.to_json(),
            "pi2": self.pi2.to_json(),
            "solution": self.solution.to_json(),
            "alpha1": {"x": self.solution.x.to_json(), "y": self.solution.y.to_json()},
            "tower": list(self.tower),
            "composite": None if self.composite is None else [str(c) for c in self.composite],
        }


def _require_conic_route(P: PrimeIdeal):
    if P.field.p % 8 != 5:
        raise PreconditionFailed("the conic route needs p = 5 mod 8")


def _tower_labels(field_, pi1: RingElement, pi2: RingElement) -> tuple[str, ...]:
    return (
        f"k = Q(√{field_.p})",
        f"k1 = k(√({pi1}))",
        f"K = k1(√α₁, √({pi2}))",
    )


def _composite_solution(p1: PrimeIdeal, p2: PrimeIdeal) -> Optional[tuple[int, int, int]]:
    """Rational solution for the construction over Q when both primes are inert."""
    if p1.kind != INERT or p2.kind != INERT:
        return None
    l1, l2 = p1.ell, p2.ell
    if l1 % 4 != 1 or l2 % 4 != 1:
        return None
    if pow(l1, (l2 - 1) // 2, l2) != 1:
        return None
    return solve_rational_conic(l1, l2)


def _example_witness(p1: PrimeIdeal, p2: PrimeIdeal):
    from .golden import witness_for

    return witness_for(p1, p2)


def build_redei(
    p1: PrimeIdeal,
    p2: PrimeIdeal,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
    avoid: Optional[PrimeIdeal] = None,
    solution: Optional[ConicSolution] = None,
) -> RedeiData:
    _require_conic_route(p1)
    adm = pair_admissible(p1, p2)
    if not adm:
        raise PreconditionFailed(", ".join(adm.reasons))
    pi1 = normalized_generator(p1, True, True)
    pi2 = normalized_generator(p2, True, True)
    if solution is None:
        solution = _first_solution(pi1, pi2, height_bound, avoid)
    elif solution.residual(pi1, pi2):
        raise PreconditionFailed("supplied solution does not lie on the conic")
    return RedeiData(
        p1.with_generator(pi1),
        p2.with_generator(pi2),
        pi1,
        pi2,
        solution,
        _tower_labels(p1.field, pi1, pi2),
        _composite_solution(p1, p2),
        _example_witness(p1, p2),
    )


def _first_solution(pi1, pi2, height_bound, avoid) -> ConicSolution:
    for sol in iter_normalized_solutions(pi1, pi2, height_bound, avoid):
        return sol
    raise HeightExhausted(f"no normalized conic solution with height <= {height_bound}")


# -- witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    checks: tuple[tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(v for _, v in self.checks)

    def as_dict(self) -> dict[str, bool]:
        return dict(self.checks)


def _theta_checks(pi1: RingElement, pi2: RingElement, x: RingElement, y: RingElement, z: RingElement):
    """theta = (1 + sqrt alpha1)/2 has an integral monic quadratic over k1, and
    the relative norm of alpha1 is pi2 z^2."""
    r1 = Ext.sqrt_of(BaseElt.from_ring(pi1))
    alpha = r1 * BaseElt.from_ring(y) + BaseElt.from_ring(x)
    beta = (1 - alpha).scale(Fraction(1, 4))
    # beta lies in O_{k1} iff its trace and norm down to k are integral
    beta_integral = beta.relative_trace().is_integral() and beta.relative_norm().is_integral()
    root = Ext.sqrt_of(alpha)
    theta = (root + 1).scale(Fraction(1, 2))
    theta_ok = (theta * theta - theta + beta).is_zero()
    norm_ok = alpha.relative_norm() == BaseElt.from_ring(pi2 * z * z)
    return [
        ("theta monic quadratic", theta_ok),
        ("theta coefficient integral", beta_integral),
        ("relative norm of alpha1", norm_ok),
    ]


def integrality_witnesses(data: RedeiData) -> WitnessReport:
    x, y = data.alpha1
    checks = _theta_checks(data.pi1, data.pi2, x, y, data.solution.z)
    if data.witness is not None:
        checks += [(f"{data.witness.name}: {k}", v) for k, v in data.witness.verify().items()]
    for name, ok in checks:
        if not ok:
            raise WitnessFailed(name)
    return WitnessReport(tuple(checks))


# -- the triple symbol -------------------------------------------------------


@dataclass(frozen=True)
class TripleResult:
    p1: PrimeIdeal
    p2: PrimeIdeal
    p3: PrimeIdeal
    symbol: int
    s: ResidueElement
    u: ResidueElement
    solution: ConicSolution

    def to_json(self) -> dict:
        return {
            "p1": self.p1.to_json(),
            "p2": self.p2.to_json(),
            "p3": self.p3.to_json(),
            "symbol": self.symbol,
            "s": _residue_text(self.s),
            "u": _residue_text(self.u),
            "solution": self.solution.to_json(),
        }


def _residue_text(r: ResidueElement) -> str:
    if r.ideal.kind == INERT:
        return f"{r.c}+{r.d}θ"
    return str(r.c)


def _residue_symbol(data: RedeiData, p3: PrimeIdeal, sign_of_s: int = 1):
    """(symbol, s, u) for a solution with z not in p3."""
    x, y = data.alpha1
    s = sqrt_mod(p3, reduce(data.pi1, p3))
    if sign_of_s < 0:
        s = -s
    xr, yr = reduce(x, p3), reduce(y, p3)
    u = xr + yr * s
    if u.is_zero():
        u = xr - yr * s
    if u.is_zero():
        raise DegenerateSolution(f"x ± y s vanish modulo {p3}")
    return euler_criterion(u), s, u


def _composite_symbol(data: RedeiData, p3: PrimeIdeal, s: ResidueElement) -> int:
    x0, y0, _ = data.composite
    u = reduce(x0, p3) + reduce(y0, p3) * s
    if u.is_zero():
        u = reduce(x0, p3) - reduce(y0, p3) * s
    return euler_criterion(u)


def triple_report(
    p1: PrimeIdeal,
    p2: PrimeIdeal,
    p3: PrimeIdeal,
    data: Optional[RedeiData] = None,
    sign_of_s: int = 1,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
) -> TripleResult:
    adm = triple_admissible(p1, p2, p3)
    if not adm:
        raise PreconditionFailed(", ".join(adm.reasons))
    if data is None or data.p1 != p1 or data.p2 != p2:
        data = build_redei(p1, p2, height_bound, avoid=p3)
    candidates = [data.solution] if not p3.contains(data.solution.z) else []
    stream = iter_normalized_solutions(data.pi1, data.pi2, height_bound, avoid=p3, check=False)
    while True:
        if not candidates:
            try:
                candidates.append(next(stream))
            except StopIteration:
                raise DegenerateSolution(f"every solution up to height {height_bound} degenerates at {p3}")
        sol = candidates.pop()
        current = RedeiData(data.p1, data.p2, data.pi1, data.pi2, sol, data.tower, data.composite, data.witness)
        try:
            symbol, s, u = _residue_symbol(current, p3, sign_of_s)
        except DegenerateSolution:
            continue
        break
    if current.composite is not None and _composite_symbol(current, p3, s) != symbol:
        raise WitnessFailed("composite and conic constructions disagree")
    return TripleResult(p1, p2, p3, symbol, s, u, sol)


def triple_symbol(
    p1: PrimeIdeal,
    p2: PrimeIdeal,
    p3: PrimeIdeal,
    data: Optional[RedeiData] = None,
    sign_of_s: int = 1,
    height_bound: int = DEFAULT_HEIGHT_BOUND,
) -> int:
    return triple_report(p1, p2, p3, data, sign_of_s, height_bound).symbol


# -- Frobenius class ---------------------------------------------------------


@dataclass(frozen=True)
class D8Class:
    matrix: UnipotentMatrix

    @property
    def word(self) -> str:
        return d8_translate(self.matrix)

    @property
    def label(self) -> str:
        m = self.matrix
        if m.is_identity():
            return "identity"
        if not (m.e12 or m.e23):
            return "center"
        return f"order {m.order()}"

    def __mul__(self, other: D8Class) -> D8Class:
        return D8Class(self.matrix * other.matrix)


def frobenius_class(data: RedeiData, p3: PrimeIdeal, height_bound: int = DEFAULT_HEIGHT_BOUND) -> D8Class:
    """Conjugacy-class representative of Frobenius at p3; e13 is fixed to 0
    whenever e12 or e23 is nonzero."""
    if p3 in (data.p1, data.p2):
        raise ValueError(f"{p3} ramifies in the extension")
    if p3.ell == p3.field.p:
        raise ValueError(f"{p3} ramifies in k")
    e12 = int(quad_symbol(data.pi1, p3) == -1)
    e23 = int(quad_symbol(data.pi2, p3) == -1)
    e13 = 0
    if not (e12 or e23):
        if p3.contains(data.solution.z):
            sol = _first_solution(data.pi1, data.pi2, height_bound, p3)
            data = RedeiData(data.p1, data.p2, data.pi1, data.pi2, sol, data.tower, data.composite, data.witness)
        e13 = int(_residue_symbol(data, p3)[0] == -1)
    return D8Class(UnipotentMatrix(e12, e23, e13))
