"""Triple quadratic residue symbols and mod-2 Milnor invariants over Q(sqrt p)."""
from .conic import ConicSolution, solve_conic, iter_normalized_solutions, normalize_solution, verify_solution
from .errors import (
    DegenerateSolution,
    HeightExhausted,
    HypothesisViolated,
    InvalidPerturbation,
    NonResidue,
    NormalizationUnreachable,
    NotACoboundary,
    NotCoprime,
    PreconditionFailed,
    TripleSymError,
    WitnessFailed,
)
from .magnus import FreeWord, TruncatedSeries, UnipotentMatrix, expand, mu2, rho, zassenhaus_depth
from .massey import CochainFunctional, TwoCochainValue, solve_primitive, triple_massey_pairing
from .ok_ring import QuadField, RingElement, class_numbers, fundamental_unit
from .redei import (
    D8Class,
    RedeiData,
    build_redei,
    frobenius_class,
    integrality_witnesses,
    pair_admissible,
    triple_admissible,
    triple_symbol,
)
from .residue import PrimeIdeal, hilbert_symbol, quad_symbol, splitting_type, sqrt_mod

__all__ = [
    "ConicSolution",
    "solve_conic",
    "iter_normalized_solutions",
    "normalize_solution",
    "verify_solution",
    "DegenerateSolution",
    "HeightExhausted",
    "HypothesisViolated",
    "InvalidPerturbation",
    "NonResidue",
    "NormalizationUnreachable",
    "NotACoboundary",
    "NotCoprime",
    "PreconditionFailed",
    "TripleSymError",
    "WitnessFailed",
    "FreeWord",
    "TruncatedSeries",
    "UnipotentMatrix",
    "expand",
    "mu2",
    "rho",
    "zassenhaus_depth",
    "CochainFunctional",
    "TwoCochainValue",
    "solve_primitive",
    "triple_massey_pairing",
    "QuadField",
    "RingElement",
    "class_numbers",
    "fundamental_unit",
    "D8Class",
    "RedeiData",
    "build_redei",
    "frobenius_class",
    "integrality_witnesses",
    "pair_admissible",
    "triple_admissible",
    "triple_symbol",
    "PrimeIdeal",
    "hilbert_symbol",
    "quad_symbol",
    "splitting_type",
    "sqrt_mod",
]

__version__ = "0.1.0"
