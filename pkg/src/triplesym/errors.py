"""Exception types raised across the package."""


class TripleSymError(Exception):
    """Base class for all library errors."""


class NormalizationUnreachable(TripleSymError):
    """No element of a bounded unit orbit satisfies the requested normalization."""


class NonResidue(TripleSymError):
    """Square root requested of a quadratic nonresidue."""


class NotCoprime(TripleSymError):
    """Residue symbol requested for an element lying in the prime."""


class HeightExhausted(TripleSymError):
    """A bounded search ran out of candidates.

    Surfaces as exit code 3 from the command line.
    """


class PreconditionFailed(TripleSymError):
    """Hypotheses of a construction do not hold for the given input."""


class WitnessFailed(TripleSymError):
    """A symbolic integrality or norm identity did not hold."""


class DegenerateSolution(TripleSymError):
    """Both residue candidates of the triple symbol vanish."""


class HypothesisViolated(TripleSymError):
    """A word fails the vanishing-coefficient hypothesis of an invariant."""


class InvalidPerturbation(TripleSymError):
    """A defining-system perturbation is not a cocycle."""


class NotACoboundary(TripleSymError):
    """The linear system d(b) = z has no solution."""
