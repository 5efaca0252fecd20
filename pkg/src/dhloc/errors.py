"""Exceptions shared across the package."""

from __future__ import annotations


class DhlocError(Exception):
    """Base class for domain errors; the CLI maps these to exit code 1."""


class NotAbsolutelyContinuous(DhlocError):
    """Vector configuration does not span, or has a lineality direction."""


class NonGenericPoint(DhlocError):
    """Evaluation point lies on a wall where the density is undefined."""


class IncompatibleSubspaces(DhlocError):
    """Convolution of two terms with conflicting Lebesgue factors."""


class DirectionOutsideSpan(DhlocError):
    """Derivative direction not in the span of a term's cone generators."""


class LowerDimensionalTerm(DhlocError):
    """Term is not absolutely continuous; it has no pointwise density."""


class ZeroPairing(DhlocError):
    """A weight pairs to zero with the polarization vector (non-generic data)."""


class MissingChernEntry(DhlocError):
    """Chern/moment table lacks an entry required by the inverse-Euler series."""


class ModelError(DhlocError):
    """Model file failed to parse or validate."""
