"""Exception hierarchy shared by all jostlab modules."""


class JostLabError(Exception):
    """Base class for every error raised by jostlab."""


# special functions
class PoleOfGamma(JostLabError, ValueError):
    """Argument sits on (or within 1e-12 of) a nonpositive integer."""


class NoConvergence(JostLabError, ArithmeticError):
    """A series hit ``max_terms`` before its tail criterion was met."""


class NonFiniteResult(JostLabError, ArithmeticError):
    """A public evaluation overflowed or produced NaN."""


class QuadratureFailure(JostLabError, ArithmeticError):
    """Adaptive quadrature exceeded its refinement limit."""


# scattering
class JostSingular(JostLabError, ArithmeticError):
    """Jost function evaluated at a pole of its Gamma prefactor."""


class IrregularSingular(JostLabError, ArithmeticError):
    """Irregular solution evaluated at one of its excluded integer orders."""


class SMatrixPole(JostLabError, ArithmeticError):
    """S(k) evaluated at one of its poles.

    ``kind`` is ``"gamma-pole"`` for the redundant poles k = in/(2a) and
    ``"bessel-zero"`` for zeros of the Jost function.
    """

    def __init__(self, message, kind, k=None, n=None):
        super().__init__(message)
        self.kind = kind
        self.k = k
        self.n = n


class OdeFailure(JostLabError, RuntimeError):
    """The numerical ODE integration did not complete."""


# spectrum
class BoundaryRootCollision(JostLabError, RuntimeError):
    """A root stays on a search-region boundary after all nudge attempts."""


class WindingMismatch(JostLabError, RuntimeError):
    """Found root multiplicities disagree with the boundary winding number."""


class UnclassifiableRoot(JostLabError, ValueError):
    """A root lies where no spectral feature may exist."""


class MultipleRoot(JostLabError, ValueError):
    """Residue formula requested at a root of multiplicity > 1."""


class ContourTooClose(JostLabError, ValueError):
    """A singularity lies on or too near the residue contour."""


class NotIsolated(JostLabError, ValueError):
    """More than one singularity is enclosed by the residue contour."""


# completeness
class NonPositiveBoundResidue(JostLabError, ArithmeticError):
    """A bound-state contour integral is not real and positive."""


# render
class EvaluationFailure(JostLabError, RuntimeError):
    """Per-pixel evaluation failure (recorded, never raised by the renderer)."""


class SinkWriteError(JostLabError, OSError):
    """Writing an image to its sink failed."""
