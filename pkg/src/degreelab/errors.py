"""Exception hierarchy shared across the lab."""


class LabError(ValueError):
    """Base class for all domain errors raised by this package."""


# -- graded spaces and correspondences ---------------------------------------

class DimensionAsymmetry(LabError):
    """dims[k] != dims[2n-k] for some degree k."""


class SingularPairing(LabError):
    """A pairing matrix is rank-deficient."""


class SpaceMismatch(LabError):
    """Operands live on different graded spaces."""


class DegreeOutOfRange(LabError):
    """Degree index outside 0..2n."""


class MissingAmple(LabError):
    """Operation needs ample powers but the space carries none."""


class NotEffective(LabError):
    """Effectivity flag set but some degree component is negative."""


class NoFactorization(LabError):
    """A map does not descend through the numerical quotients."""


# -- spectral analysis --------------------------------------------------------

class SingularMatrix(LabError):
    """Exact inversion of a singular matrix."""


class NonConvergence(LabError):
    """Iterative radius estimate failed to stabilize within the cap."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAnEigenvalue(LabError):
    """Jordan profile requested at a value that is not an eigenvalue."""


class IllConditionedFit(LabError):
    """Growth-rate fit residual exceeds the acceptance threshold."""


# -- iterate systems and degrees ----------------------------------------------

class OutOfRange(LabError):
    """Iterate index outside the stored range of a list-mode system."""


class DivergenceSuspected(LabError):
    """t-th roots still growing at the iteration horizon."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


# -- envelopes ----------------------------------------------------------------

class DuplicateAbscissa(LabError):
    """Two input points share an abscissa."""


class NegativeValue(LabError):
    """Envelope input value below zero."""


class LengthMismatch(LabError):
    """Sequence lengths inconsistent with the stated half-dimension."""


class OutOfDomain(LabError):
    """Envelope evaluated outside its domain."""


class ConcavityViolation(LabError):
    """Breakpoint data whose log-space slopes are not strictly decreasing."""


# -- twisting -----------------------------------------------------------------

class NonPositiveR(LabError):
    """Scaling operator requested at r <= 0."""


class SingularBlock(LabError):
    """Negative twist power of a singular block."""


# -- constructions ------------------------------------------------------------

class NotWeil(LabError):
    """Polynomial roots do not all have the required modulus."""


class NonCommuting(LabError):
    """Planted endomorphism does not commute with the Frobenius model."""


class BadCodimension(LabError):
    """Blowup codimension below 1."""


# -- input files --------------------------------------------------------------

class InputError(LabError):
    """Malformed model or sequence file; carries a field-level diagnostic."""

    def __init__(self, message, field=None, line=None):
        detail = message
        if field is not None:
            detail = f"{field}: {detail}"
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.field = field
        self.line = line
