"""Exception taxonomy for the affina package.

Every error raised on purpose by the library derives from :class:`AffinaError`,
so callers (and the CLI) can distinguish domain failures from plain bugs.
"""


class AffinaError(Exception):
    """Base class for all library-raised errors."""


class OrderMismatchError(AffinaError):
    """Two jets of different truncation order were combined."""


class SingularJetError(AffinaError):
    """A jet power/inverse was requested at a singular constant term."""


class InvalidFormError(AffinaError):
    """Normal-form parameters are inconsistent (unknown name, bad order, k = 0, ...)."""


class WrongChartError(AffinaError):
    """A surface jet does not match the chart an operation requires."""


class ParabolicPointError(AffinaError):
    """Pointwise frame data requested where h_uu*h_vv - h_uv^2 vanishes."""


class NotDiscriminantPointError(AffinaError):
    """Folded-singularity classification at a point not on the discriminant."""


class DegenerateUmbilicError(AffinaError):
    """Umbilic classification invariants vanish within tolerance."""


class NoRealDirectionError(AffinaError):
    """No real root direction exists where one was required."""


class SingularZeroSetError(AffinaError):
    """Implicit-curve tracing hit a point where the gradient vanishes."""


class DegeneratePortraitError(AffinaError):
    """Blow-up portrait has a non-hyperbolic singular angle."""


class InvalidSceneError(AffinaError):
    """A render scene is malformed (empty window, bad layer)."""


class NumericalInconsistencyError(AffinaError):
    """Two independent internal routes to the same quantity disagree."""


class SpecFileError(AffinaError):
    """A surface spec file failed validation."""
