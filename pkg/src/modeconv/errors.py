"""Exception and warning types shared across the package."""


class ModeconvError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrixError(ModeconvError):
    """A linear system has no reliable solution (a pivot fell below threshold)."""


class NotHermitianError(ModeconvError):
    """A matrix required to be Hermitian deviates from its adjoint beyond tolerance."""


class NegativeDampingError(ModeconvError):
    """A mode damping rate is negative."""


class DuplicateLabelError(ModeconvError):
    """Two modes in one network share a label."""


class SingularAtFrequencyError(ModeconvError):
    """The dynamical matrix is singular at the requested drive frequency.

    Physically: the network has an undamped mode resonant at this frequency,
    so no steady state exists.  The offending frequency is stored in ``omega``.
    """

    def __init__(self, omega: float, message: str | None = None):
        self.omega = omega
        super().__init__(message or f"dynamical matrix is singular at omega={omega!r}")


class NoPortsError(ModeconvError):
    """The network has no damped modes, so there are no input-output ports."""


class ZeroDetuningError(ModeconvError):
    """An atom has a zero detuning where a dispersive expression divides by it."""

    def __init__(self, atom_index: int, message: str | None = None):
        self.atom_index = atom_index
        super().__init__(message or f"atom {atom_index} has zero detuning")


class EmptyEnsembleError(ModeconvError):
    """An atomic ensemble with no atoms was supplied."""


class DegenerateParametersError(ModeconvError):
    """The requested quantity is undefined for this parameter combination."""


class StepTooLargeError(ModeconvError):
    """The integration step cannot resolve the fastest rate in the network."""


class NonConvergentError(ModeconvError):
    """The time-domain response did not settle onto a steady state."""


class HighMismatchWarning(UserWarning):
    """The ensemble's bright optical and microwave modes overlap poorly.

    Adiabatic elimination onto a single intermediate mode loses the orthogonal
    component of the coupling, so the reduced model degrades as the mismatch grows.
    """
