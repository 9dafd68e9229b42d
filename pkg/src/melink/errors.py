"""Exception types shared across the simulator."""


class ParameterError(ValueError):
    """A physical or configuration parameter is outside its valid domain."""


class MeasurementError(RuntimeError):
    """A requested measurement is undefined for the given waveform."""


class NumericalError(RuntimeError):
    """The numerical solve failed (singular system, divergence)."""


class LinkFailure(RuntimeError):
    """The link missed a timing contract (magnet failed to switch or reset)."""
