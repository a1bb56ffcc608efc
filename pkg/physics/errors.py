"""Exceptions raised by the simulation."""


class WeakSpinError(ValueError):
    """Base class for invalid inputs and numerically undefined quantities."""


class OrthogonalSelection(WeakSpinError):
    """The pre- and post-selected spin states are (numerically) orthogonal."""


class NonPositiveWidth(WeakSpinError):
    pass


class NonPositiveInputs(WeakSpinError):
    pass


class TanPole(WeakSpinError):
    """tan(theta / 2) diverges at theta = pi."""


class EmptyGrid(WeakSpinError):
    pass


class GridTooNarrow(WeakSpinError):
    """Too much probability falls outside the detector grid."""


class NoValidLimit(WeakSpinError):
    pass


class ConfigError(WeakSpinError):
    pass
