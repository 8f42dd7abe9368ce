"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter lies outside the domain where an operation is defined."""


class SpecMismatchError(ValueError):
    """Two fields (or a field and its spectrum) live on different grids."""


class NumericalGuardError(RuntimeError):
    """A numerical safeguard tripped (Nyquist, residual, noise floor).

    The computation could be run, but its result would not be trustworthy
    at the current grid resolution.
    """


class NyquistError(NumericalGuardError):
    """A frequency box does not fit inside the grid's frequency range."""


class ResidualError(NumericalGuardError):
    """Energy above the finest layer is not negligible."""
