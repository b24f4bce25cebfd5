"""Exception types shared across the package."""


class ScissorQKDError(Exception):
    """Base class for all package-specific failures."""


class DomainError(ScissorQKDError, ValueError):
    """Input lies outside the physically meaningful domain."""


class ValidationError(ScissorQKDError, ValueError):
    """A state or probability density failed an internal consistency check."""


class ConfigError(ScissorQKDError, ValueError):
    """Invalid run configuration (grids, node counts, CLI or config-file values)."""


class TruncationError(ScissorQKDError, RuntimeError):
    """Fock-space truncation too aggressive for the requested tolerance."""

    def __init__(self, message: str, tail_mass: float):
        super().__init__(f"{message} (estimated tail mass {tail_mass:.3e})")
        self.tail_mass = tail_mass


class DegenerateHeraldError(ScissorQKDError, ArithmeticError):
    """Herald probability vanished to numerical zero."""


class NumericalDomainError(ScissorQKDError, ArithmeticError):
    """A numerically computed quantity left its mathematical domain."""
