"""
Exception hierarchy for the covert coding lab.
Every error raised on purpose by the library derives from CovertLabError.
"""


class CovertLabError(Exception):
    """Base class for all lab errors."""


class ConfigurationError(CovertLabError, ValueError):
    """Invalid configuration: field degree, channel invariants, schema."""


class ContractError(CovertLabError, ValueError):
    """A caller violated an operation precondition."""


class DomainError(CovertLabError, ValueError):
    """A numeric function was evaluated outside its domain."""


class InfeasibleDesignError(CovertLabError):
    """No admissible design exists for the requested instance."""

    def __init__(self, message: str, constraint: str = ""):
        super().__init__(message)
        self.constraint = constraint


class ScaleError(CovertLabError):
    """A memory, enumeration or exactness cap would be exceeded."""


class RsDecodeFailure(CovertLabError):
    """Uncorrectable Reed-Solomon pattern (an in-band outcome)."""
