"""Exception hierarchy shared by every module.

The split mirrors the process exit codes of the CLI: domain errors are
bad arguments or violated preconditions, capacity errors are explicit
budget refusals, and unsupported-instance errors mark inputs that fall
outside a construction's defined cases (a domain-level condition).
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ToolkitError):
    """An argument or precondition is invalid for the requested operation."""


class CapacityError(ToolkitError):
    """The request exceeds a configured enumeration or search budget."""


class UnsupportedInstanceError(DomainError):
    """The input lies outside every defined case of a construction."""
