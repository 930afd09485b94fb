"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class KernelFormatError(ValueError):
    """A kernel cache file is malformed, truncated or inconsistent."""


class ConsistencyError(RuntimeError):
    """A numerical self-check failed, which points at a basis or kernel bug."""
