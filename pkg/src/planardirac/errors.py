"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DomainError and
NonConvergenceError -> 3. Check or comparison failures are reported, not
raised, and exit with 1.
"""


class PlanarDiracError(Exception):
    """Base class for package errors."""


class ConfigError(PlanarDiracError):
    """Invalid or inconsistent run configuration."""


class DomainError(PlanarDiracError):
    """Input outside an operator's mathematical domain (e.g. mass <= 0)."""


class NonConvergenceError(PlanarDiracError):
    """An iterative scheme failed to meet its tolerance within budget."""
