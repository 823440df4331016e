"""Error types that callers (and the CLI exit-code mapping) distinguish."""


class CapacityError(Exception):
    """Requested simulation exceeds the supported qubit budget."""


class PlanError(ValueError):
    """A budget plan is infeasible or does not cover the work."""


class ConfigError(ValueError):
    """A run configuration failed validation."""
