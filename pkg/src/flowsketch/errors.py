class FlowsketchError(Exception):
    """Base class for every error raised by flowsketch.

    `exit_code` is what the CLI exits with when the error escapes a subcommand.
    """

    exit_code = 1


class ConfigurationError(FlowsketchError, ValueError):
    """Invalid sketch, experiment or environment configuration."""

    exit_code = 2


class DomainError(FlowsketchError, ValueError):
    """A numeric argument outside the domain of the operation."""

    exit_code = 2


class InsufficientFlowsError(FlowsketchError, ValueError):
    """The oracle holds fewer distinct flows than the requested top-k."""

    exit_code = 2


class FormatError(FlowsketchError, ValueError):
    """A snapshot, trace or config file that does not match its format."""

    exit_code = 2


class ConfigMismatchError(FlowsketchError, ValueError):
    """Two sketches with different (depth, width, master_seed) were combined."""


class CounterOverflowError(FlowsketchError, OverflowError):
    """A 64-bit counter would wrap."""
