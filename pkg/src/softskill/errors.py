"""Exception hierarchy shared across the package."""


class SoftSkillError(Exception):
    """Base class for all package errors."""


class ParseError(SoftSkillError):
    """A data file could not be parsed.

    ``line`` is the 1-based line number when the failure is tied to one.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class InputError(SoftSkillError, ValueError):
    """Arguments violate an operation's preconditions."""


class ConfigurationError(SoftSkillError):
    """Inconsistent settings, e.g. a model run on the wrong representation."""


class TrainingError(SoftSkillError):
    """Training could not start or diverged."""


class CheckpointError(SoftSkillError):
    """A checkpoint file is corrupt, truncated or of an unknown version."""
