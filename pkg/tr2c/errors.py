""" Exceptions raised across tr2c.

Every exception subclasses a builtin (``ValueError`` or ``RuntimeError``) so callers may
keep catching the builtin. The command line maps ``ValueError`` to exit code 2 and
``RuntimeError`` to exit code 1.
"""


class Tr2cError(Exception):
    """ Base class of all tr2c errors. """


class InvalidInputError(Tr2cError, ValueError):
    """ Input array or argument violates a precondition (shape, finiteness, range). """


class InvalidPartitionError(InvalidInputError):
    """ Partition has an empty class or a label out of range. """


class InvalidConfigError(Tr2cError, ValueError):
    """ Configuration value is out of its domain or the key is unknown. """


class IngestionError(InvalidInputError):
    """ Feature matrix, label or checkpoint file cannot be parsed. """


class NumericalFailure(Tr2cError, RuntimeError):
    """ Non-finite value appeared during training or a forward pass.

    Parameters
    ----------
    message : str
        human-readable description.
    iteration : int or None
        training iteration (0-based) at which the failure occured.
    term : str or None
        name of the offending loss term or network layer.
    """
    def __init__(self, message, iteration=None, term=None):
        super().__init__(message)
        self.iteration = iteration
        self.term = term


class InternalError(Tr2cError, RuntimeError):
    """ State that valid inputs cannot produce (e.g. failed Cholesky of I + PSD). """
