"""Exception types shared by all structures."""


class ApdsError(Exception):
    """Base class for all errors raised by this package."""


class OutOfRangeError(ApdsError):
    """A position, symbol, or index argument is outside its valid range."""


class NotFoundError(ApdsError):
    """A select-style query asked for an occurrence that does not exist."""


class InputError(ApdsError):
    """Invalid construction input: empty sequence, bad symbol, non-bijective
    permutation, non-surjective function, or a bad parameter value."""


class UnsupportedOperationError(ApdsError):
    """The structure was built without the component this query requires."""
