"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class LimitExceededError(RuntimeError):
    """A configurable resource cap (horizon, lattice size, search depth) was hit."""


class ParseError(ValueError):
    """An input file or JSON document could not be interpreted."""
