"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Lengths, indices or parameter sets do not line up."""


class FormatError(ValueError):
    """A serialized blob or file is malformed."""


class DecryptionFailure(Exception):
    """The envelope tag did not verify: wrong token, non-matching row, or tampering."""


class IncompatibleConstraints(ValueError):
    """No admissible row could be produced for a constraint set."""
