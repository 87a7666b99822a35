"""Amortized orthogonality encryption and secure selective streams."""

from .errors import DecryptionFailure, FormatError, IncompatibleConstraints, ParameterError

__all__ = ["DecryptionFailure", "FormatError", "IncompatibleConstraints", "ParameterError"]
__version__ = "0.1.0"
