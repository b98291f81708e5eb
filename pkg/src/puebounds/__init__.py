"""Bounds on the probability of undetected error for quantum stabilizer codes."""

from .kraw_core import NoRoot, ParameterError

__version__ = "0.1.0"

__all__ = ["ParameterError", "NoRoot", "__version__"]
