"""Heralded cavity-QED gate simulations (Python front end of the C++ core)."""

from ._herald import *  # noqa: F401,F403
from ._herald import __doc__  # noqa: F401

__version__ = "0.1.0"
