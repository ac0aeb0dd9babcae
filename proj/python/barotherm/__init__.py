"""Generalized 13-moment barothermal transport (compiled core)."""

from ._barotherm import *  # noqa: F401,F403
from ._barotherm import __doc__  # noqa: F401
