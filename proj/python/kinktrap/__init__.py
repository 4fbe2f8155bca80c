"""Scattering of a bound particle pair off a Gaussian well."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
