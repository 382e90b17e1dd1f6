"""Bregman function catalog and divergence verification toolkit."""

from ._bregkit import *  # noqa: F401,F403
from ._bregkit import __doc__  # noqa: F401
