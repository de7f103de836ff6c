"""Subwavelength bands and line-defect frequencies of bubbly square crystals."""

from ._bubblegap import *  # noqa: F401,F403
from ._bubblegap import __doc__  # noqa: F401
