"""Classical signal emulation of gate-based quantum circuits."""

from ._qse import *  # noqa: F401,F403
from ._qse import __doc__  # noqa: F401
