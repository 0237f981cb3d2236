"""Spatial field reconstruction and sensor selection for heterogeneous
sensor networks.

The heavy lifting lives in the compiled `_sblue` extension; this package
re-exports its surface.
"""

from _sblue import *  # noqa: F401,F403
from _sblue import __doc__  # noqa: F401
