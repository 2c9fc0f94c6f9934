"""Sample-size planning for one-time-grab multi-structure model fitting.

The heavy lifting lives in the compiled `_core` extension; this package
re-exports its public names.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
