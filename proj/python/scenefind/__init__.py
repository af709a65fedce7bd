"""Similar traffic scene search over highD-format recordings."""

from ._scenefind import *  # noqa: F401,F403
from ._scenefind import __version__  # noqa: F401
