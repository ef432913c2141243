from mapforge._core import *  # noqa: F401,F403
from mapforge._core import __version__  # noqa: F401
