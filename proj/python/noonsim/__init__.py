"""Two-photon cavity QED simulator: NOON-state protocols, sweeps and oracle checks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
