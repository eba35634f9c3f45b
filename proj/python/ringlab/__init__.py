"""Basins of attraction in coupled oscillator rings.

Thin Python surface over the C++ core: couplings, phase-difference dynamics,
winding numbers, basin censuses with exact uniform-sum oracles, basin
geometry (master distance, rays, head size), and twisted-state stability.
"""

from ringlab._core import *  # noqa: F401,F403
from ringlab._core import __version__  # noqa: F401
