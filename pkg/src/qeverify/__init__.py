"""High-precision Whittaker-function, archimedean-integral and unfolding-identity numerics."""
from mpmath import mp

from .special_core import DEFAULT_BITS

mp.prec = DEFAULT_BITS

__version__ = "0.1.0"
