"""Single-photon excitation of a two-level atom by spectrally phase-coded pulses."""

from ._codedphoton import *  # noqa: F401,F403
from ._codedphoton import __version__  # noqa: F401
