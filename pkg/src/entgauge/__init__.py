"""Entanglement gauges q_K for distinguishable, bosonic and fermionic systems."""

__version__ = "0.1.0"

from . import decompositions, norm, state_io, tensor_core  # noqa: E402
from .errors import EntgaugeError, InvalidArgument  # noqa: E402
from .tensor_core import DensityFunctional, PureState, SymmetrySector  # noqa: E402

__all__ = [
    "DensityFunctional",
    "EntgaugeError",
    "InvalidArgument",
    "PureState",
    "SymmetrySector",
    "decompositions",
    "norm",
    "state_io",
    "tensor_core",
]
