"""Two 1D Euler domains coupled through a gas-generator interface."""
from .euler import GasParams, PrimState, ConsState
from .errors import CoupledGRPError, ConfigError, NumericalError

__all__ = ["GasParams", "PrimState", "ConsState", "CoupledGRPError", "ConfigError",
           "NumericalError"]
__version__ = "0.1.0"
