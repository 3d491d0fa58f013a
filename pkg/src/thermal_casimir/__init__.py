"""Thermal Casimir pressure, free energy and entropy between parallel plates."""
__version__ = "0.1.0"

from .units import EvaluationPoint, effective_temperature, thermal_regime  # noqa: E402
from .lifshitz import (NumericSettings, free_energy, pressure_matsubara,  # noqa: E402
                       pressure_zero_temperature, thermal_correction)
from .materials import material  # noqa: E402

__all__ = ["__version__", "EvaluationPoint", "effective_temperature", "thermal_regime",
           "NumericSettings", "free_energy", "pressure_matsubara", "pressure_zero_temperature",
           "thermal_correction", "material"]
