"""Dispersive decay, Strichartz and smoothing estimates for phases g(delta |xi|).

The main entry points are re-exported here; see the submodules for details.
"""

__version__ = "0.1.0"

from .abcd import AbcdClassification, classify, verify_p_nondegeneracy
from .decay import (DecayPrediction, SlopeFit, all_predictions, delta_scaling_experiment,
                    fit_slope, predict, run_decay_experiment)
from .errors import (ConfigError, DispersiveError, DomainError, FitError, ParameterError,
                     PredictionError, QuadratureError)
from .grid import GridFunction, gaussian, propagate_grid
from .littlewood_paley import FrequencyBand, parse_band
from .oscillatory import SearchSpec, band_integral, integral_1d, integral_2d_radial, sup_over_x
from .phases import KINDS, PhaseModel, make_model
from .smoothing import (SmoothingSpec, kato_morawetz_integral, local_energy_curve,
                        sup_x_time_integral_1d)
from .strichartz import AdmissiblePair, is_sharp_admissible, strichartz_quotient

__all__ = [
    "AbcdClassification", "AdmissiblePair", "ConfigError", "DecayPrediction", "DispersiveError",
    "DomainError", "FitError", "FrequencyBand", "GridFunction", "KINDS", "ParameterError",
    "PhaseModel", "PredictionError", "QuadratureError", "SearchSpec", "SlopeFit",
    "SmoothingSpec", "all_predictions", "band_integral", "classify", "delta_scaling_experiment",
    "fit_slope", "gaussian", "integral_1d", "integral_2d_radial", "is_sharp_admissible",
    "kato_morawetz_integral", "local_energy_curve", "make_model", "parse_band", "predict",
    "propagate_grid", "run_decay_experiment", "strichartz_quotient", "sup_over_x",
    "sup_x_time_integral_1d", "verify_p_nondegeneracy",
]
