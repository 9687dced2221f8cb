"""Heavy-tailed ballistic deposition laboratory.

Forward interface dynamics, the exact backward last-passage evaluation of the
origin height, the continuous scaling-limit value, the Bernoulli-height
auxiliary model, and an experiment harness verifying the scaling limits and
the vanishing-sticking phase transition at desk scale.
"""

__version__ = "0.1.0"

from .bbd import BbdConfig, bbd_height, scaling_exponent
from .cone import AttainableSet, Cone, attainable, build_cone, lpp_height, max_collect_count
from .continuum import ChainResult, WeightedPoint, compatible, h_k, remainder_estimate, rotate, sample_points
from .dists import Bernoulli, Pareto, WeightSequence, a_scale, c_centering, sample_height, weight_sequence
from .experiments import (
    convergence_experiment,
    derive_seed,
    zeta_critical,
    discrete_height,
    discrete_heights,
    moment_check,
    phase_sweep,
    rd_heights,
    rd_limit_check,
)
from .field import DepositionEvent, EventField, FieldSeed, SiteStream, resolve_marks, site_stream
from .forward import BlockLog, Interface, Torus, Window, apply_event, run, window_is_exact
from .stats import Ecdf, ks_distance, ks_distance_to_cdf, loglog_slope

__all__ = [
    "__version__",
    "Pareto", "Bernoulli", "WeightSequence", "sample_height", "a_scale", "c_centering", "weight_sequence",
    "FieldSeed", "DepositionEvent", "SiteStream", "EventField", "site_stream", "resolve_marks",
    "Torus", "Window", "Interface", "BlockLog", "apply_event", "run", "window_is_exact",
    "Cone", "AttainableSet", "build_cone", "attainable", "lpp_height", "max_collect_count",
    "WeightedPoint", "ChainResult", "sample_points", "compatible", "rotate", "h_k", "remainder_estimate",
    "BbdConfig", "bbd_height", "scaling_exponent",
    "Ecdf", "ks_distance", "ks_distance_to_cdf", "loglog_slope",
    "derive_seed", "discrete_height", "discrete_heights", "convergence_experiment",
    "phase_sweep", "rd_heights", "rd_limit_check", "moment_check", "zeta_critical",
]
