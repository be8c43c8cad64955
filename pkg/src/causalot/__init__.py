"""Causal order and Lorentz-Wasserstein distance for discrete measures on finite spacetimes."""

from .characterize import (
    check_condition_4,
    check_condition_5,
    check_condition_8_slices,
    enumerate_future_sets,
    falsify_condition_2,
    monotone_closure,
    property_suite,
    volume_functions,
)
from .exceptions import CapacityError, InputError, UnsupportedModelError
from .measure import Coupling, DiscreteMeasure, diagonal, dirac, glue, marginals, product, pushforward
from .spacetime import (
    INF,
    CausalGraphModel,
    LadderClass,
    MinkowskiModel,
    causally_precedes,
    chronologically_precedes,
    classify_ladder,
    future_of,
    horismos,
    lorentz_distance,
    past_of,
    time_reverse,
    topological_order,
)
from .transport import (
    Certificate,
    PrecedenceResult,
    check_precedence,
    lorentz_wasserstein,
    max_violation,
    minimize_certificate,
    verify_certificate,
    verify_coupling,
)

__version__ = "0.1.0"
