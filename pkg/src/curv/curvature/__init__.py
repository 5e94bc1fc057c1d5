"""Forman and Ollivier curvature with LP certificates."""
from .certificate import (FINITE, INFINITE, UNBOUNDED_BELOW, CurvatureCertificate,
                          InfiniteDistanceError, KantorovichPlan, MissingCycleError,
                          PenaltyTransportPlan)
from .forman import (check_condition_a_prime, check_maxmin_dual, check_oneform, condition_a,
                     condition_b, cycle_coboundary, diagonal_split, forman, forman_all,
                     is_minimally_diagonally_dominant, max_forman_edge, maxmin_forman, oneform_value)
from .ollivier import ollivier_cell, ollivier_edge, ollivier_oneform, two_cells_through
from .transport import (cycle_weights_to_transport, kantorovich_curvature, pair_cycle,
                        penalty_transport_curvature, reroute_plan, transport_to_cycle_weights)
from ._common import default_candidates

__all__ = [
    "FINITE", "INFINITE", "UNBOUNDED_BELOW", "CurvatureCertificate", "InfiniteDistanceError",
    "KantorovichPlan", "MissingCycleError", "PenaltyTransportPlan",
    "check_condition_a_prime", "check_maxmin_dual", "check_oneform", "condition_a", "condition_b",
    "cycle_coboundary", "diagonal_split", "forman", "forman_all", "is_minimally_diagonally_dominant",
    "max_forman_edge", "maxmin_forman", "oneform_value",
    "ollivier_cell", "ollivier_edge", "ollivier_oneform", "two_cells_through",
    "cycle_weights_to_transport", "kantorovich_curvature", "pair_cycle",
    "penalty_transport_curvature", "reroute_plan", "transport_to_cycle_weights",
    "default_candidates",
]
