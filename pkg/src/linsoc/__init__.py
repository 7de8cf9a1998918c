"""Rank aggregation when every output must be induced by a linear reward function."""

from .axioms import (
    AxiomReport,
    check_majority_consistency,
    check_pareto,
    check_pmc,
    check_separability,
    check_winner_monotonicity,
    pmc_ranking,
)
from .feasibility import (
    ConstraintSet,
    EnumerationCapError,
    ParameterVector,
    Separation,
    enumerate_feasible_rankings,
    find_separating_theta,
    induced_ranking,
    is_feasible,
    verify_certificate,
)
from .fixtures import Fixture, fixture
from .io import gen_profile, parse_profile, serialize_profile
from .losses import LOSSES, LossSpec, get_loss, loss_value
from .model import (
    Instance,
    ModelError,
    PairwiseStats,
    Profile,
    Ranking,
    copeland_scores,
    pairwise_counts,
    plurality_scores,
)
from .rules_c1 import RuleReport, copeland_ranking, lcpo, leximax_copeland, leximax_plurality, pareto_pairs
from .rules_opt import (
    GroupOrder,
    OptResult,
    kemeny_score,
    linear_kemeny,
    linear_kemeny_po,
    loss_rule,
    region_infimum,
)

__version__ = "0.1.0"
