"""Optimisation-based rules: linear Kemeny (optionally subject to PO) and loss rules.

Loss rules are evaluated by definition: every feasible ranking's region is
searched for its loss infimum and the ranking with the smallest infimum
wins. Infima are often attained only as theta grows without bound, which is
why the descent reports the final norm and a divergence flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import descent
from .feasibility import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    ParameterVector,
    enumerate_feasible_rankings,
    find_separating_theta,
    is_feasible,
    prefix_constraints,
)
from .losses import STANDARD, LossSpec, check_mode, difference_rows, get_loss, pair_weights
from .model import ModelError, Profile, Ranking, check_ranking, pairwise_counts
from .rules_c1 import pareto_pairs

REL_TOL = 1e-6
ABS_TOL = 1e-9
NORM_CAP = 1e6


@dataclass(frozen=True)
class OptResult:
    ranking: Ranking
    value: float
    theta: ParameterVector
    infima: dict | None = field(default=None, repr=False)
    rule: str = ""


@dataclass(frozen=True)
class GroupOrder:
    """Forced between-group order; only within-group permutations are searched."""

    groups: tuple[tuple[str, ...], ...]

    def __init__(self, groups: Iterable[Iterable[str]]):
        object.__setattr__(self, "groups", tuple(tuple(g) for g in groups))

    def check(self, instance) -> None:
        flat = [c for g in self.groups for c in g]
        if sorted(flat) != sorted(instance.ids):
            raise ModelError("group order must partition the candidates")


@dataclass(frozen=True)
class RegionInfimum:
    value: float
    theta: ParameterVector
    norm: float
    diverged: bool
    status: str
    iterations: int


def kemeny_score(ranking: Sequence[str], profile: Profile) -> int:
    """Number of (voter, pair) disagreements with ``ranking``."""
    ranking = check_ranking(profile.instance, ranking)
    stats = pairwise_counts(profile)
    return sum(stats.counts[(b, a)] for a, b in ranking.pairs())


def _restricted_rankings(instance, order: GroupOrder, required) -> dict[Ranking, ParameterVector]:
    order.check(instance)
    required = set(required)
    out = {}

    def extend(prefix, g, left):
        if not left:
            if g + 1 == len(order.groups):
                out[Ranking(prefix)] = witness[0]
                return
            g += 1
            left = list(order.groups[g])
        for c in sorted(left):
            rest_group = [u for u in left if u != c]
            unranked = [u for u in instance.ids if u not in prefix and u != c]
            sep = find_separating_theta(instance, required | prefix_constraints(prefix + [c], unranked))
            if sep.feasible:
                witness[0] = sep.theta
                extend(prefix + [c], g, rest_group)

    witness = [None]
    extend([], -1, [])
    return dict(sorted(out.items()))


def _candidate_rankings(profile: Profile, search, required, cap) -> dict[Ranking, ParameterVector]:
    if search is None or search == "full":
        return enumerate_feasible_rankings(profile.instance, cap=cap, required=required)
    if isinstance(search, GroupOrder):
        return _restricted_rankings(profile.instance, search, required)
    raise ModelError(f"unknown search {search!r}")


def _kemeny(profile, search, required, cap, tie_break, name) -> OptResult:
    stats = pairwise_counts(profile)
    family = _candidate_rankings(profile, search, required, cap)
    scores = {r: sum(stats.counts[(b, a)] for a, b in r.pairs()) for r in family}
    priority = {tuple(r): i for i, r in reversed(list(enumerate(tie_break)))}
    best = min(scores, key=lambda r: (scores[r], priority.get(tuple(r), len(priority)), tuple(r)))
    return OptResult(best, float(scores[best]), family[best], None, name)


def linear_kemeny(profile: Profile, search=None, cap: int | None = DEFAULT_ENUMERATION_CAP,
                  tie_break: Sequence[Sequence[str]] = ()) -> OptResult:
    """Feasible ranking with the fewest pairwise disagreements.

    ``search`` is None for full enumeration or a GroupOrder restricting the
    family to within-group permutations. Ties go to the earliest ranking
    listed in ``tie_break``, then to the lexicographically smallest.
    """
    return _kemeny(profile, search, (), cap, tie_break, "kemeny")


def linear_kemeny_po(profile: Profile, search=None, cap: int | None = DEFAULT_ENUMERATION_CAP,
                     tie_break: Sequence[Sequence[str]] = ()) -> OptResult:
    """Linear Kemeny over feasible rankings that keep every unanimous pair."""
    return _kemeny(profile, search, pareto_pairs(profile), cap, tie_break, "kemeny-po")


def _cone_rows(instance, ranking: Ranking) -> list[list[float]]:
    rows = []
    for a, b in ranking.chain():
        v = [float(x) for x in instance.difference(a, b)]
        n = math.sqrt(sum(x * x for x in v))
        rows.append([x / n for x in v])
    return rows


def region_infimum(profile: Profile, loss: str | LossSpec, ranking: Sequence[str], mode: str = STANDARD,
                   witness: ParameterVector | None = None) -> RegionInfimum:
    """Infimum of the loss over the closed region where ``ranking`` is weakly induced.

    Descent starts from the better of the origin and the ranking's LP
    witness. A final norm above the cap flags divergence: the infimum is
    approached only in the limit.
    """
    spec = get_loss(loss)
    check_mode(mode)
    inst = profile.instance
    ranking = check_ranking(inst, ranking)
    if witness is None:
        ok, witness = is_feasible(inst, ranking)
        if not ok:
            raise ModelError(f"ranking {ranking!r} is infeasible")
    rows, w = difference_rows(profile, pair_weights(profile, mode))
    d = inst.dimension
    if not rows:
        zero = ParameterVector(tuple(0.0 for _ in range(d)), exact=False)
        return RegionInfimum(0.0, zero, 0.0, False, descent.STATUS_NAMES[descent.CONVERGED], 0)
    G = _cone_rows(inst, ranking)
    start = [0.0] * d
    wt = [float(v) for v in witness]
    if descent.total_loss(rows, w, wt, spec.code) < descent.total_loss(rows, w, start, spec.code):
        start = wt
    theta, value, iters, status = descent.minimize_on_cone(rows, w, G, spec.code, start, norm_cap=NORM_CAP)
    norm = math.sqrt(sum(t * t for t in theta))
    return RegionInfimum(
        float(value),
        ParameterVector(tuple(float(t) for t in theta), exact=False),
        norm,
        status == descent.DIVERGED or norm > NORM_CAP,
        descent.STATUS_NAMES[status],
        int(iters),
    )


def pick_minimum(values: dict, rel_tol: float = REL_TOL, abs_tol: float = ABS_TOL):
    """Lexicographically smallest key whose value is within tolerance of the minimum."""
    low = min(values.values())
    slack = rel_tol * abs(low) + abs_tol
    return min(r for r, v in values.items() if v <= low + slack)


def loss_rule(profile: Profile, loss: str | LossSpec, mode: str = STANDARD,
              cap: int | None = DEFAULT_ENUMERATION_CAP) -> OptResult:
    """Feasible ranking whose region infimum attains the global minimum (within tolerance)."""
    spec = get_loss(loss)
    family = enumerate_feasible_rankings(profile.instance, cap=cap)
    found = {r: region_infimum(profile, spec, r, mode, witness=wit) for r, wit in family.items()}
    infima = {r: f.value for r, f in found.items()}
    best = pick_minimum(infima)
    name = f"loss:{spec.kind}" if mode == STANDARD else f"majority-loss:{spec.kind}"
    return OptResult(best, infima[best], found[best].theta, infima, name)


__all__ = [
    "EnumerationCapError",
    "GroupOrder",
    "OptResult",
    "RegionInfimum",
    "kemeny_score",
    "linear_kemeny",
    "linear_kemeny_po",
    "loss_rule",
    "pick_minimum",
    "region_infimum",
]
