"""Majority- and score-based rules with a leximax feasibility transform."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .feasibility import ConstraintSet, ParameterVector, find_separating_theta, prefix_constraints
from .model import Profile, Ranking, copeland_scores, pairwise_counts, plurality_scores


@dataclass(frozen=True)
class TraceStep:
    position: int
    candidate: str
    score: int
    feasible: bool


@dataclass(frozen=True)
class RuleReport:
    rule: str
    output: Ranking
    witness: ParameterVector
    trace: tuple[TraceStep, ...] = field(default=(), repr=False)


def score_order(scores: Mapping[str, int]) -> list[str]:
    """Descending score; equal scores in lexicographic id order."""
    return sorted(scores, key=lambda c: (-scores[c], c))


def copeland_ranking(profile: Profile) -> Ranking:
    """Classical Copeland ranking; may be infeasible for the instance."""
    return Ranking(score_order(copeland_scores(profile)))


def pareto_pairs(profile: Profile) -> ConstraintSet:
    stats = pairwise_counts(profile)
    return ConstraintSet(pair for pair, k in stats.counts.items() if k == stats.n)


def leximax(profile: Profile, scores: Mapping[str, int], name: str, required=()) -> RuleReport:
    """Fill positions greedily with the best-scored feasibly placeable candidate.

    A candidate is placeable at the next position when the fixed prefix, the
    candidate above every unranked one, and ``required`` are jointly
    satisfiable by some linear reward.
    """
    instance = profile.instance
    required = set(required)
    order = score_order(scores)
    prefix: list[str] = []
    trace = []
    witness = None
    while len(prefix) < instance.m:
        remaining = [c for c in order if c not in prefix]
        for c in remaining:
            rest = [u for u in remaining if u != c]
            sep = find_separating_theta(instance, required | prefix_constraints(prefix + [c], rest))
            trace.append(TraceStep(len(prefix), c, scores[c], sep.feasible))
            if sep.feasible:
                prefix.append(c)
                witness = sep.theta
                break
        else:
            # unreachable for valid profiles: every voter ranking satisfies the constraints
            raise RuntimeError(f"{name}: no feasible candidate for position {len(prefix) + 1}")
    return RuleReport(name, Ranking(prefix), witness, tuple(trace))


def leximax_copeland(profile: Profile) -> RuleReport:
    return leximax(profile, copeland_scores(profile), "leximax-copeland")


def lcpo(profile: Profile) -> RuleReport:
    """Leximax Copeland with every unanimous pair enforced."""
    return leximax(profile, copeland_scores(profile), "lcpo", required=pareto_pairs(profile))


def leximax_plurality(profile: Profile) -> RuleReport:
    return leximax(profile, plurality_scores(profile), "leximax-plurality")


RULES: dict[str, Callable[[Profile], RuleReport]] = {
    "leximax-copeland": leximax_copeland,
    "lcpo": lcpo,
    "leximax-plurality": leximax_plurality,
}
