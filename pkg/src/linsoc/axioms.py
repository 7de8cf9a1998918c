"""Per-profile axiom checks with explicit witnesses.

A ``rule`` is any callable taking a Profile and returning a Ranking, a
RuleReport (``.output``) or an OptResult (``.ranking``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .feasibility import is_feasible
from .model import ModelError, Profile, Ranking, check_ranking, pairwise_counts
from .rules_c1 import pareto_pairs

PASS = "pass"
VIOLATION = "violation"
VACUOUS = "vacuous"


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    verdict: str
    witnesses: tuple = ()
    details: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.verdict == VIOLATION and not self.witnesses:
            raise ValueError("a violation needs at least one witness")

    @property
    def ok(self) -> bool:
        return self.verdict != VIOLATION


def rule_output(result) -> Ranking:
    if isinstance(result, Ranking):
        return result
    for attr in ("output", "ranking"):
        if hasattr(result, attr):
            return getattr(result, attr)
    return Ranking(result)


def _run(rule: Callable, profile: Profile) -> Ranking:
    return rule_output(rule(profile))


def check_pareto(profile: Profile, ranking) -> AxiomReport:
    ranking = check_ranking(profile.instance, ranking)
    bad = tuple(sorted((a, b) for a, b in pareto_pairs(profile) if ranking.above(b, a)))
    return AxiomReport("pareto", VIOLATION if bad else PASS, bad)


def pmc_ranking(profile: Profile) -> tuple[Ranking, bool] | None:
    """The strict-majority order with its feasibility flag, if it is a total order.

    When the majority relation is complete and transitive, candidate c beats
    exactly m-1-k others for its position k, so sorting by win count
    recovers the order; any tie or cycle makes that check fail.
    """
    stats = pairwise_counts(profile)
    ids = profile.instance.ids
    wins = {a: sum(1 for b in ids if b != a and stats.beats(a, b)) for a in ids}
    order = sorted(ids, key=lambda c: -wins[c])
    m = len(ids)
    if sorted(wins.values()) != list(range(m)):
        return None
    for i in range(m):
        for j in range(i + 1, m):
            if not stats.beats(order[i], order[j]):
                return None
    ranking = Ranking(order)
    return ranking, is_feasible(profile.instance, ranking)[0]


def _flipped(expected: Ranking, got: Ranking) -> tuple:
    return tuple((a, b) for a, b in expected.pairs() if got.above(b, a))


def check_pmc(rule: Callable, profile: Profile) -> AxiomReport:
    found = pmc_ranking(profile)
    if found is None or not found[1]:
        reason = "no PMC ranking" if found is None else "PMC ranking infeasible"
        return AxiomReport("pmc", VACUOUS, (), {"reason": reason})
    target = found[0]
    out = _run(rule, profile)
    bad = _flipped(target, out)
    return AxiomReport("pmc", VIOLATION if bad else PASS, bad, {"pmc": target, "output": out})


def majority_winner(profile: Profile) -> str | None:
    tops = {}
    for r in profile.rankings:
        tops[r[0]] = tops.get(r[0], 0) + 1
    for c, k in tops.items():
        if 2 * k > profile.n:
            return c
    return None


def check_majority_consistency(rule: Callable, profile: Profile) -> AxiomReport:
    winner = majority_winner(profile)
    if winner is None:
        return AxiomReport("majority-consistency", VACUOUS, (), {"reason": "no majority winner"})
    out = _run(rule, profile)
    if out[0] == winner:
        return AxiomReport("majority-consistency", PASS, (), {"winner": winner, "output": out})
    return AxiomReport("majority-consistency", VIOLATION, ((winner, out[0]),), {"winner": winner, "output": out})


def elevate(ranking: Ranking, cid: str, k: int) -> Ranking:
    """Move ``cid`` up by k positions; the others keep their relative order."""
    pos = ranking.position(cid)
    if not 1 <= k <= pos:
        raise ModelError(f"cannot raise {cid!r} by {k} from position {pos + 1}")
    rest = [c for c in ranking if c != cid]
    rest.insert(pos - k, cid)
    return Ranking(rest)


def check_winner_monotonicity(rule: Callable, profile: Profile) -> AxiomReport:
    """Probe every feasible single-voter elevation of the current winner.

    Sound for violations only: the axiom quantifies over all elevations,
    while this probe covers single-voter, order-preserving, feasible ones.
    """
    winner = _run(rule, profile)[0]
    bad = []
    tried = 0
    for idx, (vid, ranking) in enumerate(profile.voters):
        for k in range(1, ranking.position(winner) + 1):
            moved = elevate(ranking, winner, k)
            if not is_feasible(profile.instance, moved)[0]:
                continue
            tried += 1
            top = _run(rule, profile.replace_voter(idx, moved))[0]
            if top != winner:
                bad.append((vid, k, tuple(moved), top))
    details = {"winner": winner, "elevations": tried}
    if not tried:
        return AxiomReport("winner-monotonicity", VACUOUS, (), details)
    return AxiomReport("winner-monotonicity", VIOLATION if bad else PASS, tuple(bad), details)


def check_separability(rule: Callable, profile1: Profile, profile2: Profile) -> AxiomReport:
    """Equal outputs on two profiles must survive their concatenation.

    Witnesses are the pairs the combined output flips.
    """
    if profile1.instance != profile2.instance:
        raise ModelError("profiles do not share an instance")
    o1 = _run(rule, profile1)
    o2 = _run(rule, profile2)
    if o1 != o2:
        return AxiomReport("separability", VACUOUS, (), {"outputs": (o1, o2)})
    combined = _run(rule, profile1.combine(profile2))
    bad = _flipped(o1, combined)
    return AxiomReport("separability", VIOLATION if bad else PASS, bad, {"output": o1, "combined": combined})
