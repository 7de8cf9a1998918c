"""Instances, rankings, profiles and pairwise statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class ModelError(ValueError):
    """Raised when an instance, ranking or profile violates the model."""


@dataclass(frozen=True, eq=False)
class Instance:
    """Candidates with distinct rational feature vectors in R^d."""

    dimension: int
    ids: tuple[str, ...]
    features: tuple[tuple[Fraction, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ModelError(f"dimension must be positive, got {self.dimension}")
        if len(self.ids) != len(self.features):
            raise ModelError("ids and features differ in length")
        if len(set(self.ids)) != len(self.ids):
            dupes = sorted({c for c in self.ids if self.ids.count(c) > 1})
            raise ModelError(f"duplicate candidate ids: {dupes}")
        for cid, x in zip(self.ids, self.features):
            if len(x) != self.dimension:
                raise ModelError(f"candidate {cid!r} has {len(x)} features, expected {self.dimension}")
        seen = {}
        for cid, x in zip(self.ids, self.features):
            if x in seen:
                raise ModelError(f"candidates {seen[x]!r} and {cid!r} share a feature vector")
            seen[x] = cid
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.ids)})
        object.__setattr__(self, "_cache", {})

    @classmethod
    def from_features(cls, candidates: Mapping[str, Sequence] | Iterable[tuple[str, Sequence]]) -> "Instance":
        items = list(candidates.items()) if isinstance(candidates, Mapping) else list(candidates)
        if not items:
            raise ModelError("an instance needs at least one candidate")
        feats = tuple(tuple(Fraction(v) for v in x) for _, x in items)
        return cls(len(feats[0]), tuple(c for c, _ in items), feats)

    @property
    def m(self) -> int:
        return len(self.ids)

    def __len__(self):
        return len(self.ids)

    def __contains__(self, cid):
        return cid in self._index

    def feature(self, cid: str) -> tuple[Fraction, ...]:
        try:
            return self.features[self._index[cid]]
        except KeyError:
            raise ModelError(f"unknown candidate id {cid!r}") from None

    def index(self, cid: str) -> int:
        try:
            return self._index[cid]
        except KeyError:
            raise ModelError(f"unknown candidate id {cid!r}") from None

    def difference(self, a: str, b: str) -> tuple[Fraction, ...]:
        """x_a - x_b, the normal of the hyperplane where a and b tie."""
        return tuple(u - v for u, v in zip(self.feature(a), self.feature(b)))

    def reward(self, theta: Sequence, cid: str):
        return sum(t * x for t, x in zip(theta, self.feature(cid)))

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.ids == other.ids and self.features == other.features

    def __hash__(self):
        return hash((self.ids, self.features))


class Ranking(tuple):
    """Strict total order over candidate ids, best first."""

    def __new__(cls, order: Iterable[str]):
        order = tuple(order)
        if len(set(order)) != len(order):
            raise ModelError(f"ranking repeats a candidate: {order}")
        return super().__new__(cls, order)

    def position(self, cid: str) -> int:
        return self.index(cid)

    def above(self, a: str, b: str) -> bool:
        return self.index(a) < self.index(b)

    def pairs(self):
        """All ordered pairs (a, b) with a ranked above b."""
        return [(self[i], self[j]) for i in range(len(self)) for j in range(i + 1, len(self))]

    def chain(self):
        return list(zip(self, self[1:]))

    def reversed(self) -> "Ranking":
        return Ranking(self[::-1])

    def __repr__(self):
        return "Ranking(" + " > ".join(self) + ")"


def check_ranking(instance: Instance, ranking: Sequence[str]) -> Ranking:
    ranking = ranking if isinstance(ranking, Ranking) else Ranking(ranking)
    if len(ranking) != instance.m or set(ranking) != set(instance.ids):
        missing = set(instance.ids) - set(ranking)
        extra = set(ranking) - set(instance.ids)
        raise ModelError(f"ranking does not permute the candidates (missing {sorted(missing)}, unknown {sorted(extra)})")
    return ranking


@dataclass(frozen=True)
class Profile:
    """An instance plus one feasible ranking per voter.

    Every ranking is checked for feasibility on construction.
    """

    instance: Instance
    voters: tuple[tuple[str, Ranking], ...]

    def __post_init__(self):
        from .feasibility import is_feasible

        if not self.voters:
            raise ModelError("a profile needs at least one voter")
        ids = [v for v, _ in self.voters]
        if len(set(ids)) != len(ids):
            raise ModelError("duplicate voter ids")
        voters = []
        for vid, ranking in self.voters:
            ranking = check_ranking(self.instance, ranking)
            ok, _ = is_feasible(self.instance, ranking)
            if not ok:
                raise ModelError(f"voter {vid!r} has an infeasible ranking {ranking!r}")
            voters.append((vid, ranking))
        object.__setattr__(self, "voters", tuple(voters))

    @classmethod
    def from_rankings(cls, instance: Instance, rankings: Iterable[Sequence[str]], prefix: str = "v") -> "Profile":
        return cls(instance, tuple((f"{prefix}{i + 1}", Ranking(r)) for i, r in enumerate(rankings)))

    @property
    def n(self) -> int:
        return len(self.voters)

    @property
    def rankings(self) -> list[Ranking]:
        return [r for _, r in self.voters]

    def combine(self, other: "Profile") -> "Profile":
        """Concatenate voter lists over a shared instance; voter ids are re-labelled."""
        if other.instance != self.instance:
            raise ModelError("profiles do not share an instance")
        return Profile.from_rankings(self.instance, self.rankings + other.rankings)

    def replace_voter(self, index: int, ranking: Sequence[str]) -> "Profile":
        voters = list(self.voters)
        voters[index] = (voters[index][0], Ranking(ranking))
        return Profile(self.instance, tuple(voters))


@dataclass(frozen=True)
class PairwiseStats:
    """n_{a>b} for every ordered pair of distinct candidates."""

    ids: tuple[str, ...]
    counts: Mapping[tuple[str, str], int]
    n: int

    def count(self, a: str, b: str) -> int:
        return self.counts[(a, b)]

    def share(self, a: str, b: str) -> Fraction:
        return Fraction(self.counts[(a, b)], self.n)

    def beats(self, a: str, b: str) -> bool:
        """Strict majority: w_{a>b} > 1/2."""
        return 2 * self.counts[(a, b)] > self.n

    def majority_graph(self) -> dict[frozenset, str | None]:
        """Winner of each unordered pair, or None on an exact tie."""
        graph = {}
        for i, a in enumerate(self.ids):
            for b in self.ids[i + 1:]:
                if self.beats(a, b):
                    graph[frozenset((a, b))] = a
                elif self.beats(b, a):
                    graph[frozenset((a, b))] = b
                else:
                    graph[frozenset((a, b))] = None
        return graph


def pairwise_counts(profile: Profile) -> PairwiseStats:
    ids = profile.instance.ids
    counts = {(a, b): 0 for a in ids for b in ids if a != b}
    for _, ranking in profile.voters:
        for a, b in ranking.pairs():
            counts[(a, b)] += 1
    return PairwiseStats(ids, counts, profile.n)


def copeland_scores(profile: Profile | PairwiseStats) -> dict[str, int]:
    stats = profile if isinstance(profile, PairwiseStats) else pairwise_counts(profile)
    return {a: sum(1 for b in stats.ids if b != a and stats.beats(a, b)) for a in stats.ids}


def plurality_scores(profile: Profile) -> dict[str, int]:
    scores = dict.fromkeys(profile.instance.ids, 0)
    for _, ranking in profile.voters:
        scores[ranking[0]] += 1
    return scores
