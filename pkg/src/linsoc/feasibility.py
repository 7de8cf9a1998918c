"""Exact feasibility of pairwise reward constraints.

A constraint ``(a, b)`` asks for ``<theta, x_a> >= <theta, x_b> + 1``. Any
positive margin is equivalent up to scaling theta, so a satisfiable set
means some nondegenerate linear reward strictly orders every constrained
pair as requested.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lp import solve_margin_system
from .model import Instance, ModelError, Ranking, check_ranking

DEFAULT_ENUMERATION_CAP = 10


class EnumerationCapError(ModelError):
    pass


@dataclass(frozen=True)
class ParameterVector:
    coords: tuple
    exact: bool = True

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(c) for c in self.coords)

    def scaled(self, c) -> "ParameterVector":
        return ParameterVector(tuple(c * v for v in self.coords), self.exact)

    @classmethod
    def of(cls, values: Iterable) -> "ParameterVector":
        values = tuple(values)
        if all(isinstance(v, (int, Fraction)) for v in values):
            return cls(tuple(Fraction(v) for v in values), True)
        return cls(tuple(float(v) for v in values), False)


class ConstraintSet(frozenset):
    """Ordered pairs (a, b) meaning "a strictly above b"."""

    def __new__(cls, pairs: Iterable[tuple[str, str]] = ()):
        pairs = frozenset((a, b) for a, b in pairs)
        for a, b in pairs:
            if a == b:
                raise ModelError(f"constraint ({a!r}, {a!r}) compares a candidate with itself")
            if (b, a) in pairs:
                raise ModelError(f"constraints contain both ({a!r}, {b!r}) and its reverse")
        return super().__new__(cls, pairs)

    def __or__(self, other):
        return ConstraintSet(frozenset.__or__(self, frozenset(other)))


@dataclass(frozen=True)
class Separation:
    """Outcome of a margin LP: a witness theta, or Farkas multipliers per pair."""

    theta: ParameterVector | None
    certificate: dict | None = None

    @property
    def feasible(self) -> bool:
        return self.theta is not None


def _find_cycle(pairs):
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, []).append(b)
    state = {}
    stack_path = []

    def visit(u):
        state[u] = 1
        stack_path.append(u)
        for v in sorted(succ.get(u, ())):
            if state.get(v) == 1:
                return stack_path[stack_path.index(v):] + [v]
            if v not in state:
                found = visit(v)
                if found:
                    return found
        stack_path.pop()
        state[u] = 2
        return None

    for u in sorted(succ):
        if u not in state:
            found = visit(u)
            if found:
                return found
    return None


def transitive_reduction(pairs: Iterable[tuple[str, str]]) -> frozenset:
    """Drop pairs implied by chains of other pairs (input must be acyclic)."""
    pairs = set(pairs)
    succ = {}
    for a, b in pairs:
        succ.setdefault(a, set()).add(b)
    reach = {}

    def reachable(u):
        if u not in reach:
            out = set()
            for v in succ.get(u, ()):
                out.add(v)
                out |= reachable(v)
            reach[u] = out
        return reach[u]

    keep = set()
    for a, b in pairs:
        if not any(b in reachable(w) for w in succ[a] if w != b):
            keep.add((a, b))
    return frozenset(keep)


def find_separating_theta(instance: Instance, constraints: Iterable[tuple[str, str]]) -> Separation:
    """Exact theta with margin >= 1 on every pair, or a Farkas certificate.

    The certificate maps pairs to nonnegative multipliers whose weighted sum
    of difference vectors ``x_a - x_b`` is zero while the margins sum to one.
    """
    pairs = frozenset(constraints)
    for a, b in pairs:
        instance.index(a)
        instance.index(b)
        if a == b:
            raise ModelError(f"constraint ({a!r}, {a!r}) compares a candidate with itself")
    cycle = _find_cycle(pairs)
    if cycle is not None:
        edges = list(zip(cycle, cycle[1:]))
        w = Fraction(1, len(edges))
        return Separation(None, {e: w for e in edges})
    reduced = transitive_reduction(pairs)
    cache = instance._cache.setdefault("separation", {})
    hit = cache.get(reduced)
    if hit is not None:
        return hit
    order = sorted(reduced)
    if not order:
        result = Separation(ParameterVector(tuple(Fraction(0) for _ in range(instance.dimension))))
    else:
        rows = [instance.difference(a, b) for a, b in order]
        lp = solve_margin_system(rows)
        if lp.feasible:
            result = Separation(ParameterVector(lp.solution))
        else:
            result = Separation(None, {p: y for p, y in zip(order, lp.farkas) if y})
    cache[reduced] = result
    return result


def verify_certificate(instance: Instance, certificate: dict) -> bool:
    """Re-check Farkas multipliers by exact arithmetic."""
    if not certificate or any(y < 0 for y in certificate.values()):
        return False
    if sum(certificate.values()) <= 0:
        return False
    total = [Fraction(0)] * instance.dimension
    for (a, b), y in certificate.items():
        for j, v in enumerate(instance.difference(a, b)):
            total[j] += y * v
    return all(v == 0 for v in total)


def satisfies(instance: Instance, theta: Sequence, pairs: Iterable[tuple[str, str]], margin=1) -> bool:
    return all(instance.reward(theta, a) - instance.reward(theta, b) >= margin for a, b in pairs)


def prefix_constraints(prefix: Sequence[str], remaining: Iterable[str]) -> set:
    """Chain of the prefix plus its last member above every unranked candidate."""
    pairs = set(zip(prefix, prefix[1:]))
    if prefix:
        last = prefix[-1]
        pairs.update((last, u) for u in remaining if u != last)
    return pairs


def is_feasible(instance: Instance, ranking: Sequence[str]) -> tuple[bool, ParameterVector | None]:
    ranking = check_ranking(instance, ranking)
    sep = find_separating_theta(instance, ranking.chain())
    return sep.feasible, sep.theta


def ranking_certificate(instance: Instance, ranking: Sequence[str]) -> dict | None:
    ranking = check_ranking(instance, ranking)
    return find_separating_theta(instance, ranking.chain()).certificate


def _exact_rewards(instance: Instance, theta) -> dict[str, Fraction]:
    coords = [Fraction(t) for t in theta]
    if len(coords) != instance.dimension:
        raise ModelError(f"theta has {len(coords)} coordinates, instance dimension is {instance.dimension}")
    return {c: sum(t * x for t, x in zip(coords, instance.feature(c))) for c in instance.ids}


def complete_ranking(instance: Instance, required: Iterable[tuple[str, str]], eligible=None) -> tuple[Ranking, ParameterVector]:
    """Lexicographically smallest feasible ranking containing ``required``.

    ``eligible(prefix, remaining)`` may narrow the candidates tried at each
    position; the LP check guarantees the greedy choice never dead-ends.
    """
    required = set(required)
    prefix: list[str] = []
    remaining = sorted(instance.ids)
    witness = None
    while remaining:
        options = remaining if eligible is None else eligible(prefix, remaining)
        for c in options:
            rest = [u for u in remaining if u != c]
            sep = find_separating_theta(instance, required | prefix_constraints(prefix + [c], rest))
            if sep.feasible:
                prefix.append(c)
                remaining = rest
                witness = sep.theta
                break
        else:
            raise ModelError("no feasible ranking satisfies the required pairs")
    return Ranking(prefix), witness


def induced_ranking(instance: Instance, theta) -> Ranking:
    return induced_ranking_with_witness(instance, theta)[0]


def induced_ranking_with_witness(instance: Instance, theta) -> tuple[Ranking, ParameterVector]:
    """Feasible ranking consistent with every strict reward comparison of theta.

    Ties in reward are completed to the lexicographically smallest feasible
    ranking.
    """
    rewards = _exact_rewards(instance, theta)
    values = sorted(set(rewards.values()), reverse=True)
    if len(values) == instance.m:
        order = sorted(instance.ids, key=lambda c: rewards[c], reverse=True)
        gap = min((a - b for a, b in zip(values, values[1:])), default=Fraction(1))
        coords = tuple(Fraction(t) / gap for t in theta)
        return Ranking(order), ParameterVector(coords)

    strict = {(a, b) for a in instance.ids for b in instance.ids if rewards[a] > rewards[b]}

    def top_reward(prefix, remaining):
        best = max(rewards[c] for c in remaining)
        return [c for c in remaining if rewards[c] == best]

    return complete_ranking(instance, transitive_reduction(strict), eligible=top_reward)


def enumerate_feasible_rankings(instance: Instance, cap: int | None = DEFAULT_ENUMERATION_CAP, required=()) -> dict[Ranking, ParameterVector]:
    """All feasible rankings (containing ``required`` pairs) with witnesses.

    Depth-first prefix extension; a prefix survives only if some feasible
    ranking extends it, so every leaf is feasible.
    """
    if cap is not None and instance.m > cap:
        raise EnumerationCapError(f"{instance.m} candidates exceeds the enumeration cap of {cap}")
    required = set(required)
    out: dict[Ranking, ParameterVector] = {}

    def extend(prefix, remaining):
        for c in remaining:
            rest = [u for u in remaining if u != c]
            sep = find_separating_theta(instance, required | prefix_constraints(prefix + [c], rest))
            if not sep.feasible:
                continue
            if len(rest) <= 1:
                out[Ranking(prefix + [c] + rest)] = sep.theta
            else:
                extend(prefix + [c], rest)

    if instance.m == 1:
        return {Ranking(instance.ids): ParameterVector(tuple(Fraction(0) for _ in range(instance.dimension)))}
    extend([], sorted(instance.ids))
    return dict(sorted(out.items()))
