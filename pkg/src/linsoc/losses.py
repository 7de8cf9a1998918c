"""Pairwise loss functions and the two loss formulations over a profile."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import descent
from .model import ModelError, Profile, pairwise_counts

STANDARD = "standard"
MAJORITY = "majority"
MODES = (STANDARD, MAJORITY)


@dataclass(frozen=True)
class LossSpec:
    """A loss l(x) applied to the reward gap r(b) - r(a) of a pair a > b."""

    kind: str
    code: int
    nondecreasing: bool
    weakly_convex: bool
    strictly_convex: bool
    infimum: float = 0.0

    def __call__(self, x: float) -> float:
        return descent.loss_scalar(self.code, x)

    def slope(self, x: float) -> float:
        return descent.loss_slope(self.code, x)


LOSSES = {
    "bce": LossSpec("bce", descent.BCE, True, True, False),
    "hinge": LossSpec("hinge", descent.HINGE, True, True, False),
    "exponential": LossSpec("exponential", descent.EXPONENTIAL, True, True, True),
    "squared": LossSpec("squared", descent.SQUARED, False, True, True),
}

ALIASES = {"binary-cross-entropy": "bce", "exp": "exponential"}


def get_loss(kind: str | LossSpec) -> LossSpec:
    if isinstance(kind, LossSpec):
        return kind
    key = ALIASES.get(kind, kind)
    try:
        return LOSSES[key]
    except KeyError:
        raise ModelError(f"unknown loss {kind!r}; choose from {sorted(LOSSES)}") from None


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ModelError(f"unknown loss mode {mode!r}; choose from {MODES}")
    return mode


def pair_weights(profile: Profile, mode: str = STANDARD) -> dict[tuple[str, str], int]:
    """Weight of the term l(r(b) - r(a)) for each ordered pair (a, b); zero weights dropped.

    Standard weights are n_{a>b}; majority weights are 1 exactly when a
    beats b by strict majority.
    """
    check_mode(mode)
    stats = pairwise_counts(profile)
    if mode == STANDARD:
        return {p: k for p, k in stats.counts.items() if k}
    return {(a, b): 1 for (a, b) in stats.counts if stats.beats(a, b)}


def difference_rows(profile: Profile, weights: dict) -> tuple[list[list[float]], list[float]]:
    """Rows x_b - x_a (so that row . theta is the gap) and their weights, in sorted pair order."""
    inst = profile.instance
    rows, w = [], []
    for a, b in sorted(weights):
        rows.append([float(v) for v in inst.difference(b, a)])
        w.append(float(weights[(a, b)]))
    return rows, w


def loss_value(theta: Sequence, profile: Profile, loss: str | LossSpec, mode: str = STANDARD) -> float:
    """Total pairwise loss at theta; exponential overflow evaluates to +inf."""
    spec = get_loss(loss)
    inst = profile.instance
    if len(theta) != inst.dimension:
        raise ModelError(f"theta has {len(theta)} coordinates, instance dimension is {inst.dimension}")
    t = [float(v) for v in theta]
    rewards = {c: math.fsum(ti * float(xi) for ti, xi in zip(t, inst.feature(c))) for c in inst.ids}
    total = 0.0
    for (a, b), k in sorted(pair_weights(profile, mode).items()):
        total += k * spec(rewards[b] - rewards[a])
    return total
