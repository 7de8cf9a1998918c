"""Exact phase-1 simplex for homogeneous margin systems.

Solves ``A @ theta >= 1`` over free ``theta`` with integer (fraction-free)
pivoting, so every verdict is exact. Feasible systems return a rational
solution; infeasible ones return Farkas multipliers ``y >= 0`` with
``A.T @ y == 0`` and ``sum(y) == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    feasible: bool
    solution: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    pivots: int = 0


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], list[int]]:
    out, scales = [], []
    for row in rows:
        scale = lcm(*(Fraction(v).denominator for v in row))
        out.append([int(Fraction(v) * scale) for v in row])
        scales.append(scale)
    return out, scales


def solve_margin_system(rows: Sequence[Sequence[Fraction]]) -> LPResult:
    """Decide ``rows @ theta >= 1`` exactly.

    Each row is scaled to integers first; scaling a row by a positive
    constant changes the margin but not feasibility, so the returned
    solution is rescaled afterwards to satisfy the original margins.
    """
    k = len(rows)
    if k == 0:
        return LPResult(True, solution=None)
    d = len(rows[0])
    irows, scales = _integer_rows(rows)

    # columns: theta+ (d) | theta- (d) | surplus (k) | artificial (k) | rhs
    n = 2 * d + 2 * k
    art0 = 2 * d + k
    rhs = n
    tab = []
    for i, row in enumerate(irows):
        line = [0] * (n + 1)
        for j, v in enumerate(row):
            line[j] = v
            line[d + j] = -v
        line[2 * d + i] = -1
        line[art0 + i] = 1
        line[rhs] = 1
        tab.append(line)
    # phase-1 reduced costs: minimise sum of artificials
    obj = [0] * (n + 1)
    for line in tab:
        for j in range(art0):
            obj[j] -= line[j]
        obj[rhs] -= line[rhs]
    basis = [art0 + i for i in range(k)]
    denom = 1
    pivots = 0

    while True:
        enter = -1
        for j in range(n):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        for i in range(k):
            a = tab[i][enter]
            if a <= 0:
                continue
            if leave < 0:
                leave = i
                continue
            # compare b_i / a_i against b_leave / a_leave, tie -> smaller basic index
            lhs = tab[i][rhs] * tab[leave][enter]
            rhs_cmp = tab[leave][rhs] * a
            if lhs < rhs_cmp or (lhs == rhs_cmp and basis[i] < basis[leave]):
                leave = i
        if leave < 0:
            # phase-1 objective is bounded below by zero
            raise AssertionError("unbounded phase-1 problem")
        prow = tab[leave]
        piv = prow[enter]
        for i in range(k):
            if i != leave:
                _eliminate(tab[i], prow, enter, piv, denom)
        _eliminate(obj, prow, enter, piv, denom)
        denom = piv
        basis[leave] = enter
        pivots += 1

    # obj[rhs] / denom == -(phase-1 optimum)
    if obj[rhs] == 0:
        values = [Fraction(0)] * n
        for i, var in enumerate(basis):
            values[var] = Fraction(tab[i][rhs], denom)
        theta = [values[j] - values[d + j] for j in range(d)]
        return LPResult(True, solution=_rescale(rows, theta), pivots=pivots)

    # y_i = 1 - reduced cost of artificial i, expressed for integer rows
    # row i was scaled by s_i, so its multiplier for the original row is y_i * s_i
    y = [Fraction((denom - obj[art0 + i]) * scales[i], denom) for i in range(k)]
    total = sum(y)
    return LPResult(False, farkas=tuple(v / total for v in y), pivots=pivots)


def _eliminate(line, prow, col, piv, denom):
    # Bareiss step: every quotient is exact
    f = line[col]
    if f:
        for j, (v, p) in enumerate(zip(line, prow)):
            line[j] = (v * piv - f * p) // denom
    elif piv != denom:
        for j, v in enumerate(line):
            line[j] = v * piv // denom


def _rescale(rows, theta):
    worst = min(sum(Fraction(a) * t for a, t in zip(row, theta)) for row in rows)
    if worst >= 1:
        return tuple(theta)
    return tuple(t / worst for t in theta)


def verify_solution(rows, theta, margin=1) -> bool:
    return all(sum(Fraction(a) * t for a, t in zip(row, theta)) >= margin for row in rows)


def verify_farkas(rows, y) -> bool:
    """True iff ``y`` proves ``rows @ theta >= 1`` has no solution."""
    if any(v < 0 for v in y) or sum(y) <= 0:
        return False
    d = len(rows[0])
    return all(sum(Fraction(rows[i][j]) * y[i] for i in range(len(rows))) == 0 for j in range(d))
