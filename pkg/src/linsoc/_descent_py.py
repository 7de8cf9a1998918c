"""Pure-Python descent kernel; mirrors ``_descent.pyx`` operation for operation.

Minimises ``sum_p w[p] * loss(D[p] @ theta)`` over the polyhedral cone
``{theta : G @ theta >= 0}`` by projected gradient steps with backtracking.
Projection onto the cone is exact: nonnegative least squares on the polar
cone (Lawson-Hanson active set).
"""

import math

BCE, HINGE, EXPONENTIAL, SQUARED = 0, 1, 2, 3
CONVERGED, DIVERGED, ITERATION_CAP, STALLED, SUBGRADIENT = 0, 1, 2, 3, 4

_EXP_MAX = 709.0


def loss_scalar(kind, x):
    if kind == BCE:
        if x > 0:
            return x + math.log1p(math.exp(-x))
        return math.log1p(math.exp(x))
    if kind == HINGE:
        return 1.0 + x if x > -1.0 else 0.0
    if kind == EXPONENTIAL:
        return math.exp(x) if x < _EXP_MAX else math.inf
    return (1.0 + x) * (1.0 + x)


def loss_slope(kind, x):
    if kind == BCE:
        if x >= 0:
            return 1.0 / (1.0 + math.exp(-x))
        e = math.exp(x)
        return e / (1.0 + e)
    if kind == HINGE:
        return 1.0 if x > -1.0 else 0.0
    if kind == EXPONENTIAL:
        return math.exp(x) if x < _EXP_MAX else math.inf
    return 2.0 * (1.0 + x)


def total_loss(D, w, theta, kind):
    total = 0.0
    d = len(theta)
    for p in range(len(w)):
        row = D[p]
        x = 0.0
        for j in range(d):
            x += row[j] * theta[j]
        total += w[p] * loss_scalar(kind, x)
    return total


def _gradient(D, w, theta, kind):
    d = len(theta)
    g = [0.0] * d
    for p in range(len(w)):
        row = D[p]
        x = 0.0
        for j in range(d):
            x += row[j] * theta[j]
        s = w[p] * loss_slope(kind, x)
        for j in range(d):
            g[j] += s * row[j]
    return g


def _solve_normal(G, P, b):
    """Least squares over the columns G[P]: solve (A_P^T A_P) s = A_P^T b."""
    n = len(P)
    d = len(b)
    M = [[sum(G[P[r]][j] * G[P[c]][j] for j in range(d)) for c in range(n)] + [sum(G[P[r]][j] * b[j] for j in range(d))]
         for r in range(n)]
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(M[r][c]))
        M[c], M[piv] = M[piv], M[c]
        if M[c][c] == 0.0:
            return None
        for r in range(n):
            if r != c and M[r][c] != 0.0:
                f = M[r][c] / M[c][c]
                for q in range(c, n + 1):
                    M[r][q] -= f * M[c][q]
    return [M[r][n] / M[r][r] for r in range(n)]


def project_cone(G, y, tol=1e-12):
    """Euclidean projection of y onto {theta : G @ theta >= 0}; rows of G are unit.

    Lawson-Hanson NNLS on the polar cone: minimise |y + G^T lam| over
    lam >= 0, then return y + G^T lam.
    """
    d = len(y)
    k = len(G)
    x = list(y)
    if all(sum(G[r][j] * x[j] for j in range(d)) >= 0 for r in range(k)):
        return x
    b = [-v for v in y]
    scale = tol * (1.0 + math.sqrt(sum(v * v for v in y)))
    lam = [0.0] * k
    passive = []
    blocked = []
    for _ in range(10 * k + 10):
        resid = [b[j] - sum(G[r][j] * lam[r] for r in passive) for j in range(d)]
        enter, w_best = -1, scale
        for r in range(k):
            if r in passive or r in blocked:
                continue
            wr = sum(G[r][j] * resid[j] for j in range(d))
            if wr > w_best:
                enter, w_best = r, wr
        if enter < 0:
            break
        passive.append(enter)
        while True:
            s = _solve_normal(G, passive, b)
            if s is None:
                passive.remove(enter)
                blocked.append(enter)
                break
            if min(s) > 0:
                for r, v in zip(passive, s):
                    lam[r] = v
                blocked = []
                break
            alpha, stop = min((lam[r] / (lam[r] - v), r) for r, v in zip(passive, s) if v <= 0)
            for r, v in zip(passive, s):
                lam[r] += alpha * (v - lam[r])
            # the blocking index must leave even if rounding left it slightly positive
            lam[stop] = 0.0
            passive = [r for r in passive if lam[r] > 0]
            for r in range(k):
                if r not in passive:
                    lam[r] = 0.0
            if not passive:
                break
    return [y[j] + sum(G[r][j] * lam[r] for r in passive) for j in range(d)]


def minimize_on_cone(D, w, G, kind, theta0, max_iter=100000, rel_tol=1e-10, window=100, norm_cap=1e6,
                     floor=1e-300, subgradient_iters=20000):
    """Return (theta, value, iterations, status).

    Backtracking projected gradient first; if backtracking collapses (a kink
    of a nonsmooth loss), continue with diminishing-step projected
    subgradient steps and keep the best iterate.
    """
    theta = project_cone(G, theta0)
    f = total_loss(D, w, theta, kind)
    d = len(theta)
    step = 1.0
    history = [f]
    status = ITERATION_CAP
    it = 0
    while it < max_iter:
        it += 1
        if f <= floor:
            status = CONVERGED
            break
        g = _gradient(D, w, theta, kind)
        while True:
            trial = project_cone(G, [theta[j] - step * g[j] for j in range(d)])
            lin = 0.0
            sq = 0.0
            for j in range(d):
                dj = trial[j] - theta[j]
                lin += g[j] * dj
                sq += dj * dj
            ft = total_loss(D, w, trial, kind)
            if ft <= f and ft <= f + lin + sq / (2.0 * step):
                break
            step *= 0.5
            if step < 1e-30:
                break
        if step < 1e-30 or sq == 0.0:
            status = STALLED if step < 1e-30 else CONVERGED
            break
        theta = trial
        f = ft
        step *= 2.0
        history.append(f)
        norm = math.sqrt(sum(t * t for t in theta))
        if norm > norm_cap:
            status = DIVERGED
            break
        if len(history) > window:
            old = history[-window - 1]
            if old - f <= rel_tol * abs(old):
                status = CONVERGED
                break
    if status == STALLED and subgradient_iters > 0:
        theta, f, extra = _subgradient_phase(D, w, G, kind, theta, f, subgradient_iters)
        it += extra
        status = SUBGRADIENT
    return theta, f, it, status


def _subgradient_phase(D, w, G, kind, theta, f, iters):
    d = len(theta)
    best, fbest = list(theta), f
    radius = 0.1 * max(1.0, math.sqrt(sum(t * t for t in theta)))
    for k in range(iters):
        g = _gradient(D, w, theta, kind)
        gn = math.sqrt(sum(v * v for v in g))
        if gn == 0.0 or not math.isfinite(gn):
            break
        step = radius / (gn * math.sqrt(k + 1.0))
        theta = project_cone(G, [theta[j] - step * g[j] for j in range(d)])
        f = total_loss(D, w, theta, kind)
        if f < fbest:
            best, fbest = list(theta), f
    return best, fbest, iters
