# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled descent kernel; same algorithm and results as ``_descent_py``."""

from libc.math cimport exp, log1p, sqrt, INFINITY
from libc.stdlib cimport malloc, free

cdef enum:
    BCE = 0
    HINGE = 1
    EXPONENTIAL = 2
    SQUARED = 3

cdef int CONVERGED = 0, DIVERGED = 1, ITERATION_CAP = 2, STALLED = 3, SUBGRADIENT = 4
cdef double EXP_MAX = 709.0


cdef inline double loss_c(int kind, double x) nogil:
    if kind == BCE:
        if x > 0:
            return x + log1p(exp(-x))
        return log1p(exp(x))
    if kind == HINGE:
        return 1.0 + x if x > -1.0 else 0.0
    if kind == EXPONENTIAL:
        return exp(x) if x < EXP_MAX else INFINITY
    return (1.0 + x) * (1.0 + x)


cdef inline double slope_c(int kind, double x) nogil:
    cdef double e
    if kind == BCE:
        if x >= 0:
            return 1.0 / (1.0 + exp(-x))
        e = exp(x)
        return e / (1.0 + e)
    if kind == HINGE:
        return 1.0 if x > -1.0 else 0.0
    if kind == EXPONENTIAL:
        return exp(x) if x < EXP_MAX else INFINITY
    return 2.0 * (1.0 + x)


cdef double total_c(double[:, ::1] D, double[::1] w, double* theta, int kind) nogil:
    cdef Py_ssize_t p, j
    cdef double total = 0.0, x
    for p in range(D.shape[0]):
        x = 0.0
        for j in range(D.shape[1]):
            x += D[p, j] * theta[j]
        total += w[p] * loss_c(kind, x)
    return total


cdef void gradient_c(double[:, ::1] D, double[::1] w, double* theta, int kind, double* g) nogil:
    cdef Py_ssize_t p, j
    cdef double x, s
    for j in range(D.shape[1]):
        g[j] = 0.0
    for p in range(D.shape[0]):
        x = 0.0
        for j in range(D.shape[1]):
            x += D[p, j] * theta[j]
        s = w[p] * slope_c(kind, x)
        for j in range(D.shape[1]):
            g[j] += s * D[p, j]


cdef struct Work:
    double* lam
    double* resid
    double* M
    double* sol
    int* passive
    char* blocked


cdef Work* work_new(Py_ssize_t k, Py_ssize_t d) nogil:
    cdef Work* w = <Work*> malloc(sizeof(Work))
    cdef Py_ssize_t kk = k if k > 0 else 1
    w.lam = <double*> malloc(kk * sizeof(double))
    w.resid = <double*> malloc((d if d > 0 else 1) * sizeof(double))
    w.M = <double*> malloc(kk * (kk + 1) * sizeof(double))
    w.sol = <double*> malloc(kk * sizeof(double))
    w.passive = <int*> malloc(kk * sizeof(int))
    w.blocked = <char*> malloc(kk * sizeof(char))
    return w


cdef void work_free(Work* w) nogil:
    free(w.lam)
    free(w.resid)
    free(w.M)
    free(w.sol)
    free(w.passive)
    free(w.blocked)
    free(w)


cdef bint solve_normal_c(double[:, ::1] G, int* P, int n, double* b, Work* w) nogil:
    # (A_P^T A_P) s = A_P^T b by Gauss-Jordan with partial pivoting; False if singular
    cdef Py_ssize_t d = G.shape[1], r, c, q, j, piv
    cdef int width = n + 1
    cdef double acc, f, tmp, big
    for r in range(n):
        for c in range(n):
            acc = 0.0
            for j in range(d):
                acc += G[P[r], j] * G[P[c], j]
            w.M[r * width + c] = acc
        acc = 0.0
        for j in range(d):
            acc += G[P[r], j] * b[j]
        w.M[r * width + n] = acc
    for c in range(n):
        piv = c
        big = w.M[c * width + c] if w.M[c * width + c] >= 0 else -w.M[c * width + c]
        for r in range(c + 1, n):
            tmp = w.M[r * width + c] if w.M[r * width + c] >= 0 else -w.M[r * width + c]
            if tmp > big:
                big = tmp
                piv = r
        if piv != c:
            for q in range(width):
                tmp = w.M[c * width + q]
                w.M[c * width + q] = w.M[piv * width + q]
                w.M[piv * width + q] = tmp
        if w.M[c * width + c] == 0.0:
            return False
        for r in range(n):
            if r != c and w.M[r * width + c] != 0.0:
                f = w.M[r * width + c] / w.M[c * width + c]
                for q in range(c, width):
                    w.M[r * width + q] -= f * w.M[c * width + q]
    for r in range(n):
        w.sol[r] = w.M[r * width + n] / w.M[r * width + r]
    return True


cdef void project_c(double[:, ::1] G, double* y, double* x, Work* w, double* b, double tol) nogil:
    cdef Py_ssize_t d = G.shape[1], k = G.shape[0], r, j, q
    cdef int npass = 0, enter, outer, i, keep, stop
    cdef double dot, scale = 0.0, wbest, wr, alpha, cand, smin
    cdef bint feasible = True, member
    for j in range(d):
        x[j] = y[j]
        scale += y[j] * y[j]
    for r in range(k):
        dot = 0.0
        for j in range(d):
            dot += G[r, j] * x[j]
        if dot < 0:
            feasible = False
            break
    if feasible:
        return
    scale = tol * (1.0 + sqrt(scale))
    for j in range(d):
        b[j] = -y[j]
    for r in range(k):
        w.lam[r] = 0.0
        w.blocked[r] = 0
    for outer in range(10 * k + 10):
        for j in range(d):
            w.resid[j] = b[j]
            for i in range(npass):
                w.resid[j] -= G[w.passive[i], j] * w.lam[w.passive[i]]
        enter = -1
        wbest = scale
        for r in range(k):
            member = False
            for i in range(npass):
                if w.passive[i] == r:
                    member = True
                    break
            if member or w.blocked[r]:
                continue
            wr = 0.0
            for j in range(d):
                wr += G[r, j] * w.resid[j]
            if wr > wbest:
                wbest = wr
                enter = <int> r
        if enter < 0:
            break
        w.passive[npass] = enter
        npass += 1
        while True:
            if not solve_normal_c(G, w.passive, npass, b, w):
                # drop the entering column and block it until the passive set changes
                keep = 0
                for i in range(npass):
                    if w.passive[i] != enter:
                        w.passive[keep] = w.passive[i]
                        keep += 1
                npass = keep
                w.blocked[enter] = 1
                break
            smin = w.sol[0]
            for i in range(1, npass):
                if w.sol[i] < smin:
                    smin = w.sol[i]
            if smin > 0:
                for i in range(npass):
                    w.lam[w.passive[i]] = w.sol[i]
                for r in range(k):
                    w.blocked[r] = 0
                break
            alpha = 1e300
            stop = -1
            for i in range(npass):
                if w.sol[i] <= 0:
                    cand = w.lam[w.passive[i]] / (w.lam[w.passive[i]] - w.sol[i])
                    if stop < 0 or cand < alpha or (cand == alpha and w.passive[i] < stop):
                        alpha = cand
                        stop = w.passive[i]
            for i in range(npass):
                w.lam[w.passive[i]] += alpha * (w.sol[i] - w.lam[w.passive[i]])
            # the blocking index must leave even if rounding left it slightly positive
            w.lam[stop] = 0.0
            keep = 0
            for i in range(npass):
                if w.lam[w.passive[i]] > 0:
                    w.passive[keep] = w.passive[i]
                    keep += 1
                else:
                    w.lam[w.passive[i]] = 0.0
            npass = keep
            if npass == 0:
                break
    for j in range(d):
        x[j] = y[j]
        for i in range(npass):
            x[j] += G[w.passive[i], j] * w.lam[w.passive[i]]


def project_cone(G, y, double tol=1e-12):
    import numpy as np
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t d = yv.shape[0]
    cdef double[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.float64).reshape(-1, d)
    out = np.empty(d)
    b_arr = np.empty(d)
    cdef double[::1] ov = out
    cdef double[::1] bv = b_arr
    cdef Work* w = work_new(Gv.shape[0], d)
    try:
        project_c(Gv, &yv[0], &ov[0], w, &bv[0], tol)
    finally:
        work_free(w)
    return [float(v) for v in out]


def total_loss(D, w, theta, int kind):
    import numpy as np
    th = np.ascontiguousarray(theta, dtype=np.float64)
    cdef double[::1] tv = th
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64).reshape(-1, th.shape[0])
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    return total_c(Dv, wv, &tv[0], kind)


cdef double subgradient_c(double[:, ::1] D, double[::1] w, double[:, ::1] G, int kind,
                          double* theta, double f, int iters, double* best, double* g,
                          double* point, double* trial, Work* work, double* z) nogil:
    cdef Py_ssize_t d = D.shape[1], j
    cdef int k
    cdef double fbest = f, radius = 0.0, gn, step
    for j in range(d):
        best[j] = theta[j]
        radius += theta[j] * theta[j]
    radius = 0.1 * (sqrt(radius) if radius > 1.0 else 1.0)
    for k in range(iters):
        gradient_c(D, w, theta, kind, g)
        gn = 0.0
        for j in range(d):
            gn += g[j] * g[j]
        gn = sqrt(gn)
        if gn == 0.0 or gn != gn or gn == INFINITY:
            break
        step = radius / (gn * sqrt(k + 1.0))
        for j in range(d):
            point[j] = theta[j] - step * g[j]
        project_c(G, point, trial, work, z, 1e-12)
        for j in range(d):
            theta[j] = trial[j]
        f = total_c(D, w, theta, kind)
        if f < fbest:
            fbest = f
            for j in range(d):
                best[j] = theta[j]
    for j in range(d):
        theta[j] = best[j]
    return fbest


def minimize_on_cone(D, w, G, int kind, theta0, int max_iter=100000, double rel_tol=1e-10,
                     int window=100, double norm_cap=1e6, double floor=1e-300,
                     int subgradient_iters=20000):
    """Return (theta, value, iterations, status)."""
    import numpy as np
    cdef Py_ssize_t d = len(theta0), j
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64).reshape(-1, d)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.float64).reshape(-1, d)
    cdef double[::1] t0 = np.ascontiguousarray(theta0, dtype=np.float64)
    cdef Py_ssize_t k = Gv.shape[0]
    hist_arr = np.empty(max_iter + 1)
    cdef double[::1] history = hist_arr
    cdef double* theta = <double*> malloc(d * sizeof(double))
    cdef double* trial = <double*> malloc(d * sizeof(double))
    cdef double* point = <double*> malloc(d * sizeof(double))
    cdef double* g = <double*> malloc(d * sizeof(double))
    cdef double* z = <double*> malloc(d * sizeof(double))
    cdef Work* work = work_new(k, d)
    cdef double* best = <double*> malloc(d * sizeof(double))
    cdef double f, ft, step = 1.0, lin = 0.0, sq = 0.0, dj, norm, old
    cdef int status = ITERATION_CAP
    cdef int it = 0
    cdef Py_ssize_t nhist = 0
    try:
        with nogil:
            project_c(Gv, &t0[0], theta, work, z, 1e-12)
            f = total_c(Dv, wv, theta, kind)
            history[0] = f
            nhist = 1
            while it < max_iter:
                it += 1
                if f <= floor:
                    status = CONVERGED
                    break
                gradient_c(Dv, wv, theta, kind, g)
                while True:
                    for j in range(d):
                        point[j] = theta[j] - step * g[j]
                    project_c(Gv, point, trial, work, z, 1e-12)
                    lin = 0.0
                    sq = 0.0
                    for j in range(d):
                        dj = trial[j] - theta[j]
                        lin += g[j] * dj
                        sq += dj * dj
                    ft = total_c(Dv, wv, trial, kind)
                    if ft <= f and ft <= f + lin + sq / (2.0 * step):
                        break
                    step *= 0.5
                    if step < 1e-30:
                        break
                if step < 1e-30 or sq == 0.0:
                    status = STALLED if step < 1e-30 else CONVERGED
                    break
                for j in range(d):
                    theta[j] = trial[j]
                f = ft
                step *= 2.0
                history[nhist] = f
                nhist += 1
                norm = 0.0
                for j in range(d):
                    norm += theta[j] * theta[j]
                if sqrt(norm) > norm_cap:
                    status = DIVERGED
                    break
                if nhist > window:
                    old = history[nhist - window - 1]
                    if old - f <= rel_tol * (old if old >= 0 else -old):
                        status = CONVERGED
                        break
            if status == STALLED and subgradient_iters > 0:
                f = subgradient_c(Dv, wv, Gv, kind, theta, f, subgradient_iters, best, g,
                                  point, trial, work, z)
                it += subgradient_iters
                status = SUBGRADIENT
        result = [theta[j] for j in range(d)]
    finally:
        free(theta)
        free(trial)
        free(point)
        free(g)
        free(z)
        work_free(work)
        free(best)
    return result, f, it, status
