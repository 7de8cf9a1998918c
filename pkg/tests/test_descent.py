import math
import random

import numpy as np
import pytest

from linsoc import _descent_py as py_kernel
from linsoc import descent

compiled = pytest.importorskip("linsoc._descent")


def random_problem(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 4))
    D = rng.normal(size=(int(rng.integers(3, 12)), d))
    w = rng.integers(1, 4, size=len(D)).astype(float)
    G = rng.normal(size=(int(rng.integers(1, 5)), d))
    G /= np.linalg.norm(G, axis=1)[:, None]
    return D, w, G


def test_backend_selected():
    assert descent.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("kind", [descent.BCE, descent.HINGE, descent.EXPONENTIAL, descent.SQUARED])
def test_scalar_losses(kind):
    for x in (-3.0, -1.0, 0.0, 0.5, 2.0):
        h = 1e-6
        if kind == descent.HINGE and abs(x + 1.0) < 1e-3:
            continue
        slope = (py_kernel.loss_scalar(kind, x + h) - py_kernel.loss_scalar(kind, x - h)) / (2 * h)
        assert py_kernel.loss_slope(kind, x) == pytest.approx(slope, rel=1e-5, abs=1e-6)
    assert py_kernel.loss_scalar(descent.BCE, 0.0) == pytest.approx(math.log(2))
    assert py_kernel.loss_scalar(descent.BCE, -800.0) == 0.0
    assert py_kernel.loss_scalar(descent.BCE, 800.0) == pytest.approx(800.0)


@pytest.mark.parametrize("seed", range(16))
def test_kernel_parity(seed):
    D, w, G = random_problem(seed)
    kind = seed % 4
    a = compiled.minimize_on_cone(D, w, G, kind, np.zeros(D.shape[1]))
    b = py_kernel.minimize_on_cone(D.tolist(), w.tolist(), G.tolist(), kind, [0.0] * D.shape[1])
    assert a[1] == pytest.approx(b[1], rel=1e-8, abs=1e-8)
    assert a[3] == b[3]


@pytest.mark.parametrize("seed", range(30))
def test_projection_is_a_projection(seed):
    """Both kernels return the same point p with p in the cone and (y - p).(z - p) <= 0 for cone points z."""
    D, w, G = random_problem(seed)
    rng = random.Random(seed)
    y = [rng.uniform(-3, 3) for _ in range(G.shape[1])]
    p = np.array(py_kernel.project_cone(G.tolist(), y))
    pc = np.array(compiled.project_cone(G, np.array(y)))
    assert np.allclose(p, pc, atol=1e-9)
    assert (G @ p >= -1e-9).all()
    r = np.array(y) - p
    for _ in range(50):
        z = np.array([rng.uniform(-5, 5) for _ in y])
        if (G @ z >= 0).all():
            assert r @ (z - p) <= 1e-8
    # the residual lies in the polar cone and is orthogonal to p
    assert abs(r @ p) <= 1e-8


def test_unconstrained_minimum_found():
    # one pair, no cone rows active at the optimum: squared loss of x is minimised at x = -1
    D = [[1.0, 0.0]]
    theta, f, _, status = py_kernel.minimize_on_cone(D, [1.0], [[0.0, 1.0]], descent.SQUARED, [0.0, 0.0])
    assert f == pytest.approx(0.0, abs=1e-10)
    assert theta[0] == pytest.approx(-1.0, abs=1e-5)
    assert descent.STATUS_NAMES[status] in ("converged", "stalled")


def test_divergence_flagged():
    # BCE on a separable problem only approaches zero as the norm grows
    D = [[-1.0]]
    _, f, _, status = py_kernel.minimize_on_cone(D, [1.0], [[1.0]], descent.BCE, [0.0])
    assert f < 1e-3
    assert status in (descent.DIVERGED, descent.STALLED, descent.CONVERGED, descent.SUBGRADIENT)
