"""Selects the compiled descent kernel, falling back to pure Python.

Set ``LINSOC_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the kernel-parity tests).
"""

import os

from . import _descent_py

BCE, HINGE, EXPONENTIAL, SQUARED = _descent_py.BCE, _descent_py.HINGE, _descent_py.EXPONENTIAL, _descent_py.SQUARED
CONVERGED, DIVERGED, ITERATION_CAP, STALLED, SUBGRADIENT = (
    _descent_py.CONVERGED,
    _descent_py.DIVERGED,
    _descent_py.ITERATION_CAP,
    _descent_py.STALLED,
    _descent_py.SUBGRADIENT,
)
STATUS_NAMES = {
    CONVERGED: "converged",
    DIVERGED: "diverged",
    ITERATION_CAP: "iteration-cap",
    STALLED: "stalled",
    SUBGRADIENT: "subgradient",
}

kernel = _descent_py
BACKEND = "python"
if not os.environ.get("LINSOC_PURE_PYTHON"):
    try:
        from . import _descent as kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass

minimize_on_cone = kernel.minimize_on_cone
project_cone = kernel.project_cone
total_loss = kernel.total_loss
loss_scalar = _descent_py.loss_scalar
loss_slope = _descent_py.loss_slope
