"""Kernel backend selection: compiled extension when available, else pure.

The compiled kernel covers float64-representable networks of up to 63
neurons; exact-arithmetic (Fraction) networks, wider networks, and builds
without a compiler all route to the pure kernel transparently. Set
``HOPCYCLES_PURE=1`` to force the pure kernel (used by the benchmark and
the backend-parity tests).
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernel

try:
    from . import _cykernel
except ImportError:
    _cykernel = None

HAVE_COMPILED = _cykernel is not None
FORCE_PURE = os.environ.get("HOPCYCLES_PURE", "") not in ("", "0")
BACKEND = "compiled" if (HAVE_COMPILED and not FORCE_PURE) else "pure"

__all__ = ["HAVE_COMPILED", "BACKEND", "run_trajectory"]


def _compiled_ok(weights: np.ndarray) -> bool:
    if weights.dtype == object:
        return False
    n = weights.shape[0]
    if n > 63:
        return False
    # float64 must represent integer weights exactly
    if weights.dtype == np.int64 and int(np.abs(weights).max(initial=0)) >= 2**53:
        return False
    return True


def _thresholds_ok(thresholds: np.ndarray) -> bool:
    if thresholds.dtype == object:
        return False
    if thresholds.dtype == np.int64 and thresholds.size and int(np.abs(thresholds).max()) >= 2**53:
        return False
    return True


def run_trajectory(weights, thresholds, init_label, group_idx, group_ptr, bitvals,
                   max_ticks, backend: str | None = None):
    """Dispatch one trajectory run to the selected kernel backend.

    Returns ``(labels, tail_rounds, cycle_rounds)``; ``labels`` is a uint64
    array (compiled) or list of ints (pure), one entry per tick including
    the initial state; ``(labels, -1, 0)`` marks an exhausted tick budget.
    """
    if backend is None:
        backend = BACKEND
    if backend == "compiled":
        if _cykernel is None:
            raise RuntimeError("compiled kernel is not available in this install")
        if not (_compiled_ok(weights) and _thresholds_ok(np.asarray(thresholds))):
            backend = "pure"
    if backend == "compiled":
        w = np.ascontiguousarray(weights, dtype=np.float64)
        t = np.ascontiguousarray(thresholds, dtype=np.float64)
        bv = np.asarray(bitvals, dtype=np.uint64)
        labels, tail, cyc = _cykernel.run_trajectory(
            w, t, np.uint64(init_label), group_idx, group_ptr, bv, int(max_ticks))
        return labels, tail, cyc
    if backend != "pure":
        raise ValueError(f"unknown kernel backend {backend!r}")
    return _pykernel.run_trajectory(
        weights, thresholds, int(init_label), group_idx, group_ptr, list(bitvals), int(max_ticks))
