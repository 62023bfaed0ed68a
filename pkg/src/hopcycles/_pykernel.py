"""Pure-Python trajectory kernel; reference semantics for the compiled one.

One tick updates one group of neurons simultaneously from the current
state; one round applies every group once. States are revisited-checked
only at round boundaries, where the round map is time-invariant, so the
first boundary revisit yields the minimal tail and minimal cycle of that
map. Works for float64 and exact (object/Fraction) arithmetic and for any
network order (labels are plain python ints).
"""

from __future__ import annotations

import numpy as np


def run_trajectory(weights, thresholds, init_label, group_idx, group_ptr, bitvals, max_ticks):
    """Iterate the schedule from ``init_label``; stop at a boundary revisit.

    Returns ``(labels, tail_rounds, cycle_rounds)`` where ``labels`` has one
    entry per tick (the initial state included); when the tick budget runs
    out before a revisit the result is ``(labels, -1, 0)``.
    """
    n = weights.shape[0]
    exact = weights.dtype == object
    one, minus_one = (1, -1) if exact else (np.int64(1), np.int64(-1))

    state = np.empty(n, dtype=object if exact else np.int64)
    for i in range(n):
        state[i] = one if (init_label & bitvals[i]) else minus_one

    n_groups = len(group_ptr) - 1
    lab = int(init_label)
    labels = [lab]
    seen = {lab: 0}
    ticks = 0
    rounds = 0
    while True:
        for g in range(n_groups):
            if ticks >= max_ticks:
                return labels, -1, 0
            idx = group_idx[group_ptr[g]:group_ptr[g + 1]]
            f = weights[idx].dot(state) - thresholds[idx]
            new = np.where(f >= 0, one, minus_one)
            for k in np.nonzero(new != state[idx])[0]:
                lab ^= bitvals[idx[k]]
            state[idx] = new
            ticks += 1
            labels.append(lab)
        rounds += 1
        first = seen.get(lab)
        if first is not None:
            return labels, first, rounds - first
        seen[lab] = rounds
