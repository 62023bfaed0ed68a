# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory kernel: one group of neurons updates per tick,
revisit detection at round boundaries. Mirrors _pykernel.run_trajectory
for float64 weight matrices and network orders up to 63 neurons (labels
are packed into 64-bit integers; flipping neuron i XORs its bit value).
Integer-valued weights stay exact because float64 arithmetic on them is.
"""

from cython.operator cimport dereference as deref
from libcpp.unordered_map cimport unordered_map

import numpy as np


def run_trajectory(double[:, ::1] weights,
                   double[::1] thresholds,
                   unsigned long long init_label,
                   int[::1] group_idx,
                   int[::1] group_ptr,
                   unsigned long long[::1] bitvals,
                   long max_ticks):
    """Same contract as the pure kernel: (labels, tail_rounds, cycle_rounds),
    with (labels, -1, 0) when the tick budget is exhausted first."""
    cdef int n = weights.shape[0]
    cdef int n_groups = group_ptr.shape[0] - 1
    cdef int i, j, k, g, a, b
    cdef long ticks = 0, rounds = 0, cap
    cdef double s, newv
    cdef unsigned long long lab = init_label
    cdef unordered_map[unsigned long long, long] seen
    cdef unordered_map[unsigned long long, long].iterator it

    if n > 63:
        raise ValueError("compiled kernel supports at most 63 neurons")

    # boundary labels are distinct until the first revisit, so at most
    # 2^n + 1 rounds ever run; size the label buffer accordingly
    if n <= 40:
        cap = ((<long> 1 << n) + 1) * n_groups
        if max_ticks < cap:
            cap = max_ticks
    else:
        cap = max_ticks

    cdef double[::1] state = np.empty(n, dtype=np.float64)
    cdef double[::1] fields = np.empty(n, dtype=np.float64)
    labels_arr = np.empty(cap + 1, dtype=np.uint64)
    cdef unsigned long long[::1] labels = labels_arr

    for i in range(n):
        state[i] = 1.0 if (init_label & bitvals[i]) else -1.0
    labels[0] = lab
    seen[lab] = 0

    while True:
        for g in range(n_groups):
            if ticks >= max_ticks:
                return labels_arr[:ticks + 1].copy(), -1, 0
            a = group_ptr[g]
            b = group_ptr[g + 1]
            for k in range(a, b):
                i = group_idx[k]
                s = -thresholds[i]
                for j in range(n):
                    s += weights[i, j] * state[j]
                fields[k - a] = s
            for k in range(a, b):
                i = group_idx[k]
                newv = 1.0 if fields[k - a] >= 0.0 else -1.0
                if newv != state[i]:
                    state[i] = newv
                    lab ^= bitvals[i]
            ticks += 1
            labels[ticks] = lab
        rounds += 1
        it = seen.find(lab)
        if it != seen.end():
            return labels_arr[:ticks + 1].copy(), deref(it).second, rounds - deref(it).second
        seen[lab] = rounds
