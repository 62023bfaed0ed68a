"""States, networks, update rules, energies, and stability predicates.

A network is a pair (weights, thresholds) where the weight matrix need not
be symmetric; entry (i, j) weights neuron j's input to neuron i. States are
vectors over {+1, -1}. The single update rule is

    v_i  <-  sign(sum_j W[i, j] * v_j - T[i])      with sign(0) = +1,

applied at one neuron (serial), at every neuron simultaneously (fully
parallel), or at one layer of a partition at a time (layered).

Integer matrices are kept in exact integer arithmetic; matrices with
Fraction entries (as produced by :mod:`hopcycles.synthesis`) stay exact as
well. State labels are decimal encodings of the sign pattern; the default
``"msb"`` convention maps neuron 0 to the most significant bit, which is
the convention under which the bundled toy network reproduces its
reference parallel cycle inventory (see README).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

BitOrder = str  # "msb" | "lsb"
DEFAULT_BIT_ORDER = "msb"

__all__ = [
    "DEFAULT_BIT_ORDER",
    "BipolarState",
    "Network",
    "LayerPartition",
    "Serial",
    "FullyParallel",
    "Layered",
    "UpdateSchedule",
    "sign_activation",
    "local_field",
    "step_parallel",
    "step_serial",
    "step_layered",
    "symmetric_part",
    "quadratic_energy",
    "is_stable",
    "is_antistable",
    "corner_eigen_check",
    "encode_state",
    "decode_state",
    "schedule_groups",
]


def sign_activation(x) -> int:
    """Signum with the non-negative tie rule: +1 for x >= 0, else -1."""
    return 1 if x >= 0 else -1


def _check_bit_order(bit_order: str) -> str:
    if bit_order not in ("msb", "lsb"):
        raise ValueError(f"bit_order must be 'msb' or 'lsb', got {bit_order!r}")
    return bit_order


class BipolarState:
    """Immutable vector over {+1, -1}; the state of an n-neuron network."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[int]):
        arr = np.asarray(components if isinstance(components, np.ndarray) else list(components))
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("state must be a nonempty 1-d vector")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValueError("state components must all be +1 or -1")
        arr = arr.astype(np.int8)
        arr.flags.writeable = False
        object.__setattr__(self, "components", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BipolarState is immutable")

    @property
    def n(self) -> int:
        return self.components.shape[0]

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(int(c) for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipolarState):
            return NotImplemented
        return self.components.shape == other.components.shape and bool(
            np.array_equal(self.components, other.components)
        )

    def __hash__(self) -> int:
        return hash(self.components.tobytes())

    def __repr__(self) -> str:
        body = ",".join("+" if c > 0 else "-" for c in self.components)
        return f"BipolarState({body})"

    @classmethod
    def from_label(cls, label: int, n: int, bit_order: BitOrder = DEFAULT_BIT_ORDER) -> "BipolarState":
        return encode_state(label, n, bit_order)

    def label(self, bit_order: BitOrder = DEFAULT_BIT_ORDER) -> int:
        return decode_state(self, bit_order)

    def negated(self) -> "BipolarState":
        return BipolarState(-self.components)


def encode_state(d: int, n: int, bit_order: BitOrder = DEFAULT_BIT_ORDER) -> BipolarState:
    """Decimal label -> state: binary digits of ``d`` with 0 mapped to -1.

    Under the default "msb" order neuron i carries bit (n-1-i), so neuron 0
    is the most significant bit; "lsb" reverses that.
    """
    _check_bit_order(bit_order)
    d = int(d)
    if n < 1:
        raise ValueError("state width must be positive")
    if not 0 <= d < (1 << n):
        raise ValueError(f"label {d} out of range for {n}-bit states")
    bits = [(d >> k) & 1 for k in range(n)]
    if bit_order == "msb":
        comps = [1 if bits[n - 1 - i] else -1 for i in range(n)]
    else:
        comps = [1 if bits[i] else -1 for i in range(n)]
    return BipolarState(comps)


def decode_state(v: BipolarState | Sequence[int], bit_order: BitOrder = DEFAULT_BIT_ORDER) -> int:
    """Inverse of :func:`encode_state` (exact round trip)."""
    _check_bit_order(bit_order)
    comps = v.components if isinstance(v, BipolarState) else np.asarray(v)
    n = len(comps)
    d = 0
    for i, c in enumerate(comps):
        if c > 0:
            d |= 1 << ((n - 1 - i) if bit_order == "msb" else i)
    return d


def label_bit_values(n: int, bit_order: BitOrder = DEFAULT_BIT_ORDER) -> list[int]:
    """Per-neuron label bit weight; flipping neuron i XORs the label with it."""
    _check_bit_order(bit_order)
    if bit_order == "msb":
        return [1 << (n - 1 - i) for i in range(n)]
    return [1 << i for i in range(n)]


def _coerce_numeric(arr: np.ndarray, what: str) -> np.ndarray:
    """Normalize a numeric array: int64 when integral-valued, else float64."""
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.int64)
    arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    if np.all(arr == np.round(arr)) and np.all(np.abs(arr) < 2**53):
        return arr.astype(np.int64)
    return arr


def _coerce_matrix(weights) -> np.ndarray:
    w = np.asarray(weights)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
        raise ValueError("weights must be a nonempty square matrix")
    if w.dtype == object:
        if not all(isinstance(x, Rational) for x in w.flat):
            raise ValueError("object-dtype weights must be int or Fraction entries")
        return w.copy()
    return _coerce_numeric(w, "weights")


class Network:
    """Weight matrix plus threshold vector; weights need not be symmetric.

    Integer inputs (including float arrays holding integral values) are
    stored as int64 so energies and fields stay exact; Fraction entries are
    kept as-is in an object array.
    """

    __slots__ = ("weights", "thresholds")

    def __init__(self, weights, thresholds=None):
        w = _coerce_matrix(weights)
        n = w.shape[0]
        if thresholds is None:
            t = np.array([0] * n, dtype=object) if w.dtype == object else np.zeros(n, dtype=np.int64)
        else:
            t = np.asarray(thresholds)
            if t.shape != (n,):
                raise ValueError(f"thresholds must have length {n}")
            if t.dtype == object:
                if not all(isinstance(x, Rational) for x in t.flat):
                    raise ValueError("object-dtype thresholds must be int or Fraction entries")
                t = t.copy()
            else:
                t = _coerce_numeric(t, "thresholds")
        if w.dtype == object or t.dtype == object:
            # keep the whole pair exact if either side is exact-rational
            if w.dtype != object:
                w = np.array(w.tolist(), dtype=object)
            if t.dtype != object:
                t = np.array(t.tolist(), dtype=object)
        if w.dtype != object:
            w.flags.writeable = False
            t.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "thresholds", t)

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def is_exact(self) -> bool:
        """True when fields and energies are computed without rounding."""
        return self.weights.dtype != np.float64

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return bool(np.array_equal(self.weights, other.weights)) and bool(
            np.array_equal(self.thresholds, other.thresholds)
        )

    def __repr__(self) -> str:
        return f"Network(n={self.n}, dtype={self.weights.dtype})"


def _weights_of(net_or_matrix) -> np.ndarray:
    if isinstance(net_or_matrix, Network):
        return net_or_matrix.weights
    return _coerce_matrix(net_or_matrix)


def _as_scalar(x):
    """numpy scalar -> plain python number (keeps Fractions untouched)."""
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


def _check_dims(net: Network, v: BipolarState) -> None:
    if v.n != net.n:
        raise ValueError(f"state has {v.n} components, network has {net.n} neurons")


def local_field(net: Network, v: BipolarState, i: int):
    """Input to neuron i in state v: sum_j W[i, j] v_j - T[i]."""
    _check_dims(net, v)
    if not 0 <= i < net.n:
        raise IndexError(f"neuron index {i} out of range for n={net.n}")
    row = net.weights[i]
    if net.weights.dtype == object:
        acc = sum(row[j] * int(v.components[j]) for j in range(net.n))
        return acc - net.thresholds[i]
    return _as_scalar(row @ v.components.astype(np.int64) - net.thresholds[i])


def _fields(net: Network, comps: np.ndarray) -> np.ndarray:
    if net.weights.dtype == object:
        x = np.array([int(c) for c in comps], dtype=object)
        return net.weights @ x - net.thresholds
    return net.weights @ comps.astype(np.int64) - net.thresholds


def step_parallel(net: Network, v: BipolarState) -> BipolarState:
    """Update every neuron simultaneously from the same input state."""
    _check_dims(net, v)
    f = _fields(net, v.components)
    return BipolarState(np.where(f >= 0, 1, -1).astype(np.int8))


def step_serial(net: Network, v: BipolarState, i: int) -> BipolarState:
    """Update only neuron i; every other component is carried over."""
    f = local_field(net, v, i)
    comps = v.components.copy()
    comps[i] = sign_activation(f)
    return BipolarState(comps)


def step_layered(net: Network, v: BipolarState, partition: "LayerPartition", j: int) -> BipolarState:
    """Update all neurons of layer j simultaneously; other layers are frozen."""
    _check_dims(net, v)
    partition.validate_for(net.n)
    if not 0 <= j < len(partition.layers):
        raise IndexError(f"layer index {j} out of range for {len(partition.layers)} layers")
    idx = np.asarray(partition.layers[j], dtype=np.intp)
    f = _fields(net, v.components)
    comps = v.components.copy()
    comps[idx] = np.where(f[idx] >= 0, 1, -1)
    return BipolarState(comps)


def symmetric_part(weights) -> np.ndarray:
    """(W + W^T) / 2. Integer input yields exact half-integers (float64)."""
    w = _weights_of(weights)
    if w.dtype == object:
        return (w + w.T) * Fraction(1, 2)
    return (w + w.T) / 2.0


def quadratic_energy(net_or_weights, v: BipolarState):
    """Energy v^T W v of a corner; no 1/2 factor, no threshold term.

    Under this convention stable states sit at local maxima and anti-stable
    states at local minima of the landscape. Exact (python int / Fraction)
    for integer and Fraction matrices.
    """
    w = _weights_of(net_or_weights)
    if v.n != w.shape[0]:
        raise ValueError(f"state has {v.n} components, matrix is {w.shape[0]}x{w.shape[0]}")
    if w.dtype == object:
        x = np.array([int(c) for c in v.components], dtype=object)
        return (x @ w @ x)
    x = v.components.astype(np.int64)
    return _as_scalar(x @ w @ x)


def is_stable(net: Network, v: BipolarState) -> bool:
    """Fixed point test: v = sign(Wv - T) componentwise."""
    return step_parallel(net, v) == v


def is_antistable(weights_or_net, v: BipolarState) -> bool:
    """True iff v = -sign(Wv) componentwise (threshold-free by definition)."""
    w = _weights_of(weights_or_net)
    if v.n != w.shape[0]:
        raise ValueError(f"state has {v.n} components, matrix is {w.shape[0]}x{w.shape[0]}")
    if w.dtype == object:
        x = np.array([int(c) for c in v.components], dtype=object)
        f = w @ x
    else:
        f = w @ v.components.astype(np.int64)
    return all(int(v.components[i]) == -sign_activation(f[i]) for i in range(v.n))


def corner_eigen_check(weights_or_net, v: BipolarState, tolerance: float = 1e-9):
    """If W v = lam * v componentwise within ``tolerance``, return lam, else None.

    The candidate eigenvalue is the Rayleigh quotient v^T W v / n, which is
    exact for integer and Fraction matrices (returned as a Fraction when it
    is not integral). A corner eigenvector with lam > 0 is a stable state,
    with lam < 0 an anti-stable state.
    """
    if tolerance < 0:
        raise ValueError("tolerance must be non-negative")
    w = _weights_of(weights_or_net)
    n = w.shape[0]
    if v.n != n:
        raise ValueError(f"state has {v.n} components, matrix is {n}x{n}")
    if w.dtype == object:
        x = np.array([int(c) for c in v.components], dtype=object)
        f = w @ x
        lam = Fraction(sum(f[i] * int(x[i]) for i in range(n)), n)
        resid = max(abs(f[i] - lam * x[i]) for i in range(n))
        if resid > tolerance:
            return None
        return int(lam) if lam.denominator == 1 else lam
    x = v.components.astype(np.int64)
    f = w @ x
    if w.dtype == np.int64:
        lam = Fraction(int(x @ f), n)
        resid = max(abs(Fraction(int(fi)) - lam * int(xi)) for fi, xi in zip(f, x))
        if resid > tolerance:
            return None
        return int(lam) if lam.denominator == 1 else lam
    lam = float(x @ f) / n
    resid = float(np.max(np.abs(f - lam * x)))
    if resid > tolerance:
        return None
    return lam


@dataclass(frozen=True)
class LayerPartition:
    """Ordered disjoint groups of neuron indices (0-based) covering 0..n-1."""

    layers: tuple[tuple[int, ...], ...]

    def __init__(self, layers: Iterable[Iterable[int]]):
        norm = tuple(tuple(sorted(int(i) for i in layer)) for layer in layers)
        if not norm or any(len(layer) == 0 for layer in norm):
            raise ValueError("partition needs at least one nonempty layer")
        flat = [i for layer in norm for i in layer]
        if len(flat) != len(set(flat)):
            raise ValueError("layers must be pairwise disjoint")
        if min(flat) < 0:
            raise ValueError("neuron indices must be non-negative")
        object.__setattr__(self, "layers", norm)

    @property
    def size(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def validate_for(self, n: int) -> None:
        covered = {i for layer in self.layers for i in layer}
        if covered != set(range(n)):
            raise ValueError(f"partition does not cover neurons 0..{n - 1}")

    @classmethod
    def singletons(cls, n: int) -> "LayerPartition":
        return cls((i,) for i in range(n))

    @classmethod
    def single_block(cls, n: int) -> "LayerPartition":
        return cls([range(n)])


@dataclass(frozen=True)
class FullyParallel:
    """All neurons update simultaneously each tick."""


@dataclass(frozen=True)
class Serial:
    """One neuron updates per tick, visited in a fixed order each sweep.

    ``order`` is an explicit permutation of 0..n-1; when omitted the cyclic
    order 0,1,...,n-1 is used, unless ``seed`` is given, in which case one
    random permutation is drawn from the seed and reused for every sweep
    (keeping the sweep map deterministic and time-invariant).
    """

    order: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.order is not None:
            object.__setattr__(self, "order", tuple(int(i) for i in self.order))

    def resolved_order(self, n: int) -> tuple[int, ...]:
        if self.order is not None:
            if sorted(self.order) != list(range(n)):
                raise ValueError(f"serial order must be a permutation of 0..{n - 1}")
            return self.order
        if self.seed is not None:
            rng = np.random.default_rng(self.seed)
            return tuple(int(i) for i in rng.permutation(n))
        return tuple(range(n))


@dataclass(frozen=True)
class Layered:
    """One whole layer updates simultaneously per tick, layers round-robin."""

    partition: LayerPartition


UpdateSchedule = FullyParallel | Serial | Layered


def schedule_groups(schedule: UpdateSchedule, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a schedule into per-tick update groups for one full round.

    Returns (group_idx, group_ptr): tick g simultaneously updates neurons
    ``group_idx[group_ptr[g]:group_ptr[g+1]]``. One round is one tick for
    fully parallel mode, n ticks for serial, L ticks for layered.
    """
    if isinstance(schedule, FullyParallel):
        groups: list[Sequence[int]] = [range(n)]
    elif isinstance(schedule, Serial):
        groups = [(i,) for i in schedule.resolved_order(n)]
    elif isinstance(schedule, Layered):
        schedule.partition.validate_for(n)
        groups = list(schedule.partition.layers)
    else:
        raise TypeError(f"unknown schedule {schedule!r}")
    idx = np.array([i for g in groups for i in g], dtype=np.int32)
    ptr = np.zeros(len(groups) + 1, dtype=np.int32)
    ptr[1:] = np.cumsum([len(g) for g in groups])
    return idx, ptr
