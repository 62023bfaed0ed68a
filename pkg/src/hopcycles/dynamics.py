"""Trajectory iteration, limit-cycle detection, state-space sweeps.

Iteration is driven by tick groups (one group of neurons updates per
tick; one round applies every group once, so a round is one parallel
tick, n serial ticks, or L layered ticks). States are recorded every
tick, but revisits are only checked at round boundaries, where the round
map is time-invariant: the first boundary revisit gives the minimal tail
and minimal cycle of that map, and cycle labels are the boundary states,
which keeps serial 2-cycles comparable with parallel ones.

Sweeps aggregate the terminal cycle of every configured initial state
into a cycle inventory with basins. Complex networks run through the
same machinery over their 4^n labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .complexnet import ComplexBipolarState, ComplexNetwork, cencode_state
from .core import (
    DEFAULT_BIT_ORDER,
    BipolarState,
    FullyParallel,
    Layered,
    Network,
    Serial,
    UpdateSchedule,
    encode_state,
    label_bit_values,
    quadratic_energy,
    schedule_groups,
)

__all__ = [
    "DEFAULT_MAX_STEPS",
    "INITIAL_CAP",
    "Cycle",
    "canonicalize_cycle",
    "Trajectory",
    "iterate_until_cycle",
    "EnergyTrace",
    "energy_trace",
    "Constant",
    "Oscillating",
    "classify_energy_profile",
    "Exhaustive",
    "LabelRange",
    "ExplicitLabels",
    "RandomSample",
    "SweepConfig",
    "CycleInventory",
    "sweep",
    "random_network",
    "PolarityReport",
    "polarity_experiment",
]

DEFAULT_MAX_STEPS = 100_000
INITIAL_CAP = 1024  # default ceiling on swept initial states


@dataclass(frozen=True)
class Cycle:
    """A limit cycle as its canonical label sequence (smallest label first)."""

    labels: tuple[int, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("a cycle has at least one state")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("cycle labels must be distinct")

    @property
    def length(self) -> int:
        return len(self.labels)

    def negated(self, label_bits: int) -> "Cycle":
        """The cycle of componentwise-negated states (bitwise complement labels)."""
        mask = (1 << label_bits) - 1
        return canonicalize_cycle([lab ^ mask for lab in self.labels])

    def __str__(self) -> str:
        return "-".join(str(l) for l in self.labels)


def canonicalize_cycle(labels: Iterable[int]) -> Cycle:
    """Rotate a label sequence so the smallest label comes first."""
    labs = [int(l) for l in labels]
    if not labs:
        raise ValueError("a cycle has at least one state")
    if len(set(labs)) != len(labs):
        raise ValueError("cycle labels must be distinct")
    k = labs.index(min(labs))
    return Cycle(tuple(labs[k:] + labs[:k]))


@dataclass(frozen=True)
class Trajectory:
    """Per-tick visited labels plus the detected cycle.

    ``labels[tail_steps:]`` repeats with period ``cycle.length *
    ticks_per_round`` once a cycle is found; the cycle itself lists the
    round-boundary states. ``cycle`` is None when the tick budget ran out
    before a boundary revisit (the whole record is then tail).
    """

    labels: tuple[int, ...]
    ticks_per_round: int
    n: int
    bit_order: str
    complex_labels: bool
    cycle: Cycle | None
    tail_rounds: int

    @property
    def resolved(self) -> bool:
        return self.cycle is not None

    @property
    def tail_steps(self) -> int:
        if self.cycle is None:
            return len(self.labels) - 1
        return self.tail_rounds * self.ticks_per_round

    @property
    def period_steps(self) -> int | None:
        if self.cycle is None:
            return None
        return self.cycle.length * self.ticks_per_round

    def state_at(self, tick: int):
        lab = self.labels[tick]
        if self.complex_labels:
            return cencode_state(lab, self.n)
        return encode_state(lab, self.n, self.bit_order)

    def states(self) -> Iterator:
        for t in range(len(self.labels)):
            yield self.state_at(t)


def _run_complex(net: ComplexNetwork, init_label: int, group_idx, group_ptr, max_ticks: int):
    """Complex counterpart of the kernels: same contract, 4^n labels."""
    n = net.n
    re_bits = [1 << (2 * n - 1 - 2 * k) for k in range(n)]
    im_bits = [1 << (2 * n - 2 - 2 * k) for k in range(n)]
    state = cencode_state(init_label, n).components.copy()
    lab = int(init_label)
    labels = [lab]
    seen = {lab: 0}
    ticks = 0
    rounds = 0
    n_groups = len(group_ptr) - 1
    while True:
        for g in range(n_groups):
            if ticks >= max_ticks:
                return labels, -1, 0
            idx = group_idx[group_ptr[g]:group_ptr[g + 1]]
            f = net.weights[idx] @ state - net.thresholds[idx]
            new = np.where(f.real >= 0, 1.0, -1.0) + 1j * np.where(f.imag >= 0, 1.0, -1.0)
            for k in np.nonzero(new != state[idx])[0]:
                i = int(idx[k])
                old, cur = state[i], new[k]
                if old.real != cur.real:
                    lab ^= re_bits[i]
                if old.imag != cur.imag:
                    lab ^= im_bits[i]
            state[idx] = new
            ticks += 1
            labels.append(lab)
        rounds += 1
        first = seen.get(lab)
        if first is not None:
            return labels, first, rounds - first
        seen[lab] = rounds
    return None


def _prepare(net, schedule: UpdateSchedule):
    if isinstance(net, ComplexNetwork) and isinstance(schedule, Layered):
        raise ValueError("layered updates are not defined for complex networks")
    return schedule_groups(schedule, net.n)


def _build_trajectory(net, labels, tail_rounds, cycle_rounds, ticks_per_round,
                      bit_order: str) -> Trajectory:
    is_complex = isinstance(net, ComplexNetwork)
    if cycle_rounds > 0:
        boundary = [int(labels[(tail_rounds + k) * ticks_per_round]) for k in range(cycle_rounds)]
        cyc = canonicalize_cycle(boundary)
        tail = tail_rounds
    else:
        cyc = None
        tail = -1
    return Trajectory(
        labels=tuple(int(l) for l in labels),
        ticks_per_round=ticks_per_round,
        n=net.n,
        bit_order=bit_order,
        complex_labels=is_complex,
        cycle=cyc,
        tail_rounds=tail,
    )


def iterate_until_cycle(net, initial, schedule: UpdateSchedule | None = None,
                        max_steps: int = DEFAULT_MAX_STEPS,
                        bit_order: str = DEFAULT_BIT_ORDER) -> Trajectory:
    """Run the schedule from ``initial`` until a round-boundary revisit.

    ``max_steps`` caps single update ticks; when it is hit before a
    revisit the trajectory comes back with ``cycle=None`` rather than an
    error. Works for real and complex networks (the latter restricted to
    serial and fully parallel schedules).
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    if schedule is None:
        schedule = FullyParallel()
    group_idx, group_ptr = _prepare(net, schedule)
    ticks_per_round = len(group_ptr) - 1
    if isinstance(net, ComplexNetwork):
        if not isinstance(initial, ComplexBipolarState):
            raise TypeError("complex networks take ComplexBipolarState initial states")
        if initial.n != net.n:
            raise ValueError(f"state has {initial.n} components, network has {net.n} neurons")
        labels, tail, cyc = _run_complex(net, initial.label(), group_idx, group_ptr, max_steps)
    else:
        if not isinstance(initial, BipolarState):
            raise TypeError("real networks take BipolarState initial states")
        if initial.n != net.n:
            raise ValueError(f"state has {initial.n} components, network has {net.n} neurons")
        bitvals = label_bit_values(net.n, bit_order)
        labels, tail, cyc = kernels.run_trajectory(
            net.weights, net.thresholds, initial.label(bit_order),
            group_idx, group_ptr, bitvals, max_steps)
    return _build_trajectory(net, labels, tail, cyc, ticks_per_round, bit_order)


@dataclass(frozen=True)
class EnergyTrace:
    """(tick, state label, energy) samples along a trajectory."""

    samples: tuple[tuple[int, int, object], ...]
    ticks_per_round: int

    def energies(self) -> list:
        return [s[2] for s in self.samples]


def energy_trace(net: Network, traj: Trajectory) -> EnergyTrace:
    """Quadratic energy of every visited state, aligned with ticks.

    Only defined for real networks (complex networks have no energy
    contract; see ``hermitian_energy_diagnostic`` for a labelled
    diagnostic).
    """
    if isinstance(net, ComplexNetwork) or traj.complex_labels:
        raise TypeError("energy traces are only defined for real-valued networks")
    if not traj.labels:
        raise ValueError("trajectory is empty")
    cache: dict[int, object] = {}
    samples = []
    for t, lab in enumerate(traj.labels):
        e = cache.get(lab)
        if e is None:
            e = quadratic_energy(net, encode_state(lab, traj.n, traj.bit_order))
            cache[lab] = e
        samples.append((t, lab, e))
    return EnergyTrace(tuple(samples), traj.ticks_per_round)


@dataclass(frozen=True)
class Constant:
    """Energy is the same at every in-cycle sample."""

    value: object

    kind = "constant"


@dataclass(frozen=True)
class Oscillating:
    """Energy varies within the cycle; mean is the per-period average."""

    period: int
    mean: float

    kind = "oscillating"


def classify_energy_profile(trace: EnergyTrace, cycle_length: int) -> Constant | Oscillating:
    """Constant vs oscillating energy over the trailing full cycle periods.

    ``cycle_length`` counts cycle states (round boundaries); the trace
    must cover at least two full periods past its transient.
    """
    if cycle_length < 1:
        raise ValueError("cycle_length must be positive")
    period = cycle_length * trace.ticks_per_round
    if len(trace.samples) < 2 * period:
        raise ValueError(
            f"trace too short: {len(trace.samples)} samples cover fewer than two "
            f"periods of {period} ticks")
    window = [s[2] for s in trace.samples[-2 * period:]]
    if all(e == window[0] for e in window):
        return Constant(window[0])
    tail = window[-period:]
    return Oscillating(period=cycle_length, mean=float(sum(tail)) / period)


@dataclass(frozen=True)
class Exhaustive:
    """Every state in the space (use deliberately; the space is 2^n or 4^n)."""


@dataclass(frozen=True)
class LabelRange:
    lo: int
    hi: int


@dataclass(frozen=True)
class ExplicitLabels:
    labels: tuple[int, ...]

    def __init__(self, labels: Iterable[int]):
        object.__setattr__(self, "labels", tuple(int(l) for l in labels))


@dataclass(frozen=True)
class RandomSample:
    count: int
    seed: int


InitialSource = Exhaustive | LabelRange | ExplicitLabels | RandomSample | None


@dataclass(frozen=True)
class SweepConfig:
    """What to sweep: initial states, schedule, and the per-run tick budget.

    ``initials=None`` applies the default rule: exhaustive when the state
    space has at most ``cap`` states, otherwise the label range [0, cap).
    """

    schedule: UpdateSchedule = field(default_factory=FullyParallel)
    initials: InitialSource = None
    max_steps: int = DEFAULT_MAX_STEPS
    cap: int = INITIAL_CAP

    def initial_labels(self, state_count: int) -> Sequence[int]:
        src = self.initials
        if src is None:
            if state_count <= self.cap:
                return range(state_count)
            return range(self.cap)
        if isinstance(src, Exhaustive):
            return range(state_count)
        if isinstance(src, LabelRange):
            if not 0 <= src.lo <= src.hi <= state_count:
                raise ValueError(f"label range [{src.lo}, {src.hi}) out of bounds")
            return range(src.lo, src.hi)
        if isinstance(src, ExplicitLabels):
            for l in src.labels:
                if not 0 <= l < state_count:
                    raise ValueError(f"initial label {l} out of range")
            return src.labels
        if isinstance(src, RandomSample):
            if src.count < 1:
                raise ValueError("sample count must be at least 1")
            if src.count > state_count:
                raise ValueError("sample count exceeds the state space")
            rng = np.random.default_rng(src.seed)
            if state_count <= 2**62:
                picks = rng.choice(state_count, size=src.count, replace=False)
                return tuple(int(p) for p in picks)
            chosen: set[int] = set()
            while len(chosen) < src.count:
                bits = rng.integers(0, 2, size=int(math.log2(state_count)))
                chosen.add(int("".join(map(str, bits)), 2))
            return tuple(sorted(chosen))
        raise TypeError(f"unknown initial source {src!r}")


@dataclass(frozen=True)
class CycleInventory:
    """All cycles reached from the swept initial states, with their basins."""

    cycles: tuple[Cycle, ...]
    basins: dict[Cycle, frozenset[int]]
    unresolved: frozenset[int]
    n: int
    label_bits: int

    @property
    def resolved_count(self) -> int:
        return sum(len(b) for b in self.basins.values())

    def length_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for c in self.cycles:
            hist[c.length] = hist.get(c.length, 0) + 1
        return dict(sorted(hist.items()))

    def basin_of(self, initial_label: int) -> Cycle | None:
        for cyc, basin in self.basins.items():
            if initial_label in basin:
                return cyc
        return None

    def terminal_map(self) -> dict[int, Cycle]:
        out: dict[int, Cycle] = {}
        for cyc, basin in self.basins.items():
            for lab in basin:
                out[lab] = cyc
        return out

    def hamming_locality(self) -> float | None:
        """Fraction of resolved Hamming-1 neighbor pairs sharing a cycle.

        An observational statistic, not an invariant; None when the swept
        set contains no neighbor pairs.
        """
        term = self.terminal_map()
        agree = 0
        total = 0
        for lab, cyc in term.items():
            for k in range(self.label_bits):
                other = lab ^ (1 << k)
                if other < lab:
                    continue  # count each unordered pair once
                oc = term.get(other)
                if oc is None:
                    continue
                total += 1
                agree += oc == cyc
        if total == 0:
            return None
        return agree / total


def sweep(net, config: SweepConfig | None = None,
          bit_order: str = DEFAULT_BIT_ORDER) -> CycleInventory:
    """Run every configured initial state to its terminal cycle.

    Deterministic given the config (seeds included) and independent of
    the order initial states are processed in. Trajectories whose tick
    budget runs out land in ``unresolved``.
    """
    if config is None:
        config = SweepConfig()
    is_complex = isinstance(net, ComplexNetwork)
    n = net.n
    label_bits = 2 * n if is_complex else n
    state_count = 1 << label_bits
    group_idx, group_ptr = _prepare(net, config.schedule)
    ticks_per_round = len(group_ptr) - 1
    bitvals = None if is_complex else label_bit_values(n, bit_order)

    basins: dict[Cycle, set[int]] = {}
    unresolved: set[int] = set()
    # terminal cycle memo for round-boundary states seen in resolved runs;
    # a boundary state's own trajectory is a suffix of the recorded one
    terminal: dict[int, Cycle] = {}

    for init in config.initial_labels(state_count):
        init = int(init)
        known = terminal.get(init)
        if known is not None:
            basins.setdefault(known, set()).add(init)
            continue
        if is_complex:
            labels, tail, cyc_rounds = _run_complex(
                net, init, group_idx, group_ptr, config.max_steps)
        else:
            labels, tail, cyc_rounds = kernels.run_trajectory(
                net.weights, net.thresholds, init, group_idx, group_ptr,
                bitvals, config.max_steps)
        if cyc_rounds <= 0:
            unresolved.add(init)
            continue
        boundary = [int(labels[r * ticks_per_round]) for r in range(tail + cyc_rounds)]
        cyc = canonicalize_cycle(boundary[tail:])
        basins.setdefault(cyc, set()).add(init)
        for lab in boundary:
            terminal[lab] = cyc

    cycles = tuple(sorted(basins, key=lambda c: (c.length, c.labels)))
    return CycleInventory(
        cycles=cycles,
        basins={c: frozenset(basins[c]) for c in cycles},
        unresolved=frozenset(unresolved),
        n=n,
        label_bits=label_bits,
    )


_POLARITY_ALIASES = {
    "mixed": "mixed",
    "non-negative": "non-negative",
    "nonneg": "non-negative",
    "non-positive": "non-positive",
    "nonpos": "non-positive",
}


def random_network(n: int, polarity: str, magnitude: int = 20, seed: int = 0) -> Network:
    """Random integer network with zero diagonal and zero thresholds.

    Entry ranges by polarity: mixed [-magnitude, magnitude], non-negative
    [0, magnitude], non-positive [-magnitude, 0]; deterministic per seed.
    """
    if n < 1:
        raise ValueError("network order must be at least 1")
    if magnitude < 1:
        raise ValueError("magnitude must be at least 1")
    pol = _POLARITY_ALIASES.get(polarity)
    if pol is None:
        raise ValueError(f"unknown polarity {polarity!r}; "
                         "expected mixed, non-negative, or non-positive")
    rng = np.random.default_rng(seed)
    if pol == "mixed":
        w = rng.integers(-magnitude, magnitude + 1, size=(n, n))
    elif pol == "non-negative":
        w = rng.integers(0, magnitude + 1, size=(n, n))
    else:
        w = rng.integers(-magnitude, 1, size=(n, n))
    w = w.astype(np.int64)
    np.fill_diagonal(w, 0)
    return Network(w)


@dataclass(frozen=True)
class PolarityViolation:
    trial: int
    seed: int
    cycle: Cycle


@dataclass(frozen=True)
class PolarityReport:
    """Cycle-length distribution over random networks of one polarity class.

    ``violations`` lists cycles longer than 2 found for non-negative or
    non-positive matrices (reported, not asserted: the length-2 bound for
    those classes is an observation, and counterexamples do occur).
    """

    polarity: str
    n: int
    trials: int
    magnitude: int
    cycle_length_counts: dict[int, int]
    violations: tuple[PolarityViolation, ...]
    unresolved_count: int

    @property
    def compliant_fraction(self) -> float:
        """Fraction of networks whose cycles all have length <= 2."""
        bad = {v.trial for v in self.violations}
        return (self.trials - len(bad)) / self.trials

    @property
    def max_cycle_length(self) -> int:
        return max(self.cycle_length_counts, default=0)


def polarity_experiment(n: int, polarity: str, trials: int,
                        schedule: UpdateSchedule | None = None,
                        seed: int = 0, magnitude: int = 20,
                        cap: int = INITIAL_CAP,
                        max_steps: int = DEFAULT_MAX_STEPS) -> PolarityReport:
    """Sweep ``trials`` random networks and tabulate their cycle lengths."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    pol = _POLARITY_ALIASES.get(polarity)
    if pol is None:
        raise ValueError(f"unknown polarity {polarity!r}")
    if schedule is None:
        schedule = FullyParallel()
    seeds = np.random.default_rng(seed).integers(0, 2**63, size=trials)
    counts: dict[int, int] = {}
    violations = []
    unresolved_count = 0
    for trial, net_seed in enumerate(seeds):
        net = random_network(n, pol, magnitude=magnitude, seed=int(net_seed))
        inv = sweep(net, SweepConfig(schedule=schedule, max_steps=max_steps, cap=cap))
        unresolved_count += len(inv.unresolved)
        for cyc in inv.cycles:
            counts[cyc.length] = counts.get(cyc.length, 0) + 1
            if pol != "mixed" and cyc.length > 2:
                violations.append(PolarityViolation(trial=trial, seed=int(net_seed), cycle=cyc))
    return PolarityReport(
        polarity=pol, n=n, trials=trials, magnitude=magnitude,
        cycle_length_counts=dict(sorted(counts.items())),
        violations=tuple(violations),
        unresolved_count=unresolved_count,
    )
