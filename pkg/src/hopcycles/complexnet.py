"""Complex-valued networks on the complex hypercube {±1 ± j}^n.

The activation is the componentwise complex signum
``csign(a + jb) = sign(a) + j*sign(b)`` with the same non-negative tie
rule as the real case. A complex network of order n with zero thresholds
behaves identically to the real network of order 2n obtained by
:func:`realify` acting on stacked (Re, Im) vectors, which is the oracle
used in the tests.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import BipolarState, Network, sign_activation

__all__ = [
    "ComplexBipolarState",
    "ComplexNetwork",
    "csign",
    "cstep_parallel",
    "cstep_serial",
    "is_cstable",
    "cencode_state",
    "cdecode_state",
    "realify",
    "realify_state",
    "complexify_state",
    "hermitian_energy_diagnostic",
]

_CORNERS = (1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j)


def csign(z: complex) -> complex:
    """Componentwise complex signum: sign(Re z) + j*sign(Im z)."""
    z = complex(z)
    return complex(sign_activation(z.real), sign_activation(z.imag))


class ComplexBipolarState:
    """Immutable vector with every component in {1+j, 1-j, -1+j, -1-j}."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[complex]):
        arr = np.asarray(components if isinstance(components, np.ndarray) else list(components),
                         dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("state must be a nonempty 1-d vector")
        ok = np.isin(arr.real, (1.0, -1.0)) & np.isin(arr.imag, (1.0, -1.0))
        if not np.all(ok):
            raise ValueError("components must lie on the complex hypercube {±1 ± j}")
        arr.flags.writeable = False
        object.__setattr__(self, "components", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexBipolarState is immutable")

    @property
    def n(self) -> int:
        return self.components.shape[0]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexBipolarState):
            return NotImplemented
        return self.components.shape == other.components.shape and bool(
            np.array_equal(self.components, other.components)
        )

    def __hash__(self) -> int:
        return hash(self.components.tobytes())

    def __repr__(self) -> str:
        return f"ComplexBipolarState({list(self.components)})"

    def label(self) -> int:
        return cdecode_state(self)

    @classmethod
    def from_label(cls, label: int, n: int) -> "ComplexBipolarState":
        return cencode_state(label, n)


class ComplexNetwork:
    """Complex weight matrix (not necessarily Hermitian) plus thresholds."""

    __slots__ = ("weights", "thresholds")

    def __init__(self, weights, thresholds=None):
        w = np.asarray(weights, dtype=np.complex128)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise ValueError("weights must be a nonempty square matrix")
        if not np.all(np.isfinite(w.real)) or not np.all(np.isfinite(w.imag)):
            raise ValueError("weights must be finite")
        n = w.shape[0]
        if thresholds is None:
            t = np.zeros(n, dtype=np.complex128)
        else:
            t = np.asarray(thresholds, dtype=np.complex128)
            if t.shape != (n,):
                raise ValueError(f"thresholds must have length {n}")
            if not np.all(np.isfinite(t.real)) or not np.all(np.isfinite(t.imag)):
                raise ValueError("thresholds must be finite")
        w = w.copy()
        t = t.copy()
        w.flags.writeable = False
        t.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "thresholds", t)

    def __setattr__(self, name, value):
        raise AttributeError("ComplexNetwork is immutable")

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def __repr__(self) -> str:
        return f"ComplexNetwork(n={self.n})"


def _cfields(net: ComplexNetwork, v: ComplexBipolarState) -> np.ndarray:
    if v.n != net.n:
        raise ValueError(f"state has {v.n} components, network has {net.n} neurons")
    return net.weights @ v.components - net.thresholds


def _csign_vec(f: np.ndarray) -> np.ndarray:
    return np.where(f.real >= 0, 1.0, -1.0) + 1j * np.where(f.imag >= 0, 1.0, -1.0)


def cstep_parallel(net: ComplexNetwork, v: ComplexBipolarState) -> ComplexBipolarState:
    """Apply csign to every local field, all from the same input state."""
    return ComplexBipolarState(_csign_vec(_cfields(net, v)))


def cstep_serial(net: ComplexNetwork, v: ComplexBipolarState, i: int) -> ComplexBipolarState:
    """Update only component i; the rest carry over."""
    if not 0 <= i < net.n:
        raise IndexError(f"neuron index {i} out of range for n={net.n}")
    f = _cfields(net, v)
    comps = v.components.copy()
    comps[i] = csign(f[i])
    return ComplexBipolarState(comps)


def is_cstable(net: ComplexNetwork, v: ComplexBipolarState) -> bool:
    """Fixed point of the parallel update (hence of every update mode)."""
    return cstep_parallel(net, v) == v


def cencode_state(d: int, n: int) -> ComplexBipolarState:
    """Label -> state: 2 bits per neuron, MSB-first, Re bit before Im bit."""
    d = int(d)
    if n < 1:
        raise ValueError("state width must be positive")
    if not 0 <= d < (1 << (2 * n)):
        raise ValueError(f"label {d} out of range for {n} complex components")
    comps = []
    for k in range(n):
        re = 1 if (d >> (2 * n - 1 - 2 * k)) & 1 else -1
        im = 1 if (d >> (2 * n - 2 - 2 * k)) & 1 else -1
        comps.append(complex(re, im))
    return ComplexBipolarState(comps)


def cdecode_state(v: ComplexBipolarState) -> int:
    """Inverse of :func:`cencode_state`."""
    n = v.n
    d = 0
    for k, z in enumerate(v.components):
        if z.real > 0:
            d |= 1 << (2 * n - 1 - 2 * k)
        if z.imag > 0:
            d |= 1 << (2 * n - 2 - 2 * k)
    return d


def realify(net: ComplexNetwork) -> Network:
    """Real block embedding [[Re W, -Im W], [Im W, Re W]] of order 2n.

    Acting on stacked (Re v; Im v) vectors this reproduces the complex
    dynamics exactly, ties included.
    """
    wr, wi = net.weights.real, net.weights.imag
    w = np.block([[wr, -wi], [wi, wr]])
    t = np.concatenate([net.thresholds.real, net.thresholds.imag])
    return Network(w, t)


def realify_state(v: ComplexBipolarState) -> BipolarState:
    """Stack (Re v; Im v) into a 2n-component bipolar state."""
    return BipolarState(np.concatenate([v.components.real, v.components.imag]).astype(np.int8))


def complexify_state(v: BipolarState) -> ComplexBipolarState:
    """Inverse of :func:`realify_state` (first half Re, second half Im)."""
    if v.n % 2:
        raise ValueError("need an even number of components to form a complex state")
    n = v.n // 2
    comps = v.components[:n] + 1j * v.components[n:]
    return ComplexBipolarState(comps)


def hermitian_energy_diagnostic(net: ComplexNetwork, v: ComplexBipolarState) -> float:
    """Re(v^H W v); nonstandard, diagnostic only — no landscape guarantees."""
    f = net.weights @ v.components
    return float(np.real(np.conj(v.components) @ f))
