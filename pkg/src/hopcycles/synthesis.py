"""Spectral synthesis of symmetric weight matrices with prescribed corners.

Given mutually orthogonal hypercube corners X_j (wanted stable, eigenvalue
mu_j > 0) and Y_j (wanted anti-stable, eigenvalue -beta_j < 0), the matrix

    W = sum_j (mu_j / n) X_j X_j^T  -  sum_j (beta_j / n) Y_j Y_j^T

has each corner as an exact eigenvector with the prescribed eigenvalue,
making it stable resp. anti-stable. When every value is rational the
construction is carried out in Fraction arithmetic, so the eigen
relations hold with zero residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

from .core import (
    BipolarState,
    Network,
    corner_eigen_check,
    decode_state,
    is_antistable,
    is_stable,
    _weights_of,
)

__all__ = [
    "OrthogonalityError",
    "PatternSpec",
    "LandscapeEntry",
    "LandscapeReport",
    "check_orthogonal",
    "synthesize_stable",
    "synthesize_mixed",
    "zero_diagonal",
    "verify_landscape",
]


class OrthogonalityError(ValueError):
    """A pattern family required to be mutually orthogonal is not.

    Carries the first offending pair of pattern indices as ``pair``.
    """

    def __init__(self, i: int, j: int, dot: int):
        self.pair = (i, j)
        self.dot = dot
        super().__init__(f"patterns {i} and {j} are not orthogonal (dot product {dot})")


@dataclass(frozen=True)
class PatternSpec:
    """A target corner plus its desired eigenvalue magnitude (> 0)."""

    pattern: BipolarState
    value: float | int | Fraction

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("spec value must be positive")


def _dot(a: BipolarState, b: BipolarState) -> int:
    return int(a.components.astype(np.int64) @ b.components.astype(np.int64))


def _first_nonorthogonal(patterns: Sequence[BipolarState]):
    for i in range(len(patterns)):
        for j in range(i + 1, len(patterns)):
            if patterns[i].n != patterns[j].n:
                raise ValueError("patterns must all have the same length")
            d = _dot(patterns[i], patterns[j])
            if d != 0:
                return i, j, d
    return None


def check_orthogonal(patterns: Sequence[BipolarState]) -> bool:
    """True iff every distinct pair of patterns has dot product zero."""
    return _first_nonorthogonal(list(patterns)) is None


def _require_orthogonal(patterns: Sequence[BipolarState]) -> None:
    bad = _first_nonorthogonal(list(patterns))
    if bad is not None:
        raise OrthogonalityError(*bad)


def _accumulate(specs: Sequence[PatternSpec], n: int, exact: bool) -> np.ndarray:
    if exact:
        acc = np.array([[Fraction(0)] * n for _ in range(n)], dtype=object)
    else:
        acc = np.zeros((n, n), dtype=np.float64)
    for spec in specs:
        x = spec.pattern.components.astype(np.int64)
        outer = np.outer(x, x)
        if exact:
            acc = acc + outer.astype(object) * (Fraction(spec.value) / n)
        else:
            acc = acc + outer * (float(spec.value) / n)
    return acc


def _synthesize(stable_specs, antistable_specs, n: int) -> np.ndarray:
    stable_specs = list(stable_specs)
    antistable_specs = list(antistable_specs)
    if not stable_specs and not antistable_specs:
        raise ValueError("at least one pattern spec is required")
    if len(stable_specs) + len(antistable_specs) > n:
        raise ValueError(
            f"{len(stable_specs)} stable + {len(antistable_specs)} anti-stable patterns "
            f"exceed the network order {n}")
    patterns = [s.pattern for s in stable_specs] + [s.pattern for s in antistable_specs]
    for p in patterns:
        if p.n != n:
            raise ValueError(f"pattern length {p.n} does not match order {n}")
    _require_orthogonal(patterns)
    exact = all(isinstance(s.value, Rational) for s in stable_specs + antistable_specs)
    w = _accumulate(stable_specs, n, exact)
    if antistable_specs:
        w = w - _accumulate(antistable_specs, n, exact)
    return w


def synthesize_stable(specs: Sequence[PatternSpec], n: int) -> np.ndarray:
    """Symmetric PSD matrix with each spec pattern stable at its eigenvalue.

    Every pattern X_j satisfies W X_j = mu_j X_j exactly for rational
    values; corners orthogonal to all patterns lie in the kernel.
    """
    specs = list(specs)
    if not specs:
        raise ValueError("at least one pattern spec is required")
    return _synthesize(specs, [], n)


def synthesize_mixed(stable_specs: Sequence[PatternSpec],
                     antistable_specs: Sequence[PatternSpec],
                     n: int) -> np.ndarray:
    """Symmetric matrix with prescribed stable and anti-stable corners.

    The combined pattern family must be mutually orthogonal (the eigen
    relations force cross-orthogonality, so it is checked as one family).
    """
    return _synthesize(stable_specs, antistable_specs, n)


def zero_diagonal(weights) -> np.ndarray:
    """Copy of W with every diagonal entry set to zero.

    Corner energies shift by exactly Trace(W), so the landscape's ordering
    of corners (and all stable/anti-stable locations) is unchanged.
    """
    w = _weights_of(weights).copy()
    np.fill_diagonal(w, 0.0 if w.dtype == np.float64 else 0)
    return w


@dataclass(frozen=True)
class LandscapeEntry:
    label: int
    pattern: BipolarState
    claimed_role: str  # "stable" | "anti-stable"
    verified: bool
    eigenvalue: float | Fraction | int | None


@dataclass(frozen=True)
class LandscapeReport:
    entries: tuple[LandscapeEntry, ...]

    @property
    def all_verified(self) -> bool:
        return all(e.verified for e in self.entries)


def verify_landscape(weights, stable_claims: Sequence[BipolarState],
                     antistable_claims: Sequence[BipolarState]) -> LandscapeReport:
    """Check each claimed corner with the actual predicates (thresholds zero).

    Eigenvalues are attached whenever the corner happens to be an exact
    eigenvector (within the default tolerance), which is always the case
    for matrices built by the synthesis functions.
    """
    w = _weights_of(weights)
    net = Network(w)
    entries = []
    for role, claims in (("stable", stable_claims), ("anti-stable", antistable_claims)):
        for v in claims:
            if v.n != w.shape[0]:
                raise ValueError(f"claimed pattern has {v.n} components, matrix is {w.shape[0]}")
            ok = is_stable(net, v) if role == "stable" else is_antistable(w, v)
            lam = corner_eigen_check(w, v)
            entries.append(LandscapeEntry(
                label=decode_state(v), pattern=v, claimed_role=role,
                verified=bool(ok), eigenvalue=lam))
    return LandscapeReport(tuple(entries))
