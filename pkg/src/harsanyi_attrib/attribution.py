"""Attributions as allocations of interaction effects.

Each interaction ``T`` carries the effect ``I_and(T) + I_or(T)``. Shapley
splits it evenly over the members of ``T``; Banzhaf gives each member
``1 / 2^(|T|-1)`` of it; a coalition ``S ⊆ T`` receives ``|S| / |T|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .errors import EmptyCoalition, IndexOutOfRange, VariableNotInCoalition
from .interactions import InteractionSpectrum

# breakdown entries below this magnitude are dropped from reports
TERM_PRUNE = 1e-12


@dataclass(frozen=True)
class AttributionVector:
    n: int
    phi: np.ndarray
    banzhaf: np.ndarray


@dataclass(frozen=True)
class ConflictTerm:
    mask: int
    weight: float
    contribution: float


@dataclass(frozen=True, eq=False)
class ConflictReport:
    coalition: int
    varphi: float
    shapley_sum: float
    partial_overlap_residual: float
    # breakdown over partially overlapping T, kept as parallel arrays
    term_masks: np.ndarray
    term_weights: np.ndarray
    term_contributions: np.ndarray

    @property
    def per_term_breakdown(self) -> tuple[ConflictTerm, ...]:
        return tuple(
            ConflictTerm(int(m), float(w), float(c))
            for m, w, c in zip(self.term_masks, self.term_weights, self.term_contributions)
        )

    @property
    def identity_error(self) -> float:
        return abs(self.varphi - (self.shapley_sum - self.partial_overlap_residual))


@dataclass(frozen=True)
class EfficiencyReport:
    coalition: int
    varphi: float
    outside_phi: float
    residual: float
    total: float
    target: float

    @property
    def error(self) -> float:
        return abs(self.total - self.target)


def _check_coalition(spectrum: InteractionSpectrum, mask: int) -> int:
    mask = int(mask)
    if mask == 0:
        raise EmptyCoalition("coalition must be nonempty")
    if mask < 0 or mask >= 1 << spectrum.n:
        raise IndexOutOfRange(f"coalition mask {mask} does not fit in n={spectrum.n} bits")
    return mask


def _sizes(spectrum: InteractionSpectrum) -> np.ndarray:
    sizes = lattice.popcounts(spectrum.n).astype(np.float64)
    sizes[0] = 1.0  # ∅ carries no effect; avoids 0/0
    return sizes


def shapley_from_interactions(spectrum: InteractionSpectrum) -> np.ndarray:
    return lattice.member_sums(spectrum.total / _sizes(spectrum), spectrum.n)


def banzhaf_from_interactions(spectrum: InteractionSpectrum) -> np.ndarray:
    weights = np.exp2(1.0 - lattice.popcounts(spectrum.n))
    return lattice.member_sums(spectrum.total * weights, spectrum.n)


def attributions(spectrum: InteractionSpectrum) -> AttributionVector:
    return AttributionVector(
        spectrum.n, shapley_from_interactions(spectrum), banzhaf_from_interactions(spectrum)
    )


def allocation_weights(spectrum: InteractionSpectrum, mask: int) -> np.ndarray:
    """``|S| / |T|`` on supersets ``T ⊇ S`` and 0 elsewhere."""
    mask = _check_coalition(spectrum, mask)
    all_masks = lattice.masks(spectrum.n)
    weights = lattice.popcount(mask) / _sizes(spectrum)
    weights[(all_masks & mask) != mask] = 0.0
    return weights


def coalition_attribution(spectrum: InteractionSpectrum, mask: int) -> float:
    """``φ(S) = Σ_{T⊇S} |S|/|T| (I_and(T) + I_or(T))``."""
    return float(np.dot(allocation_weights(spectrum, mask), spectrum.total))


def _partial_overlap(spectrum: InteractionSpectrum, mask: int):
    all_masks = lattice.masks(spectrum.n)
    overlap = all_masks & mask
    partial = (overlap != 0) & (overlap != mask)
    weights = lattice.popcounts(spectrum.n)[overlap] / _sizes(spectrum)
    weights[~partial] = 0.0
    return partial, weights


def conflict_decomposition(
    spectrum: InteractionSpectrum, mask: int, phi: np.ndarray | None = None
) -> ConflictReport:
    """Split ``φ(S)`` against ``Σ_{i∈S} φ(i)``.

    The gap is the residual ``Σ |T∩S|/|T| (I_and(T) + I_or(T))`` over
    interactions ``T`` that contain some but not all of ``S``.
    """
    mask = _check_coalition(spectrum, mask)
    if phi is None:
        phi = shapley_from_interactions(spectrum)
    total = spectrum.total
    partial, weights = _partial_overlap(spectrum, mask)
    idx = np.flatnonzero(partial)
    contributions = weights[idx] * total[idx]
    return ConflictReport(
        coalition=mask,
        varphi=coalition_attribution(spectrum, mask),
        shapley_sum=float(sum(phi[i] for i in lattice.mask_members(mask))),
        partial_overlap_residual=math.fsum(contributions),
        term_masks=idx,
        term_weights=weights[idx],
        term_contributions=contributions,
    )


def per_variable_decomposition(spectrum: InteractionSpectrum, mask: int, i: int) -> tuple[float, float]:
    """``φ(i) = φ(S)/|S| + Σ_{T∋i, T⊉S} (I_and(T) + I_or(T)) / |T|`` as ``(share, residual)``."""
    mask = _check_coalition(spectrum, mask)
    if not 0 <= i < spectrum.n or not mask >> i & 1:
        raise VariableNotInCoalition(f"variable {i} is not in coalition {mask:#b}")
    all_masks = lattice.masks(spectrum.n)
    share = coalition_attribution(spectrum, mask) / lattice.popcount(mask)
    keep = ((all_masks >> i & 1) == 1) & ((all_masks & mask) != mask)
    residual = float((spectrum.total / _sizes(spectrum))[keep].sum())
    return share, residual


def efficiency_report(
    spectrum: InteractionSpectrum, mask: int, target: float, phi: np.ndarray | None = None
) -> EfficiencyReport:
    """``v(N) - v(∅) = φ(S) + Σ_{i∉S} φ(i) + partial-overlap residual``.

    ``target`` is ``v(N) - v(∅)`` of the table the spectrum came from.
    """
    mask = _check_coalition(spectrum, mask)
    if phi is None:
        phi = shapley_from_interactions(spectrum)
    varphi = coalition_attribution(spectrum, mask)
    outside = [i for i in range(spectrum.n) if not mask >> i & 1]
    outside_phi = float(sum(phi[i] for i in outside))
    _, weights = _partial_overlap(spectrum, mask)
    residual = float(np.dot(weights, spectrum.total))
    return EfficiencyReport(
        coalition=mask,
        varphi=varphi,
        outside_phi=outside_phi,
        residual=residual,
        total=varphi + outside_phi + residual,
        target=float(target),
    )
