"""AND and OR interaction spectra of a split game, and output reconstruction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import lattice

if TYPE_CHECKING:
    from .andor import AndOrSplit


def and_spectrum(v_and: np.ndarray) -> np.ndarray:
    """Harsanyi dividends of ``v_and``; the ∅ slot keeps ``v_and(∅)``."""
    return lattice.mobius_transform(v_and)


def or_spectrum(v_or: np.ndarray) -> np.ndarray:
    """OR interactions of ``v_or``: minus the Möbius transform of the reflected table.

    The ∅ entry is undefined for OR interactions and is set to 0.
    """
    out = lattice.mobius_transform(lattice.reflect(v_or))
    np.negative(out, out=out)
    out[0] = 0.0
    return out


def and_interactions(split: "AndOrSplit") -> np.ndarray:
    return and_spectrum(split.v_and)


def or_interactions(split: "AndOrSplit") -> np.ndarray:
    return or_spectrum(split.v_or)


@dataclass(frozen=True, eq=False)
class InteractionSpectrum:
    n: int
    i_and: np.ndarray
    i_or: np.ndarray
    baseline: float

    def __post_init__(self):
        for arr in (self.i_and, self.i_or):
            arr.setflags(write=False)

    @property
    def total(self) -> np.ndarray:
        """``I_and + I_or`` on nonempty masks, 0 at ∅."""
        out = self.i_and + self.i_or
        out[0] = 0.0
        return out

    def __add__(self, other: "InteractionSpectrum") -> "InteractionSpectrum":
        return InteractionSpectrum(
            self.n, self.i_and + other.i_and, self.i_or + other.i_or, self.baseline + other.baseline
        )


def compute_spectrum(split: "AndOrSplit") -> InteractionSpectrum:
    return InteractionSpectrum(
        n=split.table.n,
        i_and=and_interactions(split),
        i_or=or_interactions(split),
        baseline=split.table.baseline,
    )


def reconstruct_value(spectrum: InteractionSpectrum, mask: int) -> float:
    """``v(∅) + Σ_{∅≠L⊆S} I_and(L) + Σ_{L∩S≠∅} I_or(L)`` for the coalition ``mask``."""
    if mask == 0:
        return spectrum.baseline
    all_masks = lattice.masks(spectrum.n)
    subsets = (all_masks & ~mask) == 0
    subsets[0] = False
    touching = (all_masks & mask) != 0
    return (
        spectrum.baseline
        + float(spectrum.i_and[subsets].sum())
        + float(spectrum.i_or[touching].sum())
    )


def reconstruct_all(spectrum: InteractionSpectrum) -> np.ndarray:
    """Reconstruction of every ``v(S)`` at once in O(n 2^n).

    ``Σ_{L∩S≠∅} I_or(L)`` is the total OR mass minus the mass of the subsets of
    the complement, i.e. a reflected zeta transform.
    """
    and_part = spectrum.i_and.copy()
    and_part[0] = 0.0
    and_part = lattice.zeta_transform(and_part)
    or_sub = lattice.zeta_transform(spectrum.i_or)
    or_part = or_sub[-1] - or_sub[::-1]
    return spectrum.baseline + and_part + or_part
