"""The AND/OR split ``v = v_and + v_or`` and the search for its sparsest form.

With ``v_and = v/2 + γ`` and ``v_or = v/2 - γ`` both spectra are affine in γ:

    I_and = M (v/2 + γ)          I_or = -M R (v/2 - γ)

where ``M`` is the subset Möbius operator and ``R`` the reflection. The L1 loss
over nonempty masks is therefore convex and piecewise linear in γ, and a
subgradient is ``Mᵀ s_and + R Mᵀ s_or`` with ``s = sign(I)`` (``R`` is its own
transpose and inverse).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .errors import Diverged, InputError
from .game import ValueTable
from .interactions import and_spectrum, or_spectrum

log = logging.getLogger(__name__)

FIXED_MODES = ("and-only", "or-only", "balanced")
MODES = FIXED_MODES + ("learned",)


@dataclass(frozen=True, eq=False)
class AndOrSplit:
    table: ValueTable
    gamma: np.ndarray
    mode: str
    # best-so-far loss per iteration; only filled by optimize_gamma
    history: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self):
        gamma = lattice.as_lattice(self.gamma)
        if len(gamma) != len(self.table.values):
            raise InputError("gamma must have one entry per mask")
        if self.mode not in MODES:
            raise InputError(f"unknown split mode {self.mode!r}")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)

    @property
    def v_and(self) -> np.ndarray:
        return 0.5 * self.table.values + self.gamma

    @property
    def v_or(self) -> np.ndarray:
        return 0.5 * self.table.values - self.gamma


def split_fixed(table: ValueTable, mode: str) -> AndOrSplit:
    if mode == "and-only":
        gamma = 0.5 * table.values
    elif mode == "or-only":
        gamma = -0.5 * table.values
    elif mode == "balanced":
        gamma = np.zeros_like(table.values)
    else:
        raise InputError(f"mode must be one of {', '.join(FIXED_MODES)}, got {mode!r}")
    return AndOrSplit(table, gamma, mode)


def split_with_gamma(table: ValueTable, gamma, mode: str = "learned") -> AndOrSplit:
    return AndOrSplit(table, np.asarray(gamma, dtype=np.float64), mode)


def _loss_of(i_and: np.ndarray, i_or: np.ndarray) -> float:
    # ∅ is excluded: I_and(∅) is the baseline share, I_or(∅) is undefined
    return float(np.abs(i_and[1:]).sum() + np.abs(i_or[1:]).sum())


def sparsity_loss(split: AndOrSplit) -> float:
    """``Σ_{S≠∅} |I_and(S)| + |I_or(S)|``."""
    return _loss_of(and_spectrum(split.v_and), or_spectrum(split.v_or))


def loss_and_subgradient(table: ValueTable, gamma: np.ndarray) -> tuple[float, np.ndarray]:
    half = 0.5 * table.values
    i_and = and_spectrum(half + gamma)
    i_or = or_spectrum(half - gamma)
    s_and = np.sign(i_and)
    s_or = np.sign(i_or)
    s_and[0] = 0.0
    s_or[0] = 0.0
    grad = lattice.superset_mobius_transform(s_and)
    grad += lattice.reflect(lattice.superset_mobius_transform(s_or))
    return _loss_of(i_and, i_or), grad


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for :func:`optimize_gamma`.

    ``method="primal-dual"`` (default) runs a Chambolle-Pock iteration on the
    AND spectrum; ``method="subgradient"`` runs plain subgradient descent on γ
    with ``step_t = step0 / (1 + t)**decay`` along the subgradient scaled to
    unit max-norm. ``step0=None`` means ``0.05 * max(1, max|v|)`` for
    subgradient descent and the largest stable step for primal-dual, where an
    explicit ``step0`` sets the primal step (the dual step follows from it).
    ``decay`` only affects subgradient descent.

    Both stop early once the best loss improves by less than ``tol``
    (relative) over a window of ``patience`` iterations.
    """

    max_iters: int = 2000
    step0: float | None = None
    decay: float = 0.5
    tol: float = 1e-7
    seed: int = 0
    patience: int = 500
    method: str = "primal-dual"

    def __post_init__(self):
        if self.max_iters < 1:
            raise InputError("max_iters must be >= 1")
        if self.step0 is not None and not self.step0 > 0:
            raise InputError("step0 must be > 0")
        if not self.tol >= 0:
            raise InputError("tol must be >= 0")
        if self.decay < 0:
            raise InputError("decay must be >= 0")
        if self.patience < 1:
            raise InputError("patience must be >= 1")
        if self.method not in OPTIMIZERS:
            raise InputError(f"unknown optimizer method {self.method!r}")


OPTIMIZERS = ("primal-dual", "subgradient")


def _or_from_and(u: np.ndarray) -> np.ndarray:
    """Linear part of the map AND spectrum -> OR spectrum: ``M R Z u``."""
    return lattice.mobius_transform(lattice.reflect(lattice.zeta_transform(u)))


def _or_from_and_adjoint(y: np.ndarray) -> np.ndarray:
    return lattice.superset_zeta_transform(lattice.reflect(lattice.superset_mobius_transform(y)))


def or_operator_norm(n: int) -> float:
    """Spectral norm of :func:`_or_from_and`.

    For one variable the operator is ``[[1, 1], [0, -1]]`` with largest
    singular value the golden ratio; the n-variable operator is its n-fold
    Kronecker power.
    """
    return ((1.0 + 5.0**0.5) / 2.0) ** n


class _Tracker:
    def __init__(self, table: ValueTable, start: AndOrSplit, patience: int, tol: float):
        self.table = table
        self.initial = sparsity_loss(start)
        self.best_loss = self.initial
        self.best_gamma = start.gamma.copy()
        self.history = [self.best_loss]
        self.patience = patience
        self.tol = tol
        self._window = self.initial

    def update(self, t: int, loss: float, gamma_fn) -> bool:
        """Record iteration ``t``; returns False when the run should stop."""
        if not np.isfinite(loss) or loss > 1e3 * self.initial:
            raise Diverged(
                f"loss {loss:.6g} at iteration {t + 1} exceeds 1000x the initial {self.initial:.6g}"
            )
        if loss < self.best_loss:
            self.best_loss, self.best_gamma = loss, gamma_fn()
        self.history.append(self.best_loss)
        if self.best_loss == 0.0:
            return False
        if (t + 1) % self.patience == 0:
            if self._window - self.best_loss <= self.tol * self._window:
                log.debug("stopping at iteration %d: best loss %.6g", t + 1, self.best_loss)
                return False
            self._window = self.best_loss
        return True


def _run_subgradient(table: ValueTable, config: OptimizerConfig, track: _Tracker):
    gamma = track.best_gamma.copy()
    loss, grad = loss_and_subgradient(table, gamma)
    step0 = config.step0 if config.step0 is not None else 0.05 * max(1.0, float(np.abs(table.values).max()))
    for t in range(config.max_iters):
        scale = float(np.abs(grad).max())
        if scale == 0.0:
            break  # zero subgradient: current point is optimal
        gamma -= (step0 / (1.0 + t) ** config.decay / scale) * grad
        loss, grad = loss_and_subgradient(table, gamma)
        if not track.update(t, loss, gamma.copy):
            break


def _run_primal_dual(table: ValueTable, config: OptimizerConfig, track: _Tracker):
    # Variables: u = I_and (so γ = Z u - v/2). Then I_or = K u + b with
    # K = M R Z and b = or_spectrum(v), and the loss is
    # ||u[1:]||_1 + ||(K u + b)[1:]||_1.
    values = table.values
    half = 0.5 * values
    b = or_spectrum(values)
    norm = or_operator_norm(table.n)
    tau = config.step0 if config.step0 is not None else 0.99 / norm
    sigma = 0.99 / (tau * norm * norm)

    u = and_spectrum(half + track.best_gamma)
    u_bar = u.copy()
    y = np.zeros_like(u)

    for t in range(config.max_iters):
        y += sigma * (_or_from_and(u_bar) + b)
        np.clip(y, -1.0, 1.0, out=y)
        y[0] = 0.0
        u_new = u - tau * _or_from_and_adjoint(y)
        shrink = np.maximum(np.abs(u_new[1:]) - tau, 0.0)
        u_new[1:] = np.sign(u_new[1:]) * shrink
        u_bar = 2.0 * u_new - u
        u = u_new
        loss = float(np.abs(u[1:]).sum() + np.abs((_or_from_and(u) + b)[1:]).sum())
        if not track.update(t, loss, lambda: lattice.zeta_transform(u) - half):
            break


def optimize_gamma(table: ValueTable, config: OptimizerConfig = OptimizerConfig()) -> AndOrSplit:
    """Learn γ minimizing :func:`sparsity_loss`.

    Starts from the best of the three fixed splits (balanced on ties), so the
    result is never worse than any of them, and returns the best iterate seen.
    The iteration is deterministic; ``config.seed`` is only recorded.

    Raises :class:`Diverged` if an iterate's loss exceeds 1000x the starting loss.
    """
    candidates = [split_fixed(table, m) for m in ("balanced", "and-only", "or-only")]
    start = min(candidates, key=sparsity_loss)
    track = _Tracker(table, start, config.patience, config.tol)
    if track.initial > 0.0:
        if config.method == "subgradient":
            _run_subgradient(table, config, track)
        else:
            _run_primal_dual(table, config, track)
    return AndOrSplit(table, track.best_gamma, "learned", history=tuple(track.history))


def make_split(table: ValueTable, mode: str, config: OptimizerConfig | None = None) -> AndOrSplit:
    if mode == "learned":
        return optimize_gamma(table, config or OptimizerConfig())
    return split_fixed(table, mode)
