"""Numerical identity suite run by the ``verify`` command.

Every check compares two independently computed quantities on a given table
across several AND/OR splits. The identities hold for any table and any γ, so
a failure points at the engine, not the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lattice, oracle
from .andor import OptimizerConfig, optimize_gamma, split_fixed, split_with_gamma
from .attribution import (
    banzhaf_from_interactions,
    coalition_attribution,
    conflict_decomposition,
    efficiency_report,
    per_variable_decomposition,
    shapley_from_interactions,
)
from .errors import CapExceeded
from .game import ValueTable
from .interactions import compute_spectrum, reconstruct_value

RELATIVE_TOL = 1e-9
SINGLETON_TOL = 1e-12
TRANSFORM_TOL = 1e-12


@dataclass
class IdentityResult:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def _splits(table: ValueTable, gamma_draws: int, seed: int, config: OptimizerConfig | None):
    yield from (split_fixed(table, m) for m in ("and-only", "or-only", "balanced"))
    if config is not None:
        yield optimize_gamma(table, config)
    rng = np.random.default_rng(seed)
    for _ in range(gamma_draws):
        yield split_with_gamma(table, rng.uniform(-1.0, 1.0, size=len(table.values)), "learned")


def run_identity_suite(
    table: ValueTable,
    gamma_draws: int = 5,
    seed: int = 0,
    config: OptimizerConfig | None = OptimizerConfig(max_iters=300),
) -> list[IdentityResult]:
    """Check every attribution identity on ``table``; requires ``n <= 12``.

    ``config=None`` skips the learned split.
    """
    n = table.n
    if n > oracle.ORACLE_N_CAP:
        raise CapExceeded(f"verify needs the reference oracle, which supports n <= {oracle.ORACLE_N_CAP}")
    v = table.values
    scale = max(1.0, float(np.abs(v).max()))
    errors: dict[str, float] = {}

    def record(name, err):
        errors[name] = max(errors.get(name, 0.0), float(err))

    record("mobius_fast_vs_naive", np.abs(lattice.mobius_transform(v) - oracle.mobius_naive(v)).max() / scale)
    record("zeta_mobius_roundtrip", np.abs(lattice.zeta_transform(lattice.mobius_transform(v)) - v).max() / scale)

    shapley_ref = np.array([oracle.shapley_direct(table, i) for i in range(n)])
    banzhaf_ref = np.array([oracle.banzhaf_direct(table, i) for i in range(n)])
    target = table.grand - table.baseline
    rng = np.random.default_rng(seed + 1)
    pair_count = min(256, n << n)

    for split in _splits(table, gamma_draws, seed, config):
        spec = compute_spectrum(split)
        v_and, v_or = split.v_and, split.v_or
        record("split_conservation", np.abs(v_and + v_or - v).max() / scale)
        naive_and = np.array([oracle.harsanyi_and_direct(v_and, s) for s in range(1 << n)])
        naive_or = np.array([0.0] + [oracle.harsanyi_or_direct(v_or, s) for s in range(1, 1 << n)])
        record("and_interactions_vs_naive", np.abs(spec.i_and - naive_and).max() / scale)
        record("or_interactions_vs_naive", np.abs(spec.i_or - naive_or).max() / scale)

        recon = np.array([reconstruct_value(spec, s) for s in range(1 << n)])
        record("universal_matching", np.abs(recon - v).max() / scale)
        record("sum_rule", abs(spec.total.sum() - target) / scale)

        phi = shapley_from_interactions(spec)
        record("shapley_reformulation", np.abs(phi - shapley_ref).max() / scale)
        record("banzhaf_reformulation", np.abs(banzhaf_from_interactions(spec) - banzhaf_ref).max() / scale)
        record("shapley_efficiency", abs(phi.sum() - target) / scale)
        record(
            "singleton_coalition_equals_shapley",
            max(abs(coalition_attribution(spec, 1 << i) - phi[i]) for i in range(n)) / scale,
        )
        for s in range(1, 1 << n):
            record("conflict_identity", conflict_decomposition(spec, s, phi).identity_error / scale)
            record("coalition_efficiency", efficiency_report(spec, s, target, phi).error / scale)
        for _ in range(pair_count):
            s = int(rng.integers(1, 1 << n))
            i = int(rng.choice(lattice.mask_members(s)))
            share, residual = per_variable_decomposition(spec, s, i)
            record("per_variable_decomposition", abs(share + residual - phi[i]) / scale)

    tolerances = {
        "mobius_fast_vs_naive": TRANSFORM_TOL,
        "zeta_mobius_roundtrip": TRANSFORM_TOL,
        "singleton_coalition_equals_shapley": SINGLETON_TOL,
    }
    return [IdentityResult(name, err, tolerances.get(name, RELATIVE_TOL)) for name, err in errors.items()]
