"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with the measured error
(or runtime) next to its limit. Run with ``pytest tests/test_acceptance.py -v``.
"""

import itertools
import time

import numpy as np
import pytest

from harsanyi_attrib import lattice, oracle
from harsanyi_attrib.andor import FIXED_MODES, OptimizerConfig, optimize_gamma, sparsity_loss, split_fixed, split_with_gamma
from harsanyi_attrib.attribution import (
    allocation_weights,
    banzhaf_from_interactions,
    coalition_attribution,
    conflict_decomposition,
    efficiency_report,
    shapley_from_interactions,
)
from harsanyi_attrib.cli import main
from harsanyi_attrib.game import GameSpec, ValueTable, dump_value_table, synth_game
from harsanyi_attrib.interactions import InteractionSpectrum, compute_spectrum, reconstruct_value

from conftest import planted_mixed, scale_of

pytestmark = pytest.mark.acceptance


@pytest.fixture
def verdict(capsys):
    def emit(criterion: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        assert ok, f"{criterion}: {detail}"

    return emit


def _random_games(seed, count, n_values):
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = n_values[k % len(n_values)]
        amplitude = 10.0 ** rng.uniform(-1, 2)
        yield rng, ValueTable.from_values(rng.uniform(-amplitude, amplitude, size=1 << n))


def _fixtures():
    """Games with n <= 8 used by the per-coalition criteria."""
    rng = np.random.default_rng(8)
    games = [
        ValueTable.from_values([0.0, 1.0, 1.0, 3.0]),
        ValueTable.from_values([0.0, 1.0, 1.0, 1.0]),
        synth_game(GameSpec("linear", 3, weights=(1.0, 2.0, 3.0))),
        synth_game(GameSpec("planted-and", 5, and_terms=[(0b00111, 1.0), (0b11000, -2.0), (0b10101, 0.5)])),
        synth_game(GameSpec("planted-or", 4, or_terms=[(0b0011, 1.5), (0b1110, -0.75)])),
        planted_mixed(rng, 6),
        planted_mixed(rng, 8),
    ]
    games += [ValueTable.from_values(rng.uniform(-3, 3, size=1 << n)) for n in range(1, 9)]
    return games


def _splits(table, rng, draws=2, learned=True):
    splits = [split_fixed(table, m) for m in FIXED_MODES]
    if learned:
        splits.append(optimize_gamma(table, OptimizerConfig(max_iters=300)))
    splits += [split_with_gamma(table, rng.uniform(-1, 1, size=len(table.values))) for _ in range(draws)]
    return splits


def test_01_shapley_reformulation(verdict):
    start = time.perf_counter()
    worst = 0.0
    for rng, table in _random_games(1, 200, range(1, 9)):
        direct = np.array([oracle.shapley_direct(table, i) for i in range(table.n)])
        for _ in range(5):
            spec = compute_spectrum(split_with_gamma(table, rng.uniform(-1, 1, size=len(table.values))))
            err = np.abs(shapley_from_interactions(spec) - direct).max() / scale_of(table.values)
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    verdict(
        "1 Shapley reformulation",
        worst <= 1e-9 and elapsed < 30,
        f"max rel err {worst:.3e} (<= 1e-9), {elapsed:.2f}s (< 30s)",
    )


def test_02_banzhaf_reformulation(verdict):
    start = time.perf_counter()
    worst = 0.0
    for rng, table in _random_games(2, 200, range(1, 9)):
        direct = np.array([oracle.banzhaf_direct(table, i) for i in range(table.n)])
        for _ in range(5):
            spec = compute_spectrum(split_with_gamma(table, rng.uniform(-1, 1, size=len(table.values))))
            err = np.abs(banzhaf_from_interactions(spec) - direct).max() / scale_of(table.values)
            worst = max(worst, err)
    elapsed = time.perf_counter() - start
    verdict(
        "2 Banzhaf reformulation",
        worst <= 1e-9 and elapsed < 30,
        f"max rel err {worst:.3e} (<= 1e-9), {elapsed:.2f}s (< 30s)",
    )


def test_03_universal_matching(verdict):
    worst = 0.0
    elapsed_12 = None
    for rng, table in _random_games(3, 12, range(1, 13)):
        start = time.perf_counter()
        for split in _splits(table, rng, draws=20):
            spec = compute_spectrum(split)
            recon = np.array([reconstruct_value(spec, m) for m in range(1 << table.n)])
            worst = max(worst, np.abs(recon - table.values).max() / scale_of(table.values))
        if table.n == 12:
            elapsed_12 = time.perf_counter() - start
    verdict(
        "3 universal matching",
        worst <= 1e-9 and elapsed_12 < 60,
        f"max rel err {worst:.3e} (<= 1e-9), n=12 run {elapsed_12:.2f}s (< 60s)",
    )


def test_04_singleton_coalition(verdict):
    worst = 0.0
    rng = np.random.default_rng(4)
    for table in _fixtures():
        for split in _splits(table, rng):
            spec = compute_spectrum(split)
            phi = shapley_from_interactions(spec)
            for i in range(table.n):
                worst = max(worst, abs(coalition_attribution(spec, 1 << i) - phi[i]) / scale_of(table.values))
    verdict("4 singleton coalition = Shapley", worst <= 1e-12, f"max rel err {worst:.3e} (<= 1e-12)")


def test_05_conflict_theorem(verdict):
    worst = 0.0
    rng = np.random.default_rng(5)
    for table in _fixtures():
        for split in _splits(table, rng):
            spec = compute_spectrum(split)
            phi = shapley_from_interactions(spec)
            for s in range(1, 1 << table.n):
                worst = max(worst, conflict_decomposition(spec, s, phi).identity_error / scale_of(table.values))
    g2 = compute_spectrum(split_fixed(ValueTable.from_values([0.0, 1.0, 1.0, 3.0]), "and-only"))
    report = conflict_decomposition(g2, 0b11)
    triple = (report.varphi, report.shapley_sum, report.partial_overlap_residual)
    verdict(
        "5 conflict theorem",
        worst <= 1e-9 and triple == (1.0, 3.0, 2.0),
        f"max rel err {worst:.3e} (<= 1e-9), [0,1,1,3] triple {triple} (== (1, 3, 2))",
    )


def test_06_efficiency_corollary(verdict):
    worst = 0.0
    rng = np.random.default_rng(6)
    for table in _fixtures():
        target = table.grand - table.baseline
        for split in _splits(table, rng):
            spec = compute_spectrum(split)
            phi = shapley_from_interactions(spec)
            for s in range(1, 1 << table.n):
                worst = max(worst, efficiency_report(spec, s, target, phi).error / scale_of(table.values))
    verdict("6 efficiency corollary", worst <= 1e-9, f"max rel err {worst:.3e} (<= 1e-9)")


def test_07_allocation_weights(verdict):
    # S = {x1, x2}, T1 = S, T2 = {x1, x2, x3}
    s, t1, t2 = 0b011, 0b011, 0b111
    i_and = np.zeros(8)
    i_and[t1], i_and[t2] = 1.25, -0.5
    i_or = np.zeros(8)
    i_or[t2] = 0.75
    spec = InteractionSpectrum(3, i_and, i_or, 0.0)
    weights = allocation_weights(spec, s)
    value = coalition_attribution(spec, s)
    expected = 1.0 * 1.25 + (2.0 / 3.0) * (-0.5 + 0.75)
    ok = weights[t1] == 1.0 and weights[t2] == 2.0 / 3.0 and abs(value - expected) <= 1e-15
    verdict(
        "7 partial-overlap allocation weights",
        ok,
        f"weights T1={float(weights[t1])!r} T2={float(weights[t2])!r} (1, 2/3), "
        f"varphi={float(value)!r} vs {expected!r}",
    )


def test_08_axioms(verdict):
    rng = np.random.default_rng(8)
    n, i, j = 6, 0, 4

    def swap(m):
        bi, bj = m >> i & 1, m >> j & 1
        return m & ~((1 << i) | (1 << j)) | (bj << i) | (bi << j)

    # symmetry: games built invariant under swapping i and j, with symmetric γ
    perm = np.array([swap(m) for m in range(1 << n)])
    sym_err = 0.0
    others = [k for k in range(n) if k not in (i, j)]
    for _ in range(5):
        raw = rng.uniform(-2, 2, size=1 << n)
        table = ValueTable.from_values(raw + raw[perm])
        g = rng.uniform(-1, 1, size=1 << n)
        for split in (split_fixed(table, "and-only"), split_fixed(table, "balanced"), split_with_gamma(table, g + g[perm])):
            spec = compute_spectrum(split)
            for r in range(len(others) + 1):
                for combo in itertools.combinations(others, r):
                    base = sum(1 << k for k in combo)
                    diff = coalition_attribution(spec, base | 1 << i) - coalition_attribution(spec, base | 1 << j)
                    sym_err = max(sym_err, abs(diff) / scale_of(table.values))

    # dummy: augment a 4-variable game with two dummy variables (bits 4, 5)
    dummy_err = 0.0
    for _ in range(5):
        table = ValueTable.from_values(np.tile(rng.uniform(-2, 2, size=16), 4))
        spec = compute_spectrum(split_fixed(table, "and-only"))
        for s in (0b010000, 0b100000, 0b110000):
            dummy_err = max(dummy_err, abs(coalition_attribution(spec, s)) / scale_of(table.values))

    # additivity: φ_{v1+v2, γ1+γ2}(S) = φ_{v1,γ1}(S) + φ_{v2,γ2}(S)
    add_err = 0.0
    for _ in range(5):
        t1 = ValueTable.from_values(rng.uniform(-2, 2, size=1 << n))
        t2 = ValueTable.from_values(rng.uniform(-2, 2, size=1 << n))
        g1, g2 = rng.uniform(-1, 1, size=(2, 1 << n))
        s1 = compute_spectrum(split_with_gamma(t1, g1))
        s2 = compute_spectrum(split_with_gamma(t2, g2))
        s12 = compute_spectrum(split_with_gamma(t1 + t2, g1 + g2))
        scale = scale_of((t1 + t2).values)
        for s in range(1, 1 << n):
            diff = coalition_attribution(s12, s) - coalition_attribution(s1, s) - coalition_attribution(s2, s)
            add_err = max(add_err, abs(diff) / scale)

    verdict(
        "8 axioms",
        max(sym_err, dummy_err, add_err) <= 1e-9,
        f"symmetry {sym_err:.3e}, dummy {dummy_err:.3e}, additivity {add_err:.3e} (each <= 1e-9)",
    )


def test_09_sparsity_optimizer(verdict):
    rng = np.random.default_rng(9)
    start = time.perf_counter()
    worst_gap = -np.inf
    monotone = True
    for _ in range(5):
        table = planted_mixed(rng, 8, n_and=3, n_or=2, low=0.5, high=2.0)
        split = optimize_gamma(table, OptimizerConfig(seed=0))
        fixed = min(sparsity_loss(split_fixed(table, m)) for m in FIXED_MODES)
        worst_gap = max(worst_gap, sparsity_loss(split) - fixed)
        monotone &= bool(np.all(np.diff(split.history) <= 0))
    elapsed = time.perf_counter() - start
    verdict(
        "9 sparsity optimizer",
        worst_gap <= 1e-9 and monotone and elapsed < 20,
        f"max(learned - best fixed) {worst_gap:.3e} (<= 1e-9), best-loss nonincreasing={monotone}, "
        f"{elapsed:.2f}s for 5 games (< 20s)",
    )


def test_10_performance(verdict, tmp_path, capsys):
    x = np.random.default_rng(10).uniform(-1, 1, size=1 << 20)
    start = time.perf_counter()
    lattice.mobius_transform(x)
    mobius_time = time.perf_counter() - start

    path = tmp_path / "r20.json"
    path.write_text(dump_value_table(synth_game(GameSpec("random", 20, seed=10))))
    start = time.perf_counter()
    code = main(["attribute", "--input", str(path), "--output", str(tmp_path / "report.json")])
    pipeline_time = time.perf_counter() - start
    verdict(
        "10 performance",
        mobius_time < 2 and pipeline_time < 10 and code == 0,
        f"Möbius n=20 {mobius_time:.3f}s (< 2s), attribute n=20 {pipeline_time:.2f}s (< 10s)",
    )


def test_11_fast_vs_naive(verdict):
    rng = np.random.default_rng(11)
    worst = 0.0
    for n in range(1, 9):
        for _ in range(100):
            f = rng.uniform(-1, 1, size=1 << n)
            worst = max(worst, np.abs(lattice.mobius_transform(f) - oracle.mobius_naive(f)).max())
            worst = max(worst, np.abs(lattice.zeta_transform(f) - oracle.zeta_naive(f)).max())
    verdict("11 fast vs naive transforms", worst <= 1e-12, f"max abs err {worst:.3e} (<= 1e-12)")
