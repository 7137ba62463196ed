"""Slow reference implementations straight from the definitions.

Nothing here touches the fast lattice transforms; every sum is an explicit
loop over masks so these functions can serve as ground truth in tests and in
the ``verify`` command.
"""

from __future__ import annotations

import itertools
from math import comb

from .errors import CapExceeded, EmptyCoalition, InputError

ORACLE_N_CAP = 12


def _n_of(values) -> int:
    size = len(values)
    n = size.bit_length() - 1
    if size < 2 or size != 1 << n:
        raise InputError(f"table length {size} is not 2**n with n >= 1")
    if n > ORACLE_N_CAP:
        raise CapExceeded(f"reference oracle supports n <= {ORACLE_N_CAP}, got n={n}")
    return n


def _values(table):
    return table.values if hasattr(table, "values") else table


def _subsets(mask: int):
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _check_var(i: int, n: int):
    if not 0 <= i < n:
        raise InputError(f"variable {i} outside [0, {n})")


def shapley_weight(n: int, size: int) -> float:
    """``|S|! (n-|S|-1)! / n!`` computed as ``1 / (n * C(n-1, |S|))``."""
    return 1.0 / (n * comb(n - 1, size))


def shapley_direct(table, i: int) -> float:
    """Weighted marginal-contribution form of the Shapley value of ``i``."""
    v = _values(table)
    n = _n_of(v)
    _check_var(i, n)
    bit = 1 << i
    total = 0.0
    for s in range(1 << n):
        if s & bit:
            continue
        total += shapley_weight(n, bin(s).count("1")) * (float(v[s | bit]) - float(v[s]))
    return total


def shapley_permutations(table, i: int) -> float:
    """Average of ``i``'s marginal contribution over all ``n!`` orderings (n <= 8)."""
    v = _values(table)
    n = _n_of(v)
    _check_var(i, n)
    if n > 8:
        raise CapExceeded("permutation enumeration is limited to n <= 8")
    bit = 1 << i
    total = 0.0
    count = 0
    for order in itertools.permutations(range(n)):
        before = 0
        for j in order:
            if j == i:
                break
            before |= 1 << j
        total += float(v[before | bit]) - float(v[before])
        count += 1
    return total / count


def banzhaf_direct(table, i: int) -> float:
    v = _values(table)
    n = _n_of(v)
    _check_var(i, n)
    bit = 1 << i
    total = 0.0
    for s in range(1 << n):
        if not s & bit:
            total += float(v[s | bit]) - float(v[s])
    return total / 2 ** (n - 1)


def harsanyi_and_direct(table_and, mask: int) -> float:
    """``Σ_{L⊆S} (-1)^{|S|-|L|} v_and(L)`` by enumeration."""
    v = _values(table_and)
    _n_of(v)
    size = bin(mask).count("1")
    total = 0.0
    for sub in _subsets(mask):
        sign = -1.0 if (size - bin(sub).count("1")) % 2 else 1.0
        total += sign * float(v[sub])
    return total


def harsanyi_or_direct(table_or, mask: int) -> float:
    """``-Σ_{L⊆S} (-1)^{|S|-|L|} v_or(N∖L)`` by enumeration; ``S`` must be nonempty."""
    v = _values(table_or)
    n = _n_of(v)
    if mask == 0:
        raise EmptyCoalition("OR interaction is defined only for nonempty S")
    full = (1 << n) - 1
    size = bin(mask).count("1")
    total = 0.0
    for sub in _subsets(mask):
        sign = -1.0 if (size - bin(sub).count("1")) % 2 else 1.0
        total += sign * float(v[full & ~sub])
    return -total


def mobius_naive(f) -> list[float]:
    """O(3^n) double loop over (S, L ⊆ S)."""
    n = _n_of(f)
    return [harsanyi_and_direct(f, s) for s in range(1 << n)]


def zeta_naive(g) -> list[float]:
    n = _n_of(g)
    return [sum(float(g[sub]) for sub in _subsets(s)) for s in range(1 << n)]
