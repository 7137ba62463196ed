"""Dense vectors over the subset lattice of ``n`` variables.

A subset S of ``{0, ..., n-1}`` is encoded as the integer mask with bit ``i``
set iff variable ``i`` is in S. A lattice vector is a float64 array of length
``2**n`` indexed by mask.

All transforms run in O(n 2^n) as ``n`` in-place passes, one per bit. For the
pass over bit ``i`` the array is viewed as ``(2**(n-i-1), 2, 2**i)`` so that
``view[:, 0, :]`` holds the masks without bit ``i`` and ``view[:, 1, :]`` the
same masks with bit ``i`` added.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, InputError, NonFinite

DEFAULT_N_CAP = 24
CAP_ENV_VAR = "HARSANYI_N_CAP"


def default_cap() -> int:
    """Largest accepted ``n``; ``HARSANYI_N_CAP`` overrides the default 24."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_N_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"{CAP_ENV_VAR} must be >= 1, got {cap}")
    return cap


def check_n(n: int, cap: int | None = None) -> int:
    if cap is None:
        cap = default_cap()
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InputError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the cap of {cap} variables")
    return n


def lattice_n(data: np.ndarray, cap: int | None = None) -> int:
    """Variable count of a lattice vector; rejects lengths that are not ``2**n``."""
    size = len(data)
    n = size.bit_length() - 1
    if size < 2 or size != 1 << n:
        raise InputError(f"lattice vector length {size} is not 2**n with n >= 1")
    return check_n(n, cap)


def as_lattice(data, cap: int | None = None) -> np.ndarray:
    """Copy ``data`` into a fresh float64 lattice vector after validation."""
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 1:
        raise InputError(f"lattice vector must be one-dimensional, got shape {arr.shape}")
    lattice_n(arr, cap)
    if not np.all(np.isfinite(arr)):
        raise NonFinite("lattice vector contains NaN or infinite entries")
    return arr


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    pc = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        half = 1 << i
        pc[half : 2 * half] = pc[:half] + 1
    pc.setflags(write=False)
    return pc


def popcounts(n: int) -> np.ndarray:
    """Read-only array of ``popcount(mask)`` for every mask of ``n`` bits."""
    return _popcounts(n)


def masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def mask_members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _bit_views(data: np.ndarray, n: int):
    for i in range(n):
        view = data.reshape(-1, 2, 1 << i)
        yield view[:, 0, :], view[:, 1, :]


def mobius_transform(f, cap: int | None = None) -> np.ndarray:
    """Subset Möbius transform: ``g(S) = sum_{L <= S} (-1)^{|S|-|L|} f(L)``."""
    g = as_lattice(f, cap)
    n = lattice_n(g, cap)
    for lo, hi in _bit_views(g, n):
        hi -= lo
    return g


def zeta_transform(g, cap: int | None = None) -> np.ndarray:
    """Subset-sum (zeta) transform: ``f(S) = sum_{L <= S} g(L)``."""
    f = as_lattice(g, cap)
    n = lattice_n(f, cap)
    for lo, hi in _bit_views(f, n):
        hi += lo
    return f


def superset_mobius_transform(f, cap: int | None = None) -> np.ndarray:
    """Transpose of the subset Möbius operator.

    ``g(L) = sum_{S >= L} (-1)^{|S|-|L|} f(S)``.
    """
    g = as_lattice(f, cap)
    n = lattice_n(g, cap)
    for lo, hi in _bit_views(g, n):
        lo -= hi
    return g


def superset_zeta_transform(f, cap: int | None = None) -> np.ndarray:
    """``g(L) = sum_{S >= L} f(S)``; transpose of :func:`zeta_transform`."""
    g = as_lattice(f, cap)
    n = lattice_n(g, cap)
    for lo, hi in _bit_views(g, n):
        lo += hi
    return g


def reflect(f, cap: int | None = None) -> np.ndarray:
    """``h(L) = f(N \\ L)``.

    Complementing within ``n`` bits maps mask ``m`` to ``2**n - 1 - m``, so the
    reflection is a reversal of the array.
    """
    h = as_lattice(f, cap)
    return h[::-1].copy()


def member_sums(weights: np.ndarray, n: int) -> np.ndarray:
    """``out[i] = sum_{S contains i} weights[S]`` for every variable, in one pass per bit."""
    weights = np.asarray(weights, dtype=np.float64)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = weights.reshape(-1, 2, 1 << i)[:, 1, :].sum()
    return out
