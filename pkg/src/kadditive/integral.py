"""Choquet integral, OWA operators and the Gini welfare functional."""

from __future__ import annotations

from math import comb

import numpy as np

from .setfun import (
    DEFAULT_TOL,
    Capacity,
    MobiusRepresentation,
    SetFunction,
    additivity_order,
    is_symmetric,
    popcounts,
    symmetric_level_values,
)


class NotSymmetric(ValueError):
    pass


class DecompositionError(ValueError):
    pass


def as_act(f, n: int | None = None) -> np.ndarray:
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("an act is a 1-d vector")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"act has length {arr.shape[0]}, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("act entries must be finite")
    return arr


def choquet_sorted(cap: SetFunction, f) -> float:
    """Choquet integral as the telescoping sum over the ascending order of ``f``.

    Acts with negative entries are shifted by ``c = -min f`` first and the
    result shifted back, ``C(f) = C(f + c) - c``.
    """
    f = as_act(f, cap.n)
    shift = -float(f.min()) if f.min() < 0 else 0.0
    g = f + shift
    order = np.argsort(g, kind="stable")
    # masks[i] = B_i = {(i), ..., (n)}; distinct bits so a suffix sum is the union
    masks = np.cumsum((np.int64(1) << order.astype(np.int64))[::-1])[::-1]
    steps = np.diff(g[order], prepend=0.0)
    return float(steps @ cap.values[masks]) - shift


def subset_minima(subsets: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``min_{i in A} f_i`` for each bitmask ``A`` (``+inf`` for the empty set)."""
    n = len(f)
    member = (subsets[:, None] >> np.arange(n, dtype=np.int64)) & 1
    return np.where(member.astype(bool), f, np.inf).min(axis=1)


def choquet_mobius(m: MobiusRepresentation, f) -> float:
    """Choquet integral as ``sum_A m(A) * min_{i in A} f_i``."""
    f = as_act(f, m.n)
    keep = m.subsets != 0
    return float(m.coeffs[keep] @ subset_minima(m.subsets[keep], f))


def owa(w, f) -> float:
    """Ordered weighted average; ``w[0]`` multiplies the smallest entry of ``f``."""
    w = np.asarray(w, dtype=np.float64)
    f = as_act(f, len(w))
    return float(np.sort(f) @ w)


def owa_to_capacity(w) -> Capacity:
    """Symmetric capacity whose Choquet integral is ``OWA_w``.

    ``mu(T)`` is the sum of the ``|T|`` largest-index weights.
    """
    w = np.asarray(w, dtype=np.float64)
    n = len(w)
    levels = np.concatenate(([0.0], np.cumsum(w[::-1])))
    return Capacity(levels[popcounts(n)], n)


def capacity_to_owa(cap: SetFunction, tol: float = DEFAULT_TOL) -> np.ndarray:
    if not is_symmetric(cap, tol):
        raise NotSymmetric("capacity is not symmetric")
    levels = symmetric_level_values(cap)
    return np.diff(levels)[::-1].copy()


def _check_delta(n: int, delta: float) -> None:
    upper = 1.0 / (n - 1) if n > 1 else np.inf
    if not 0.0 < delta < upper:
        raise ValueError(f"delta must lie in (0, {upper}) for n={n}, got {delta}")


def gini_functional(f, delta: float) -> float:
    """``sum_i f_i - delta * sum_{i<j} |f_i - f_j|`` (unnormalized)."""
    f = as_act(f)
    _check_delta(len(f), delta)
    spread = np.abs(f[:, None] - f[None, :]).sum() / 2.0
    return float(f.sum() - delta * spread)


def gini_coefficients(n: int, delta: float) -> np.ndarray:
    """Coefficient of each order statistic in the Gini functional.

    Expands every ``|f_(i) - f_(j)|`` (``i < j``) as ``f_(j) - f_(i)``.  The
    result is ``1 + (n + 1 - 2i) * delta`` for the i-th smallest value and the
    coefficients sum to ``n``.
    """
    _check_delta(n, delta)
    c = np.ones(n)
    for i in range(n):
        for j in range(i + 1, n):
            c[i] += delta
            c[j] -= delta
    return c


def gini_owa_weights(n: int, delta: float) -> np.ndarray:
    c = gini_coefficients(n, delta)
    return c / c.sum()


def binomial_owa_weights(n: int, k: int) -> np.ndarray:
    """k-binomial OWA weights ``C(n-i, k-1) / C(n, k)``, ``i = 1..n``."""
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    denom = comb(n, k)
    return np.array([comb(n - i, k - 1) / denom for i in range(1, n + 1)])


def binomial_decomposition(cap: SetFunction, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Coefficients ``a_1..a_k`` with ``w = sum_j a_j * binomial_owa_weights(n, j)``.

    ``k`` is the additivity order of ``cap``.  The rows ``i = n-k+1..n`` of the
    basis form a lower-triangular system (weight ``j`` vanishes for
    ``i > n-j+1``), solved by forward substitution from ``i = n`` upward.
    """
    w = capacity_to_owa(cap, tol)
    n = cap.n
    k = additivity_order(cap, tol)
    basis = np.column_stack([binomial_owa_weights(n, j) for j in range(1, k + 1)])
    a = np.zeros(k)
    for r in range(k):
        row = n - 1 - r
        a[r] = (w[row] - basis[row, :r] @ a[:r]) / basis[row, r]
    residual = float(np.max(np.abs(basis @ a - w)))
    if residual > tol:
        raise DecompositionError(f"residual {residual:.3g} exceeds tolerance {tol:.3g}")
    return a
