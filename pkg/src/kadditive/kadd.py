"""k-additivity predicates on OWA weights and on raw capacities.

Every check returns a :class:`ResidualReport` (largest deviation plus the
place it occurs) rather than a bare boolean, so callers can print a witness.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .setfun import DEFAULT_TOL, SetFunction


@dataclass(frozen=True)
class ResidualReport:
    max_residual: float
    witness: tuple | None = None
    constant_value: float | None = None

    def ok(self, tol: float = DEFAULT_TOL) -> bool:
        return self.max_residual <= tol


def _weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weight vector must be a non-empty 1-d array")
    return w


def binomial_weight_sums(w, k: int) -> np.ndarray:
    """``sum_j (-1)^j C(k-1, j) w_{i+j}`` for ``i = 1..n-k+1``."""
    w = _weights(w)
    n = len(w)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    pattern = np.array([(-1) ** j * comb(k - 1, j) for j in range(k)], dtype=np.float64)
    return np.correlate(w, pattern, mode="valid")


def weight_kadd_order(w, tol: float = DEFAULT_TOL) -> int:
    """Smallest k whose binomial weight sums do not depend on the position."""
    w = _weights(w)
    for k in range(1, len(w) + 1):
        if np.ptp(binomial_weight_sums(w, k)) <= tol:
            return k
    return len(w)  # unreachable: level n has a single sum


def equidistance_check(w, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Deviation of each gap ``w_i - w_{i+1}`` from ``w_1 - w_2``; witness is ``i``."""
    w = _weights(w)
    if len(w) < 2:
        return ResidualReport(0.0, None, 0.0)
    gaps = w[:-1] - w[1:]
    dev = np.abs(gaps - gaps[0])
    i = int(np.argmax(dev))
    worst = float(dev[i])
    return ResidualReport(worst, (i + 1,), float(gaps[0]) if worst <= tol else None)


def _supersets(n: int, core: int) -> np.ndarray:
    every = np.arange(1 << n, dtype=np.int64)
    return every[(every & core) == core]


def _finish(best: float, witness, lo: float, hi: float, tol: float) -> ResidualReport:
    return ResidualReport(best, witness, lo if hi - lo <= tol else None)


def second_difference_residuals(cap: SetFunction, tol: float = DEFAULT_TOL) -> ResidualReport:
    """Max over ``A`` and ``i, j in A`` of the gap between
    ``mu(A) - mu(A-i) - mu(A-j) + mu(A-ij)`` and ``mu(ij) - mu(i) - mu(j)``.

    Witness is ``(A, {i, j})`` as bitmasks.
    """
    v, n = cap.values, cap.n
    if n < 2:
        return ResidualReport(0.0, None, None)
    best, witness = 0.0, None
    lo, hi = np.inf, -np.inf
    for i, j in combinations(range(n), 2):
        bi, bj = 1 << i, 1 << j
        pair = bi | bj
        sup = _supersets(n, pair)
        lhs = v[sup] - v[sup & ~bi] - v[sup & ~bj] + v[sup & ~pair]
        rhs = v[pair] - v[bi] - v[bj]
        dev = np.abs(lhs - rhs)
        at = int(np.argmax(dev))
        if dev[at] > best:
            best, witness = float(dev[at]), (int(sup[at]), pair)
        lo, hi = min(lo, lhs.min()), max(hi, lhs.max())
    return _finish(best, witness, float(lo), float(hi), tol)


def _alternating(v: np.ndarray, n: int, block: int) -> tuple[np.ndarray, np.ndarray]:
    """``sum_{B subset block} (-1)^|B| mu(A - B)`` for every ``A`` containing ``block``."""
    sup = _supersets(n, block)
    total = np.zeros(len(sup))
    b = block
    while True:
        sign = -1.0 if bin(b).count("1") % 2 else 1.0
        total += sign * v[sup & ~b]
        if b == 0:
            break
        b = (b - 1) & block
    return sup, total


def _scan_block(args):
    v, n, block = args
    sup, alt = _alternating(v, n, block)
    dev = np.abs(alt - alt[0])  # sup[0] == block
    at = int(np.argmax(dev))
    return float(dev[at]), (int(sup[at]), block), float(alt.min()), float(alt.max())


def k_difference_residuals(
    cap: SetFunction, k: int, tol: float = DEFAULT_TOL, threads: int = 1
) -> ResidualReport:
    """Max deviation of the alternating k-difference over ``A`` from its value at ``A = I``.

    Ranges over all k-subsets ``I`` and all ``A`` containing ``I``; the witness
    is ``(A, I)`` as bitmasks.  ``threads > 1`` splits the scan by ``I``.
    """
    v, n = cap.values, cap.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    blocks = [sum(1 << i for i in c) for c in combinations(range(n), k)]
    jobs = [(v, n, b) for b in blocks]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan_block, jobs))
    else:
        results = [_scan_block(j) for j in jobs]
    best, witness = 0.0, None
    lo, hi = np.inf, -np.inf
    for dev, wit, a, b in results:
        if dev > best:
            best, witness = dev, wit
        lo, hi = min(lo, a), max(hi, b)
    return _finish(best, witness, lo, hi, tol)
