"""Seeded generators for capacities, weight vectors and acts.

Everything is a pure function of its seed through :class:`~kadditive.rng.Rng`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

import numpy as np

from .integral import owa_to_capacity
from .rng import Rng
from .setfun import (
    Capacity,
    MobiusRepresentation,
    check_n,
    popcounts,
    subset_index,
    validate_mobius_capacity,
    zeta_dense,
)

KINDS = ("general", "symmetric", "k-additive", "belief", "weightvector")
SHAPES = ("general", "nondecreasing", "strict-interior", "comonotone-pair", "equal-block")
REJECTION_BUDGET = 10_000
ACT_SCALE = 10.0


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    n: int
    seed: int = 0
    kind: str = "general"
    k: int | None = None
    floor: float = 0.05

    def __post_init__(self):
        check_n(self.n)
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ValueError(f"k must be in 1..{self.n}, got {self.k}")
        if self.kind == "k-additive" and self.k is None:
            raise ValueError("kind 'k-additive' needs k")
        if not 0.0 < self.floor <= 1.0:
            raise ValueError("floor must lie in (0, 1]")


def _rng(seed) -> Rng:
    return seed if isinstance(seed, Rng) else Rng(seed)


def random_capacity(cfg: GenConfig) -> Capacity:
    rng = Rng(cfg.seed)
    n = cfg.n
    if cfg.kind == "general":
        return _general(rng, n)
    if cfg.kind == "belief":
        return Capacity(zeta_dense(_sparse_mobius(rng, n, cfg.k or n, cfg.floor), n), n)
    if cfg.kind == "k-additive":
        for attempt in range(REJECTION_BUDGET):
            dense = _sparse_mobius(rng, n, cfg.k, cfg.floor, signed=True, attempt=attempt)
            if dense is not None and validate_mobius_capacity(
                MobiusRepresentation.from_dense(dense, n, eps=0.0), tol=0.0
            ).ok:
                return Capacity(zeta_dense(dense, n), n)
        raise GenerationError(f"no valid signed {cfg.k}-additive capacity in {REJECTION_BUDGET} draws")
    if cfg.kind == "symmetric":
        return owa_to_capacity(random_weights(n, rng, cfg.k, cfg.floor))
    raise ValueError("kind 'weightvector' yields weights; use random_weights")


def _general(rng: Rng, n: int) -> Capacity:
    v = rng.uniforms(1 << n)
    v[0] = 0.0
    # monotone envelope: mu(A) <- max over subsets of A
    for i in range(n):
        view = v.reshape(-1, 2, 1 << i)
        np.maximum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    v /= v[-1]
    v[-1] = 1.0
    return Capacity(v, n)


def _sparse_mobius(rng: Rng, n: int, k: int, floor: float, signed: bool = False, attempt: int = 0):
    """Dense Möbius vector supported on sets of size ``<= k`` with total mass 1.

    One random k-set gets a coefficient of at least ``floor``.  With
    ``signed``, coefficients on sets of size >= 2 may turn negative; their
    magnitude starts at a quarter and halves every 5 attempts.  Returns ``None`` if the signed draw
    has no positive mass to normalise.
    """
    size = 1 << n
    pc = popcounts(n)
    forced = subset_index(e + 1 for e in rng.sample(n, k))
    candidates = np.flatnonzero((pc >= 1) & (pc <= k))
    candidates = candidates[candidates != forced]
    include = rng.uniforms(len(candidates)) < 0.5
    raw = rng.uniforms(len(candidates))
    if signed:
        flip = (rng.uniforms(len(candidates)) < 0.3) & (pc[candidates] >= 2)
        raw = np.where(flip, -raw * 0.25 * 0.5 ** (attempt // 5), raw)
    raw = np.where(include, raw, 0.0)
    dense = np.zeros(size)
    total = raw.sum()
    if not include.any():
        dense[forced] = 1.0
        return dense
    if total <= 0.0:
        return None
    forced_mass = floor + (1.0 - floor) * 0.5 * rng.uniform()
    dense[candidates] = raw * ((1.0 - forced_mass) / total)
    dense[forced] = forced_mass
    return dense


def random_weights(n: int, seed=0, k: int | None = None, floor: float = 0.05) -> np.ndarray:
    """Random OWA weight vector.

    Without ``k`` it is uniform on the simplex.  With ``k`` the weights come
    from a symmetric capacity of additivity order exactly ``k``: per-level
    Möbius masses ``p_1..p_k`` summing to 1 with ``p_k >= floor``, some lower
    levels possibly negative, redrawn until every weight is nonnegative.
    """
    rng = _rng(seed)
    check_n(n)
    if k is None:
        e = -np.log1p(-rng.uniforms(n))
        return e / e.sum()
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    for attempt in range(REJECTION_BUDGET):
        lower = rng.uniforms(k - 1)
        flip = (rng.uniforms(k - 1) < 0.3) & (np.arange(1, k) >= 2)
        lower = np.where(flip, -lower * 0.5 ** (attempt // 10), lower)
        top = floor + (1.0 - floor) * 0.5 * rng.uniform()
        if k == 1:
            masses = np.ones(1)
        elif lower.sum() <= 0.0:
            continue
        else:
            masses = np.append(lower * ((1.0 - top) / lower.sum()), top)
        per_set = [masses[l - 1] / comb(n, l) for l in range(1, k + 1)]
        w = np.array([sum(per_set[l - 1] * comb(n - i, l - 1) for l in range(1, k + 1)) for i in range(1, n + 1)])
        if np.all(w >= 0.0):
            return w
    raise GenerationError(f"no valid symmetric {k}-additive weights in {REJECTION_BUDGET} draws")


def random_acts(n: int, seed=0, shape: str = "general", block: Iterable[int] | None = None):
    """Random act (or comonotone pair) with entries in ``[0, 10)``.

    ``block`` gives the 1-based coordinates tied together for ``equal-block``.
    """
    rng = _rng(seed)
    if shape == "general":
        return rng.uniforms(n) * ACT_SCALE
    if shape == "nondecreasing":
        return np.sort(rng.uniforms(n) * ACT_SCALE)
    if shape == "strict-interior":
        while True:
            f = np.sort(rng.uniforms(n) * ACT_SCALE)
            if np.all(np.diff(f) > 0):
                return f
    if shape == "comonotone-pair":
        perm = rng.permutation(n)
        f, g = np.empty(n), np.empty(n)
        f[perm] = np.sort(rng.uniforms(n) * ACT_SCALE)
        g[perm] = np.sort(rng.uniforms(n) * ACT_SCALE)
        return f, g
    if shape == "equal-block":
        if not block:
            raise ValueError("equal-block needs a non-empty block")
        f = rng.uniforms(n) * ACT_SCALE
        f[[e - 1 for e in block]] = rng.uniform() * ACT_SCALE
        return f
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")
