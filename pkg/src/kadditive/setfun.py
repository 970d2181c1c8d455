"""Set functions and capacities on the subset lattice of ``X = {1..n}``.

Subsets are encoded as bitmasks: bit ``i-1`` is set iff element ``i`` is in
the subset.  A set function on ``n`` elements is a dense float array of length
``2**n`` indexed by that bitmask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

MAX_N = 24
DEFAULT_TOL = 1e-9
SPARSITY_EPS = 1e-12


class InvalidCapacity(ValueError):
    """Raised when values violate the boundary or monotonicity conditions."""


def check_n(n: int) -> int:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}, got {n}")
    return n


def subset_index(elements: Iterable[int]) -> int:
    """Bitmask of a collection of 1-based elements."""
    bits = 0
    for e in elements:
        if e < 1:
            raise ValueError(f"elements are 1-based, got {e}")
        bits |= 1 << (e - 1)
    return bits


def subset_elements(bits: int) -> tuple[int, ...]:
    """Ascending 1-based elements of a bitmask."""
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Cardinality of every subset, indexed by bitmask (read-only)."""
    pc = np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int8)
    pc.setflags(write=False)
    return pc


def _frozen(values, n: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.shape != (1 << n,):
        raise ValueError(f"expected {1 << n} values for n={n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("set function values must be finite")
    arr.setflags(write=False)
    return arr


def _infer_n(length: int) -> int:
    n = length.bit_length() - 1
    if length < 2 or (1 << n) != length:
        raise ValueError(f"length {length} is not a power of two >= 2")
    return n


@dataclass(frozen=True, eq=False)
class SetFunction:
    """Dense real-valued function on the subsets of ``{1..n}``."""

    values: np.ndarray
    n: int = None  # type: ignore[assignment]

    def __post_init__(self):
        n = self.n if self.n is not None else _infer_n(len(self.values))
        check_n(n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", _frozen(self.values, n))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, subset) -> float:
        if not isinstance(subset, (int, np.integer)):
            subset = subset_index(subset)
        return float(self.values[subset])

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def allclose(self, other: "SetFunction", atol: float = DEFAULT_TOL) -> bool:
        return self.n == other.n and bool(np.allclose(self.values, other.values, rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class Capacity(SetFunction):
    """A set function with ``mu(empty)=0``, ``mu(X)=1`` and monotone values.

    Construction validates within ``tol`` and raises :class:`InvalidCapacity`.
    """

    tol: float = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        super().__post_init__()
        report = validate_capacity(self, self.tol)
        if not report.ok:
            raise InvalidCapacity(report.summary())


@dataclass(frozen=True, eq=False)
class MobiusRepresentation:
    """Sparse Möbius coefficients: sorted subset bitmasks and their values."""

    n: int
    subsets: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        subsets = np.asarray(self.subsets, dtype=np.int64)
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if subsets.shape != coeffs.shape or subsets.ndim != 1:
            raise ValueError("subsets and coeffs must be 1-d arrays of equal length")
        if subsets.size and (subsets.min() < 0 or subsets.max() >= 1 << self.n):
            raise ValueError("subset index out of range")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("Möbius coefficients must be finite")
        order = np.argsort(subsets, kind="stable")
        subsets, coeffs = subsets[order], coeffs[order]
        if subsets.size > 1 and np.any(np.diff(subsets) == 0):
            raise ValueError("duplicate subset in Möbius representation")
        subsets.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "subsets", subsets)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping) -> "MobiusRepresentation":
        """Build from ``{subset: value}`` where subset is a bitmask or element list."""
        keys, vals = [], []
        for k, v in mapping.items():
            keys.append(k if isinstance(k, (int, np.integer)) else subset_index(k))
            vals.append(v)
        return cls(n, np.array(keys, dtype=np.int64), np.array(vals, dtype=np.float64))

    @classmethod
    def from_dense(cls, dense, n: int | None = None, eps: float = SPARSITY_EPS) -> "MobiusRepresentation":
        dense = np.asarray(dense, dtype=np.float64)
        n = n if n is not None else _infer_n(len(dense))
        keep = np.flatnonzero(np.abs(dense) > eps)
        return cls(n, keep, dense[keep])

    def dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n)
        out[self.subsets] = self.coeffs
        return out

    def __getitem__(self, subset) -> float:
        if not isinstance(subset, (int, np.integer)):
            subset = subset_index(subset)
        pos = np.searchsorted(self.subsets, subset)
        if pos < len(self.subsets) and self.subsets[pos] == subset:
            return float(self.coeffs[pos])
        return 0.0

    def __len__(self) -> int:
        return len(self.subsets)

    def items(self) -> Iterator[tuple[int, float]]:
        for s, c in zip(self.subsets.tolist(), self.coeffs.tolist()):
            yield s, c

    def total(self) -> float:
        return float(self.coeffs.sum())


@dataclass(frozen=True)
class Violation:
    kind: str
    subset: int
    element: int | None
    amount: float


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.ok:
            return "valid"
        head = ", ".join(
            f"{v.kind} at {list(subset_elements(v.subset))}"
            + (f" i={v.element}" if v.element is not None else "")
            + f" ({v.amount:.3g})"
            for v in self.violations[:5]
        )
        more = len(self.violations) - 5
        return head + (f" and {more} more" if more > 0 else "")


def _sweep(a: np.ndarray, n: int, sign: float) -> np.ndarray:
    for i in range(n):
        view = a.reshape(-1, 2, 1 << i)
        if sign > 0:
            view[:, 1, :] += view[:, 0, :]
        else:
            view[:, 1, :] -= view[:, 0, :]
    return a


def mobius_dense(values, n: int | None = None) -> np.ndarray:
    """Dense Möbius transform by the per-bit in-place sweep, O(n 2^n)."""
    a = np.array(values, dtype=np.float64)
    n = n if n is not None else _infer_n(len(a))
    check_n(n)
    return _sweep(a, n, -1.0)


def zeta_dense(values, n: int | None = None) -> np.ndarray:
    """Dense zeta transform (subset sums), inverse of :func:`mobius_dense`."""
    a = np.array(values, dtype=np.float64)
    n = n if n is not None else _infer_n(len(a))
    check_n(n)
    return _sweep(a, n, 1.0)


def mobius_transform(sf: SetFunction, eps: float = SPARSITY_EPS) -> MobiusRepresentation:
    return MobiusRepresentation.from_dense(mobius_dense(sf.values, sf.n), sf.n, eps)


def zeta_transform(m: MobiusRepresentation) -> SetFunction:
    return SetFunction(zeta_dense(m.dense(), m.n), m.n)


def _as_dense_mobius(obj) -> tuple[np.ndarray, int]:
    if isinstance(obj, MobiusRepresentation):
        return obj.dense(), obj.n
    return mobius_dense(obj.values, obj.n), obj.n


def _covering_excess(values: np.ndarray, n: int):
    """Yield ``(i, A, lower - upper)`` arrays over covering pairs ``(A, A+i)``."""
    for i in range(n):
        view = values.reshape(-1, 2, 1 << i)
        diff = view[:, 0, :] - view[:, 1, :]
        hi, lo = np.indices(diff.shape)
        base = hi * (1 << (i + 1)) + lo
        yield i, base.ravel(), diff.ravel()


def validate_capacity(sf: SetFunction, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Boundary conditions plus monotonicity on every covering pair ``A < A+i``."""
    v = sf.values
    found: list[Violation] = []
    if abs(v[0]) > tol:
        found.append(Violation("boundary-empty", 0, None, float(v[0])))
    if abs(v[-1] - 1.0) > tol:
        found.append(Violation("boundary-full", len(v) - 1, None, float(v[-1] - 1.0)))
    for i, base, excess in _covering_excess(v, sf.n):
        for a, amt in zip(base[excess > tol].tolist(), excess[excess > tol].tolist()):
            found.append(Violation("monotonicity", a, i + 1, amt))
    return ValidationReport(tuple(found))


def validate_mobius_capacity(m: MobiusRepresentation, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the Möbius-side capacity conditions.

    ``m(empty)=0``, total mass 1, and for every ``A`` and ``i in A`` the sum of
    ``m(B)`` over ``i in B subset A`` is nonnegative.  That sum equals
    ``zeta(m)(A) - zeta(m)(A - i)``, which is how it is evaluated here.
    """
    found: list[Violation] = []
    dense = m.dense()
    if abs(dense[0]) > tol:
        found.append(Violation("mobius-empty", 0, None, float(dense[0])))
    total = float(dense.sum())
    if abs(total - 1.0) > tol:
        found.append(Violation("mobius-total", len(dense) - 1, None, total - 1.0))
    mu = zeta_dense(dense, m.n)
    for i, base, excess in _covering_excess(mu, m.n):
        bad = excess > tol
        for a, amt in zip(base[bad].tolist(), excess[bad].tolist()):
            found.append(Violation("mobius-monotonicity", a | (1 << i), i + 1, -amt))
    return ValidationReport(tuple(found))


def level_spreads(values: np.ndarray, n: int) -> np.ndarray:
    """``max - min`` of ``values`` within each cardinality ``0..n``."""
    pc = popcounts(n)
    return np.array([np.ptp(values[pc == c]) for c in range(n + 1)])


def is_symmetric(cap: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.all(level_spreads(cap.values, cap.n) <= tol))


def is_belief(cap: SetFunction, tol: float = DEFAULT_TOL) -> bool:
    """True iff every Möbius coefficient is at least ``-tol``."""
    dense, _ = _as_dense_mobius(cap)
    return bool(np.all(dense >= -tol))


def additivity_order(cap, tol: float = DEFAULT_TOL) -> int:
    """Largest cardinality carrying a Möbius coefficient above ``tol`` in magnitude.

    Accepts a :class:`SetFunction` or a :class:`MobiusRepresentation`.
    """
    dense, n = _as_dense_mobius(cap)
    sizes = popcounts(n)[np.abs(dense) > tol]
    k = int(sizes.max()) if sizes.size else 0
    if k == 0:
        raise ValueError("no Möbius mass above the empty set; not a capacity")
    return k


def symmetric_level_values(cap: SetFunction) -> np.ndarray:
    """``mu`` at cardinalities ``0..n`` read off the sets ``{1..c}``."""
    return np.array([cap.values[(1 << c) - 1] for c in range(cap.n + 1)])
