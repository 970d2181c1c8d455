"""Randomised falsification of the social-welfare axioms against a functional.

A check draws ``trials`` structured act families from per-trial substreams of
one seed, evaluates the functional on them and tests the axiom's conclusion
numerically.  A failure is a proof that the functional violates the axiom; a
pass is only statistical evidence.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Mapping

import numpy as np

from .gen import ACT_SCALE
from .integral import as_act, choquet_sorted, gini_functional, owa
from .rng import Rng
from .setfun import DEFAULT_TOL, SetFunction, subset_elements, subset_index

AXIOMS = ("A1", "A2", "A3", "A4", "A4'", "A5", "A5'", "A6", "A7", "A7k", "A7'k", "A8", "A8'", "A9", "A9k")
PARAMETRIC = ("A7k", "A7'k", "A9k")
STRICT_MARGIN = 1e-12


class ComonotonicityBroken(ValueError):
    pass


class UnequalBaseValues(ValueError):
    pass


class IncompleteFamily(ValueError):
    pass


@dataclass(frozen=True)
class Functional:
    """An aggregation functional ``Act -> float`` on ``n`` elements."""

    evaluate: Callable[[np.ndarray], float]
    n: int
    name: str = "H"

    def __call__(self, f) -> float:
        return float(self.evaluate(as_act(f, self.n)))

    @classmethod
    def choquet(cls, cap: SetFunction, name: str = "choquet") -> "Functional":
        return cls(lambda f: choquet_sorted(cap, f), cap.n, name)

    @classmethod
    def owa(cls, w, name: str = "owa") -> "Functional":
        w = np.asarray(w, dtype=np.float64)
        return cls(lambda f: owa(w, f), len(w), name)

    @classmethod
    def gini(cls, n: int, delta: float, name: str = "gini") -> "Functional":
        return cls(lambda f: gini_functional(f, delta), n, name)


@dataclass
class AxiomReport:
    axiom: str
    verdict: str  # "pass", "fail" or "inapplicable"
    trials: int
    seed: int
    counterexample: dict | None = None
    max_deviation: float = 0.0
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        out = {
            "axiom": self.axiom,
            "verdict": self.verdict,
            "trials": self.trials,
            "seed": self.seed,
            "max_deviation": self.max_deviation,
        }
        if self.note:
            out["note"] = self.note
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


# -- act predicates and constructors -------------------------------------------


def comonotone(f, g) -> bool:
    f, g = as_act(f), as_act(g)
    if f.shape != g.shape:
        raise ValueError("acts must have equal length")
    df = f[:, None] - f[None, :]
    dg = g[:, None] - g[None, :]
    return bool(np.all(df * dg >= 0))


def f_precedes(f, i: int, j: int) -> bool:
    """True iff ``f_i < f_j`` with no value of ``f`` strictly between (1-based)."""
    f = as_act(f)
    a, b = f[i - 1], f[j - 1]
    return bool(a < b and not np.any((f > a) & (f < b)))


def transfer_pattern(k: int) -> np.ndarray:
    return np.array([(-1) ** r * comb(k - 1, r) for r in range(k)], dtype=np.float64)


def build_transfer_acts(f, i: int, k: int, t: float) -> np.ndarray:
    """Add ``(-1)^r C(k-1, r) t`` to coordinate ``i + r`` of a nondecreasing act."""
    f = as_act(f)
    n = len(f)
    if np.any(np.diff(f) < 0):
        raise ValueError("base act must be nondecreasing")
    if not 1 <= k <= n or not 1 <= i <= n - k + 1:
        raise ValueError(f"need 1 <= k <= n and 1 <= i <= n-k+1, got i={i}, k={k}, n={n}")
    out = f.copy()
    out[i - 1 : i - 1 + k] += transfer_pattern(k) * t
    if not comonotone(f, out):
        raise ComonotonicityBroken(f"t={t} reorders the act")
    return out


def build_gift_family(f, block: Iterable[int], t: float) -> dict[int, np.ndarray]:
    """``{B: f + t * 1_B}`` for every subset ``B`` of ``block`` (keys are bitmasks).

    Acts agree with ``f`` outside ``B``.
    """
    f = as_act(f)
    block = sorted(set(block))
    if not block:
        raise ValueError("block must be non-empty")
    base = f[[e - 1 for e in block]]
    if np.any(base != base[0]):
        raise UnequalBaseValues(f"coordinates {block} do not share one value")
    full = subset_index(block)
    family = {}
    b = full
    while True:
        act = f.copy()
        act[[e - 1 for e in subset_elements(b)]] += t
        if not comonotone(f, act):
            raise ComonotonicityBroken(f"t={t} reorders the act")
        family[b] = act
        if b == 0:
            break
        b = (b - 1) & full
    return dict(sorted(family.items()))


def a9_alternating_sum(H: Callable, family: Mapping[int, np.ndarray]) -> float:
    """``sum_B (-1)^|B| H(f^B)`` over a complete gift family."""
    full = 0
    for b in family:
        full |= b
    if len(family) != 1 << bin(full).count("1") or any(b & ~full for b in family):
        raise IncompleteFamily("family must contain every subset of the block")
    return float(sum((-1) ** bin(b).count("1") * H(act) for b, act in family.items()))


# -- trial builders -----------------------------------------------------------
# Each builder returns named acts; the matching judge maps H's values on them
# to (ok, deviation).


def _sign(x: float, tol: float) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def _strict_sorted(rng: Rng, size: int) -> np.ndarray:
    while True:
        s = np.sort(rng.uniforms(size) * ACT_SCALE)
        if size < 2 or np.all(np.diff(s) > 0):
            return s


def _min_gap(values: np.ndarray) -> float:
    s = np.sort(values)
    return float(np.diff(s).min()) if len(s) > 1 else 1.0


def _fraction(rng: Rng) -> float:
    return rng.uniform(0.1, 0.9)


def _place(rng: Rng, n: int, chain: list[int], rank: int) -> np.ndarray:
    """Strictly ranked act with ``chain`` occupying ranks ``rank..`` in order."""
    others = [p for p in rng.permutation(n).tolist() if p not in chain]
    order = others[:rank] + chain + others[rank:]
    f = np.empty(n)
    f[order] = _strict_sorted(rng, n)
    return f


def _build_a3(rng, n, k):
    if n >= 2 and rng.below(2) == 0:
        size = rng.integer(1, n - 1)
        f = np.zeros(n)
        f[rng.sample(n, size)] = 1.0
    else:
        f = rng.uniforms(n) * ACT_SCALE
    perm = rng.permutation(n)
    if n >= 2 and np.all(perm == np.arange(n)):
        perm[[0, 1]] = perm[[1, 0]]
    return {"f": f, "pi_f": f[perm]}


def _judge_a3(v, tol):
    dev = abs(v["f"] - v["pi_f"])
    return dev <= tol, dev


def _build_a4(rng, n, k):
    f, g, h = (np.sort(rng.uniforms(n) * ACT_SCALE) for _ in range(3))
    return {"f": f, "g": g, "f+h": f + h, "g+h": g + h}


def _judge_ordinal(v, tol):
    before, after = v["f"] - v["g"], v["f+h"] - v["g+h"]
    return _sign(before, tol) == _sign(after, tol), abs(before - after)


def _build_a4p(rng, n, k):
    f, g = _strict_sorted(rng, n), _strict_sorted(rng, n)
    i = rng.below(n)
    room = []
    for a in (f, g):
        if i > 0:
            room.append(a[i] - a[i - 1])
        if i < n - 1:
            room.append(a[i + 1] - a[i])
    t = _fraction(rng) * (min(room) if room else 1.0) * (1 if rng.below(2) else -1)
    fp, gp = f.copy(), g.copy()
    fp[i] += t
    gp[i] += t
    return {"f": f, "g": g, "f+h": fp, "g+h": gp}


def _build_a5(rng, n, k, strict=False):
    g = rng.uniforms(n) * ACT_SCALE
    d = rng.uniforms(n) * ACT_SCALE * 0.5
    d[rng.uniforms(n) < 0.5] = 0.0
    if strict:
        j = rng.below(n)
        d[j] = max(d[j], 0.1 + rng.uniform())
    return {"f": g + d, "g": g, "_t": np.array([d.max()])}


def _judge_a5(v, tol):
    gain = v["f"] - v["g"]
    return gain >= -tol, max(0.0, -gain)


def _judge_a5p(v, tol, t):
    gain = v["f"] - v["g"]
    return gain > STRICT_MARGIN * t, max(0.0, -gain)


def _build_a6(rng, n, k, first=False):
    if first:
        return {"f": np.ones(n), "g": np.zeros(n)}
    return {"f": rng.uniforms(n) * ACT_SCALE, "g": rng.uniforms(n) * ACT_SCALE}


def _judge_a6(v, tol):
    dev = abs(v["f"] - v["g"])
    return dev > tol, dev


def _build_chain_transfer(rng, n, k):
    """A7(k) instance: individuals ``i..i+k-1`` adjacent in rank in both f and g."""
    start = rng.below(n - k + 1)
    chain = list(range(start, start + k))
    f = _place(rng, n, chain, rng.below(n - k + 1))
    g = _place(rng, n, chain, rng.below(n - k + 1))
    pattern = transfer_pattern(k)
    t = _fraction(rng) * min(_min_gap(f), _min_gap(g)) / (2 * np.abs(pattern).max())
    fp, gp = f.copy(), g.copy()
    fp[chain] += pattern * t
    gp[chain] += pattern * t
    if not (comonotone(f, fp) and comonotone(g, gp)):
        raise ComonotonicityBroken("transfer step too large")
    return {"f": f, "f'": fp, "g": g, "g'": gp}


def _build_a7(rng, n, k):
    i, j = rng.sample(n, 2)
    f = _place(rng, n, [i, j], rng.below(n - 1))
    g = _place(rng, n, [i, j], rng.below(n - 1))
    t = _fraction(rng) * min(f[j] - f[i], g[j] - g[i]) / 2
    fp, gp = f.copy(), g.copy()
    fp[i] += t
    fp[j] -= t
    gp[i] += t
    gp[j] -= t
    return {"f": f, "f'": fp, "g": g, "g'": gp}


def _judge_increments(v, tol):
    dev = abs((v["f'"] - v["f"]) - (v["g'"] - v["g"]))
    return dev <= tol, dev


def _build_a7pk(rng, n, k):
    f = _strict_sorted(rng, n)
    positions = n - k + 1
    if positions >= 2:
        i, j = rng.sample(positions, 2)
    else:
        i = j = 0
    t = _fraction(rng) * _min_gap(f) / (2 * np.abs(transfer_pattern(k)).max())
    return {"f^i": build_transfer_acts(f, i + 1, k, t), "f^j": build_transfer_acts(f, j + 1, k, t)}


def _judge_indifferent(v, tol):
    dev = abs(v["f^i"] - v["f^j"])
    return dev <= tol, dev


def _build_a8(rng, n, k):
    f = _strict_sorted(rng, n)
    i = rng.below(n - 1)
    t = _fraction(rng) * (f[i + 1] - f[i]) / 2
    fp = f.copy()
    fp[i] += t
    fp[i + 1] -= t
    return {"f": f, "f'": fp, "_t": np.array([t])}


def _judge_a8(v, tol, t):
    gain = v["f'"] - v["f"]
    return gain > STRICT_MARGIN * t, max(0.0, -gain)


def _judge_a8p(v, tol):
    gain = v["f'"] - v["f"]
    return gain >= -tol, max(0.0, -gain)


def _block_act(rng, n, block):
    """Distinct values off the block; the block shares one value at a random rank."""
    s = _strict_sorted(rng, n - len(block) + 1)
    b = rng.below(len(s))
    rest = np.delete(s, b)
    others = [p for p in rng.permutation(n).tolist() if p not in block]
    f = np.empty(n)
    f[block] = s[b]
    f[others] = rest
    gap = s[b + 1] - s[b] if b + 1 < len(s) else np.inf
    return f, gap


def _build_a9k(rng, n, k):
    block = sorted(rng.sample(n, k))
    f, gap_f = _block_act(rng, n, block)
    g, gap_g = _block_act(rng, n, block)
    t = _fraction(rng) * min(gap_f, gap_g, 1.0)
    elems = [e + 1 for e in block]
    acts = {}
    for name, base in (("f", f), ("g", g)):
        for b, act in build_gift_family(base, elems, t).items():
            acts[f"{name}:{b}"] = act
    return acts


def _judge_a9k(v, tol):
    sums = {"f": 0.0, "g": 0.0}
    for key, val in v.items():
        name, b = key.split(":")
        sums[name] += (-1) ** bin(int(b)).count("1") * val
    dev = abs(sums["f"] - sums["g"])
    return dev <= tol, dev


@dataclass(frozen=True)
class _Spec:
    build: Callable
    judge: Callable
    min_n: int = 1
    needs_t: bool = False


_SPECS = {
    "A3": _Spec(_build_a3, _judge_a3),
    "A4": _Spec(_build_a4, _judge_ordinal),
    "A4'": _Spec(_build_a4p, _judge_ordinal),
    "A5": _Spec(_build_a5, _judge_a5),
    "A5'": _Spec(lambda r, n, k: _build_a5(r, n, k, strict=True), _judge_a5p, needs_t=True),
    "A6": _Spec(_build_a6, _judge_a6),
    "A7": _Spec(_build_a7, _judge_increments, min_n=2),
    "A7k": _Spec(_build_chain_transfer, _judge_increments),
    "A7'k": _Spec(_build_a7pk, _judge_indifferent),
    "A8": _Spec(_build_a8, _judge_a8, min_n=2, needs_t=True),
    "A8'": _Spec(_build_a8, _judge_a8p, min_n=2),
    "A9": _Spec(lambda r, n, k: _build_a9k(r, n, 2), _judge_a9k, min_n=2),
    "A9k": _Spec(_build_a9k, _judge_a9k),
}


def parse_axiom(text: str, k: int | None = None) -> tuple[str, int | None]:
    """Normalise ids such as ``A9k(3)``, ``A7'(2)`` or ``A7k`` with a separate ``k``."""
    m = re.fullmatch(r"\s*(A\d)('?)(k?)\s*(?:\(\s*(\d+)\s*\))?\s*", text)
    if not m:
        raise ValueError(f"unsupported axiom id {text!r}")
    base, prime, kflag, karg = m.groups()
    if karg is not None:
        kflag, k = "k", int(karg)
    name = base + prime + kflag
    if name not in AXIOMS:
        raise ValueError(f"unsupported axiom id {text!r}")
    if name in PARAMETRIC:
        if k is None:
            raise ValueError(f"axiom {name} needs k")
        return name, k
    return name, None


def axiom_label(name: str, k: int | None) -> str:
    return f"{name}({k})" if k is not None else name


def _values(H: Functional, acts: Mapping[str, np.ndarray]) -> dict[str, float]:
    return {key: H(a) for key, a in acts.items() if not key.startswith("_")}


def _judge(name: str, values: dict, acts: Mapping, tol: float):
    spec = _SPECS[name]
    if spec.needs_t:
        return spec.judge(values, tol, float(acts["_t"][0]))
    return spec.judge(values, tol)


def _run_trial(name, H, k, seed, index, tol):
    rng = Rng(seed).substream(index)
    if name == "A6":
        acts = _build_a6(rng, H.n, k, first=index == 0)
    else:
        acts = _SPECS[name].build(rng, H.n, k)
    values = _values(H, acts)
    ok, dev = _judge(name, values, acts, tol)
    return bool(ok), float(dev), acts, values


def _counterexample(index, acts, values, dev) -> dict:
    return {
        "trial": index,
        "acts": {key: [float(x) for x in a] for key, a in acts.items()},
        "values": values,
        "deviation": dev,
    }


def check_axiom(
    axiom: str,
    H: Functional,
    trials: int = 200,
    seed: int = 0,
    k: int | None = None,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> AxiomReport:
    """Fuzz ``H`` against one axiom; trial ``i`` uses substream ``i`` of ``seed``."""
    name, k = parse_axiom(axiom, k)
    label = axiom_label(name, k)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    n = H.n
    if name in ("A1", "A2"):
        return AxiomReport(label, "pass", 0, seed, note="vacuous: any real-valued functional satisfies it")
    if k is not None and not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    spec = _SPECS[name]
    if n < spec.min_n:
        return AxiomReport(label, "inapplicable", 0, seed, note=f"needs n >= {spec.min_n}")

    def run(i):
        return _run_trial(name, H, k, seed, i, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(trials)))
    else:
        outcomes = []
        for i in range(trials):
            outcomes.append(run(i))
            if name == "A6" and outcomes[-1][0]:
                break
            if name != "A6" and not outcomes[-1][0]:
                break

    if name == "A6":
        for i, (ok, dev, _, _) in enumerate(outcomes):
            if ok:
                return AxiomReport(label, "pass", i + 1, seed, max_deviation=dev)
        _, dev, acts, values = outcomes[0]
        return AxiomReport(label, "fail", trials, seed, _counterexample(0, acts, values, dev), dev)

    worst = 0.0
    for i, (ok, dev, acts, values) in enumerate(outcomes):
        worst = max(worst, dev)
        if not ok:
            return AxiomReport(label, "fail", i + 1, seed, _counterexample(i, acts, values, dev), worst)
    note = None
    if name == "A7'k" and n - k + 1 < 2:
        note = "single admissible position; holds trivially"
    return AxiomReport(label, "pass", trials, seed, None, worst, note)


def replay(report: AxiomReport, H: Functional, tol: float = DEFAULT_TOL) -> bool:
    """Re-evaluate a stored counterexample; True iff it still violates the axiom."""
    if report.counterexample is None:
        return False
    name, _ = parse_axiom(report.axiom)
    acts = {key: np.asarray(a) for key, a in report.counterexample["acts"].items()}
    ok, _ = _judge(name, _values(H, acts), acts, tol)
    return not ok
