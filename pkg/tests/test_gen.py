import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kadditive import (
    GenConfig,
    Rng,
    additivity_order,
    comonotone,
    is_belief,
    is_symmetric,
    mobius_transform,
    random_acts,
    random_capacity,
    random_weights,
    validate_capacity,
    weight_kadd_order,
)
from kadditive.gen import KINDS, SHAPES
from kadditive.rng import mix64

CAPACITY_KINDS = [k for k in KINDS if k != "weightvector"]


class TestRng:
    def test_known_values(self):
        # reference SplitMix64 stream for seed 0
        r = Rng(0)
        assert [r.next_u64() for _ in range(3)] == [
            0xE220A8397B1DCDAF,
            0x6E789E6AA1B965F4,
            0x06C45D188009454F,
        ]

    def test_vectorised_matches_scalar(self):
        a, b = Rng(123), Rng(123)
        assert a.u64s(50).tolist() == [b.next_u64() for _ in range(50)]
        assert a.next_u64() == b.next_u64()

    def test_uniform_range(self):
        u = Rng(5).uniforms(10_000)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.02

    def test_substreams_are_independent_of_parent_state(self):
        r = Rng(9)
        first = r.substream(3).next_u64()
        r.next_u64()
        assert r.substream(3).next_u64() == first
        assert r.substream(4).next_u64() != first

    @given(st.integers(1, 50), st.integers(0, 2**64 - 1))
    def test_permutation(self, n, seed):
        assert sorted(Rng(seed).permutation(n).tolist()) == list(range(n))

    def test_below_bounds(self):
        r = Rng(1)
        draws = [r.below(7) for _ in range(2000)]
        assert set(draws) == set(range(7))
        with pytest.raises(ValueError):
            r.below(0)

    def test_mix64_bijective_on_sample(self):
        xs = list(range(1000))
        assert len({mix64(x) for x in xs}) == 1000


class TestCapacities:
    @pytest.mark.parametrize("kind", CAPACITY_KINDS)
    @pytest.mark.parametrize("n", [1, 2, 5, 8])
    def test_valid(self, kind, n):
        for seed in range(5):
            k = min(2, n) if kind == "k-additive" else None
            cap = random_capacity(GenConfig(n, seed=seed, kind=kind, k=k))
            assert validate_capacity(cap, 1e-9).ok

    def test_belief_k1_is_additive(self):
        cap = random_capacity(GenConfig(4, seed=2, kind="belief", k=1))
        assert additivity_order(cap) == 1
        for a in range(16):
            assert cap.values[a] == pytest.approx(sum(cap.values[1 << i] for i in range(4) if a >> i & 1))

    def test_belief_kind(self):
        for seed in range(20):
            assert is_belief(random_capacity(GenConfig(5, seed=seed, kind="belief", k=3)))

    def test_symmetric_kind(self):
        assert is_symmetric(random_capacity(GenConfig(3, seed=17, kind="symmetric")))

    @pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
    def test_k_additive_has_exact_order(self, k):
        for seed in range(10):
            cap = random_capacity(GenConfig(5, seed=seed, kind="k-additive", k=k))
            assert additivity_order(cap) == k

    def test_k_additive_produces_negative_coefficients(self):
        negatives = sum(
            (mobius_transform(random_capacity(GenConfig(5, seed=s, kind="k-additive", k=3))).coeffs < 0).any()
            for s in range(30)
        )
        assert negatives > 0

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_symmetric_with_order(self, k):
        for seed in range(10):
            cap = random_capacity(GenConfig(6, seed=seed, kind="symmetric", k=k))
            assert is_symmetric(cap) and additivity_order(cap) == k

    def test_determinism(self):
        for kind in CAPACITY_KINDS:
            cfg = GenConfig(6, seed=42, kind=kind, k=3)
            assert np.array_equal(random_capacity(cfg).values, random_capacity(cfg).values)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GenConfig(3, kind="k-additive")
        with pytest.raises(ValueError):
            GenConfig(3, k=4)
        with pytest.raises(ValueError):
            GenConfig(3, kind="nope")
        with pytest.raises(ValueError):
            random_capacity(GenConfig(3, kind="weightvector"))


class TestWeights:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 10), st.integers(0, 2**32))
    def test_simplex(self, n, seed):
        w = random_weights(n, seed)
        assert np.all(w >= 0) and w.sum() == pytest.approx(1.0)

    def test_with_order(self):
        for k in range(1, 6):
            w = random_weights(7, seed=k, k=k)
            assert np.all(w >= 0) and w.sum() == pytest.approx(1.0)
            assert weight_kadd_order(w) == k


class TestActs:
    def test_general(self):
        f = random_acts(6, 1)
        assert f.shape == (6,) and f.min() >= 0 and f.max() < 10

    def test_nondecreasing(self):
        assert np.all(np.diff(random_acts(6, 1, "nondecreasing")) >= 0)

    def test_strict_interior(self):
        assert np.all(np.diff(random_acts(6, 1, "strict-interior")) > 0)

    @given(st.integers(1, 10), st.integers(0, 2**32))
    def test_comonotone_pair(self, n, seed):
        f, g = random_acts(n, seed, "comonotone-pair")
        assert comonotone(f, g)

    def test_equal_block(self):
        f = random_acts(5, 3, "equal-block", block=[1, 2])
        assert f[0] == f[1]

    def test_unknown_shape(self):
        with pytest.raises(ValueError):
            random_acts(3, 0, "round")
        assert "equal-block" in SHAPES
