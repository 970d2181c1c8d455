from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kadditive import (
    GenConfig,
    MobiusRepresentation,
    SetFunction,
    additivity_order,
    binomial_weight_sums,
    capacity_to_owa,
    equidistance_check,
    k_difference_residuals,
    owa_to_capacity,
    random_capacity,
    second_difference_residuals,
    weight_kadd_order,
    zeta_transform,
)
from kadditive.setfun import mobius_dense

from oracles import alternating_difference, k_difference_via_mobius, popcount

W = [1 / 2, 1 / 3, 1 / 6]
SIXTH = zeta_transform(
    MobiusRepresentation.from_mapping(
        3, {(1,): 1 / 6, (2,): 1 / 6, (3,): 1 / 6, (1, 2): 1 / 6, (1, 3): 1 / 6, (2, 3): 1 / 6}
    )
)


class TestWeights:
    def test_binomial_sums(self):
        np.testing.assert_allclose(binomial_weight_sums(W, 2), [1 / 6, 1 / 6])
        np.testing.assert_allclose(binomial_weight_sums([0.25] * 4, 2), [0, 0, 0])
        np.testing.assert_allclose(binomial_weight_sums(W, 1), W)

    def test_sum_equals_level_mobius(self):
        assert binomial_weight_sums(capacity_to_owa(SIXTH), 2)[0] == pytest.approx(1 / 6)

    def test_order(self):
        assert weight_kadd_order(W) == 2
        assert weight_kadd_order([0.25] * 4) == 1
        assert weight_kadd_order([1, 0, 0]) == 3

    def test_equidistance(self):
        rep = equidistance_check(W)
        assert rep.max_residual == pytest.approx(0, abs=1e-15)
        assert rep.constant_value == pytest.approx(1 / 6)
        rep = equidistance_check([1 / 3] * 3)
        assert rep.ok() and rep.constant_value == 0
        rep = equidistance_check([1, 0, 0])
        assert rep.max_residual == 1.0 and rep.witness == (2,) and rep.constant_value is None

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 8), st.integers(0, 2**32))
    def test_weight_order_matches_capacity_order(self, n, seed):
        cap = random_capacity(GenConfig(n, seed=seed, kind="symmetric"))
        assert weight_kadd_order(capacity_to_owa(cap), 1e-9) == additivity_order(cap, 1e-9)


class TestCapacityResiduals:
    def test_second_difference_examples(self):
        rep = second_difference_residuals(SIXTH)
        assert rep.max_residual == pytest.approx(0, abs=1e-15)
        assert rep.constant_value == pytest.approx(1 / 6)
        add = SetFunction(np.array([0, 1, 1, 2, 1, 2, 2, 3]) / 3)
        rep = second_difference_residuals(add)
        assert rep.ok() and rep.constant_value == pytest.approx(0, abs=1e-15)

    def test_unanimity_witness(self):
        rep = second_difference_residuals(owa_to_capacity([1, 0, 0]))
        assert rep.max_residual == 1.0
        assert rep.witness[0] == 0b111

    def test_k2_matches_second_difference(self):
        cap = random_capacity(GenConfig(5, seed=4))
        a = second_difference_residuals(cap)
        b = k_difference_residuals(cap, 2)
        assert a.max_residual == b.max_residual

    def test_three_additive(self):
        cap = random_capacity(GenConfig(5, seed=9, kind="k-additive", k=3))
        assert k_difference_residuals(cap, 3).max_residual <= 1e-9
        rep = k_difference_residuals(cap, 2)
        assert rep.max_residual > 1e-9 and rep.witness is not None
        a, block = rep.witness
        assert a & block == block and popcount(block) == 2

    def test_threads_give_identical_result(self):
        cap = random_capacity(GenConfig(8, seed=2))
        assert k_difference_residuals(cap, 3, threads=4) == k_difference_residuals(cap, 3, threads=1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2**32), st.data())
    def test_alternating_sum_is_mobius_interval_sum(self, n, seed, data):
        cap = random_capacity(GenConfig(n, seed=seed))
        m = mobius_dense(cap.values, n)
        k = data.draw(st.integers(1, n))
        block = data.draw(st.sampled_from([b for b in range(1 << n) if popcount(b) == k]))
        a = data.draw(st.sampled_from([x for x in range(1 << n) if x & block == block]))
        assert alternating_difference(cap.values, a, block) == pytest.approx(
            k_difference_via_mobius(m, n, a, block), abs=1e-12
        )

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_residual_predicate_matches_order(self, k):
        for seed in range(10):
            cap = random_capacity(GenConfig(6, seed=seed, kind="k-additive", k=k))
            for j in range(1, 7):
                assert (k_difference_residuals(cap, j).max_residual <= 1e-9) == (j >= k)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            k_difference_residuals(SIXTH, 4)

    def test_constant_equals_top_mobius_level(self):
        # symmetric 3-additive: the k=3 constant is m(A) for |A| = 3
        cap = random_capacity(GenConfig(6, seed=1, kind="symmetric", k=3))
        m = mobius_dense(cap.values, 6)
        rep = k_difference_residuals(cap, 3)
        assert rep.constant_value == pytest.approx(m[0b111], abs=1e-12)
        w = capacity_to_owa(cap)
        assert np.ptp(binomial_weight_sums(w, 3)) <= 1e-12
        assert binomial_weight_sums(w, 3)[0] == pytest.approx(m[0b111], abs=1e-12)

    def test_binomial_identity(self):
        # level-k sums of the j-binomial OWA vanish for j < k
        for n in range(3, 8):
            for k in range(2, n + 1):
                for j in range(1, k):
                    w = np.array([comb(n - i, j - 1) / comb(n, j) for i in range(1, n + 1)])
                    assert np.max(np.abs(binomial_weight_sums(w, k))) <= 1e-12
