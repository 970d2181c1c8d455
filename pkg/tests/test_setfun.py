import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kadditive import (
    Capacity,
    InvalidCapacity,
    MobiusRepresentation,
    SetFunction,
    additivity_order,
    is_belief,
    is_symmetric,
    mobius_transform,
    owa_to_capacity,
    subset_elements,
    subset_index,
    validate_capacity,
    validate_mobius_capacity,
    zeta_transform,
)
from kadditive.setfun import mobius_dense, zeta_dense

from oracles import mobius_conditions_hold, naive_mobius, naive_zeta

THIRD = 1 / 3


def sixth_capacity():
    """n=3 with m(i) = m(ij) = 1/6."""
    return MobiusRepresentation.from_mapping(
        3, {(1,): 1 / 6, (2,): 1 / 6, (3,): 1 / 6, (1, 2): 1 / 6, (1, 3): 1 / 6, (2, 3): 1 / 6}
    )


def additive3():
    return SetFunction([0, THIRD, THIRD, 2 * THIRD, THIRD, 2 * THIRD, 2 * THIRD, 1])


def unanimity(n):
    v = np.zeros(1 << n)
    v[-1] = 1.0
    return SetFunction(v)


class TestSubsetEncoding:
    def test_index_and_elements(self):
        assert subset_index([1, 3]) == 0b101
        assert subset_elements(0b101) == (1, 3)
        assert subset_elements(0) == ()

    @given(st.integers(0, (1 << 12) - 1))
    def test_round_trip(self, bits):
        assert subset_index(subset_elements(bits)) == bits

    def test_rejects_bad_element(self):
        with pytest.raises(ValueError):
            subset_index([0])


class TestMobius:
    def test_two_element_example(self):
        m = mobius_transform(SetFunction([0, 0.3, 0.5, 1]))
        assert m[(1,)] == pytest.approx(0.3)
        assert m[(2,)] == pytest.approx(0.5)
        assert m[(1, 2)] == pytest.approx(0.2)
        assert m[()] == 0.0

    def test_additive(self):
        m = mobius_transform(additive3())
        for bits in range(8):
            expected = THIRD if bin(bits).count("1") == 1 else 0.0
            assert m[bits] == pytest.approx(expected, abs=1e-15)

    def test_unanimity(self):
        m = mobius_transform(unanimity(3))
        assert list(m.items()) == [(7, 1.0)]

    def test_zeta_examples(self):
        mu = zeta_transform(MobiusRepresentation.from_mapping(2, {(1,): 0.3, (2,): 0.5, (1, 2): 0.2}))
        np.testing.assert_allclose(mu.values, [0, 0.3, 0.5, 1], atol=1e-15)
        np.testing.assert_allclose(zeta_transform(mobius_transform(additive3())).values, additive3().values)
        assert zeta_transform(MobiusRepresentation.from_mapping(3, {(1, 2, 3): 1.0})).values.tolist() == [0] * 7 + [1]

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_naive_oracle(self, n):
        rng = np.random.default_rng(n)
        v = rng.integers(-50, 50, size=1 << n).astype(float)
        assert np.array_equal(mobius_dense(v, n), naive_mobius(v, n))
        assert np.array_equal(zeta_dense(v, n), naive_zeta(v, n))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 8).flatmap(lambda n: arrays(np.float64, 1 << n, elements=st.floats(-1, 1))))
    def test_round_trip(self, v):
        n = len(v).bit_length() - 1
        back = zeta_dense(mobius_dense(v, n), n)
        assert np.max(np.abs(back - v)) <= 1e-12

    def test_sparse_drops_tiny_coefficients(self):
        m = MobiusRepresentation.from_dense([0, 1e-14, 0.5, 0.5], 2)
        assert m.subsets.tolist() == [2, 3]
        assert len(m) == 2 and m.total() == 1.0

    def test_duplicate_subsets_rejected(self):
        with pytest.raises(ValueError):
            MobiusRepresentation(2, [1, 1], [0.5, 0.5])


class TestValidation:
    def test_valid(self):
        assert validate_capacity(SetFunction([0, 0.3, 0.5, 1])).ok
        assert validate_capacity(SetFunction([0, 0.6, 0.5, 1])).ok

    def test_boundary(self):
        rep = validate_capacity(SetFunction([0.1, 0.3, 0.5, 1]))
        assert not rep.ok
        assert rep.violations[0].kind == "boundary-empty"

    def test_monotonicity_witness(self):
        rep = validate_capacity(SetFunction([0, 0.3, 0.5, 0.4, 0, 0, 0, 1]))
        found = {(v.kind, v.subset, v.element) for v in rep.violations}
        # {1} < {1,3}, {2} < {2,3} and {2} < {1,2} all decrease
        assert found == {("monotonicity", 0b001, 3), ("monotonicity", 0b010, 3), ("monotonicity", 0b010, 1)}

    def test_tolerance(self):
        sf = SetFunction([0, 0.5 + 1e-10, 0.5, 1])
        assert validate_capacity(sf, tol=1e-9).ok
        assert not validate_capacity(SetFunction([0, 1 + 1e-6, 0.5, 1]), tol=1e-9).ok

    def test_capacity_constructor_validates(self):
        with pytest.raises(InvalidCapacity):
            Capacity([0, 0.9, 0.1, 0.5])

    def test_mobius_examples(self):
        assert validate_mobius_capacity(mobius_transform(additive3())).ok
        signed = MobiusRepresentation.from_mapping(2, {(1,): 1.0, (2,): 1.0, (1, 2): -1.0})
        assert validate_mobius_capacity(signed, tol=0.0).ok
        assert validate_mobius_capacity(MobiusRepresentation.from_mapping(2, {(1, 2): 1.0})).ok

    def test_mobius_violation(self):
        bad = MobiusRepresentation.from_mapping(2, {(1,): 0.2, (2,): 1.0, (1, 2): -0.2 - 0.5})
        rep = validate_mobius_capacity(bad, tol=0.0)
        kinds = {v.kind for v in rep.violations}
        assert "mobius-monotonicity" in kinds and "mobius-total" in kinds

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda n: arrays(np.float64, 1 << n, elements=st.floats(-0.5, 1))))
    def test_mobius_check_agrees_with_brute_force(self, m):
        n = len(m).bit_length() - 1
        m = m.copy()
        m[0] = 0.0
        m[-1] += 1.0 - m.sum()
        rep = validate_mobius_capacity(MobiusRepresentation.from_dense(m, n, eps=0.0), tol=1e-9)
        assert rep.ok == mobius_conditions_hold(m, n, 1e-9)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda n: arrays(np.float64, 1 << n, elements=st.floats(0, 1))))
    def test_both_forms_agree(self, v):
        n = len(v).bit_length() - 1
        v = v.copy()
        v[0], v[-1] = 0.0, 1.0
        sf = SetFunction(v)
        assert validate_capacity(sf).ok == validate_mobius_capacity(mobius_transform(sf, eps=0.0)).ok


class TestClassification:
    def test_symmetric(self):
        assert is_symmetric(additive3())
        assert not is_symmetric(SetFunction([0, 0.9, 0.1, 1]))
        assert is_symmetric(owa_to_capacity([0.5, 0.3, 0.2]))

    def test_belief(self):
        assert is_belief(SetFunction([0, 0.3, 0.5, 1]))
        assert not is_belief(SetFunction([0, 1, 1, 1]))
        assert is_belief(unanimity(3))
        assert is_belief(sixth_capacity())

    def test_additivity_order(self):
        assert additivity_order(additive3()) == 1
        assert additivity_order(sixth_capacity()) == 2
        assert additivity_order(zeta_transform(sixth_capacity())) == 2
        assert additivity_order(unanimity(3)) == 3

    def test_order_ignores_noise_below_tol(self):
        v = zeta_dense(np.array([0, 0.5, 0.5, 1e-12]), 2)
        assert additivity_order(SetFunction(v), tol=1e-9) == 1

    def test_zero_function_has_no_order(self):
        with pytest.raises(ValueError):
            additivity_order(SetFunction(np.zeros(4)))
