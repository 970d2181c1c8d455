"""Capacities on finite sets: Möbius transforms, Choquet/OWA aggregation,
k-additivity tests and a randomised checker for social-welfare axioms."""

from .axioms import (
    AxiomReport,
    Functional,
    a9_alternating_sum,
    build_gift_family,
    build_transfer_acts,
    check_axiom,
    comonotone,
    f_precedes,
    replay,
)
from .gen import GenConfig, random_acts, random_capacity, random_weights
from .integral import (
    NotSymmetric,
    binomial_decomposition,
    binomial_owa_weights,
    capacity_to_owa,
    choquet_mobius,
    choquet_sorted,
    gini_functional,
    gini_owa_weights,
    owa,
    owa_to_capacity,
)
from .kadd import (
    ResidualReport,
    binomial_weight_sums,
    equidistance_check,
    k_difference_residuals,
    second_difference_residuals,
    weight_kadd_order,
)
from .rng import Rng
from .setfun import (
    Capacity,
    InvalidCapacity,
    MobiusRepresentation,
    SetFunction,
    additivity_order,
    is_belief,
    is_symmetric,
    mobius_transform,
    subset_elements,
    subset_index,
    validate_capacity,
    validate_mobius_capacity,
    zeta_transform,
)

__version__ = "0.1.0"
