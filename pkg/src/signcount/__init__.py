"""Exact signed counts of sign vectors, even maps and their invariants."""

from .errors import SignCountError
from .exactnum import FactoredInteger, factorize, first_primes, isqrt, mobius, parse_rational
from .geomslab import SlabInstance, find_normal, m_ij, slab_report, validate_normal
from .invariants import AlphaInstance, all_pairs_report, h_alpha, n_cal_ij, n_ij, s_parity
from .primorial import (
    PrimorialContext,
    g_m,
    g_n,
    n_ij_beta,
    n_ij_beta_mobius,
    proposition1_classify,
    q_of_n,
)
from .sicount import (
    OpenInterval,
    WeightVector,
    alternating_sign_sum,
    find_vanishing,
    signed_count,
    signed_count_brute,
    signed_count_mitm,
    unsigned_count,
)
from .signspace import (
    EvenMapOracle,
    SignMask,
    n_sigma,
    parity_sign,
    product_map,
    tau_to_sigma,
    theorem1_value,
    verify_even,
)

__version__ = "0.1.0"
