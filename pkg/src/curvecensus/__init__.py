"""Exact weighted counts of elliptic curve groups over prime finite fields.

The census counts isomorphism classes of curves over F_p with weight
1/#Aut, by group shape (m, k) meaning Z/m x Z/mk or by order N, through
weighted class numbers of binary quadratic forms.  Local Euler factors,
2-adic constants, and GL2 matrix-count densities give the conjectural main
terms; brute-force oracles back every closed formula.
"""

from .arith import (
    Factorization,
    euler_phi,
    factorize,
    is_prime,
    kronecker,
    mobius,
    primes_in_ap,
    primes_up_to,
    valuation,
)
from .curves import (
    CurveTally,
    GroupShape,
    HasseWindow,
    brute_force_tally,
    delta_statistic,
    eta_statistic,
    hasse_window,
    inclusion_exclusion_check,
    m_of_group,
    m_of_order,
    m_p_of_group,
    m_p_of_order,
    trace_discriminant,
)
from .errors import ConsistencyError
from .localfactors import (
    LocalFactorTable,
    aut_order,
    conjectural_main_term,
    j_r_v,
    k_of_group,
    k_of_order,
    p_of_ell,
    script_j,
    t_closed_form,
    t_of_n,
)
from .matrixcounts import (
    MatrixCountQuery,
    count_c_brute,
    count_c_closed,
    det_count_closed,
    euler_density,
    gl2_order,
    verify_kg_interpretation,
    verify_kn_interpretation,
)
from .quadforms import (
    ClassData,
    class_data,
    kronecker_class_number,
    kronecker_class_number_restricted,
    kronecker_class_number_weighted,
    l_value_exact,
    l_value_series,
    l_value_truncated,
    precompute_class_numbers,
)

__version__ = "0.1.0"
