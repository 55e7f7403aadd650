"""Exact constructive algebra: ring towers, decomposition algebras, Hensel
lifting over finite local rings, and Azumaya-algebra certificates."""

from .algebra import (
    AlgebraElement,
    FiniteAlgebra,
    canonical_map_matrix,
    center,
    conjugate_basis,
    is_azumaya,
    matrix_algebra,
    monic_quotient_algebra,
    opposite,
    quaternion_algebra,
    tensor,
    trivial_algebra,
)
from .decomp import D, ZariskiElement, build_uda, deltas, is_unramifiable, zariski_is_top, zariski_leq
from .errors import *  # noqa: F401,F403
from .hensel import (
    find_simple_root,
    hensel_factor,
    lift_idempotent_algebra,
    lift_idempotent_monic_quotient,
    lift_simple_root,
)
from .local import LocalCertificate, check_local, residue, unit_ideal_test
from .poly import Poly, derivative, divmod_monic, evaluate, factor_over_finite_field, roots_in_finite_field
from .rings import (
    QQ,
    ZZ,
    Elem,
    IntegersModPrimePower,
    PrimeField,
    Ring,
    make_ring,
)
from .splittree import (
    Leaf,
    LocalizationCover,
    MatrixUnitWitness,
    RootAdjunction,
    SplitTree,
    build_tree,
    skolem_noether_matrix,
    skolem_noether_module,
    split_over_finite_field,
    split_over_finite_local,
    verify_tree,
)

__version__ = "0.1.0"
