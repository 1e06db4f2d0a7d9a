"""Weak Hopf C*-algebras of Tambara-Yamagami categories.

Construction of the groupoid algebra from (G, chi, tau), numerical
verification of its defining axioms, builders and verifiers for (weak)
coideal subalgebras, and orbit enumeration of their isomorphism classes.
"""

from .algebra import AxiomReport, BasisUnit, BlockLabel, Slot, TYAlgebra, TYData
from .classify import (
    ClassificationReport,
    OrbitRep,
    burnside_check,
    coideal_orbits,
    g_algebra_classes,
    realize_and_verify,
    weak_coideal_classes,
)
from .coideals import (
    CoidealSpec,
    WeakCoideal,
    assemble,
    build_I_m_K,
    build_I_Omega_K,
    build_no_m,
    build_with_m,
    center,
    coset_vector,
    fixed_point_algebra,
    is_coideal,
    is_indecomposable,
    measured_dims,
    spectral_dims,
    spectral_dims_type_d,
    spectral_dims_type_i,
    verify_weak_coideal,
    x0_partition,
)
from .errors import InvariantError, SizeError, StructuralError
from .groups import (
    Bicharacter,
    Coset,
    FiniteAbelianGroup,
    QuotientGroup,
    Subgroup,
    SubgroupCharacter,
    bichar_eval,
    characters,
    enumerate_subgroups,
    orthogonal,
    orthogonal_rho,
    quotient,
)
from .linalg import DEFAULT_TOL, SparseVec, Subspace

__version__ = "0.1.0"
