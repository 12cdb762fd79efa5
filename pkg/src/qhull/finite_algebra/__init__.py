"""Exact arithmetic and structure enumeration for finite rings and modules."""

from .abelian import GroupBasis, decompose
from .constructions import (
    DirectSum,
    Quotient,
    annihilator,
    common_kernel,
    direct_sum,
    direct_sum_submodule,
    element_annihilator,
    enumerate_right_ideals,
    enumerate_submodules,
    is_two_sided,
    killed_by,
    preimage_ideal,
    quotient_module,
    vanishing_on,
)
from .homs import (
    EndRing,
    HomSpace,
    end_ring,
    hom_group,
    hom_space,
    hom_tables_bruteforce,
    idempotent_tables,
    idempotents,
)
from .rings import MatrixRing, field, gf4, matrix_ring, product_ring, zmod
from .structures import (
    FiniteRing,
    ModuleHom,
    RightModule,
    Submodule,
    canonicalize,
    cyclic_submodule,
    identity_hom,
    module_from_action,
    right_ideal,
    submodule_generated,
    validate_ring,
    zero_hom,
)

enumerate_homs = hom_space
