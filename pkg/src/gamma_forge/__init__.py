"""Commutative loops from odd-order groups: construction and exhaustive verification."""

from .core import (
    CayleyTable,
    CapExceededError,
    ConstructionError,
    EvenOrderError,
    GammaForgeError,
    PermGroup,
    Permutation,
    build_table,
    classify,
    close,
    left_divide,
    perm_sqrt_odd,
    right_divide,
    stabilizer_of,
    translation,
)
from .groups import (
    FunctionalGroup,
    Group,
    SemidirectSpec,
    Subgroup,
    center,
    commutator,
    construct,
    cyclic,
    derived_series,
    direct,
    from_file,
    heisenberg,
    is_metabelian,
    is_two_engel,
    is_uniquely_2_divisible,
    lower_central_series,
    nested_commutator,
    nilpotency_class,
    sd,
    semidirect,
    sqrt_element,
    unitriangular,
    upper_central_series,
    wreath_cyclic,
)
from .constructions import bruck_from_gamma, circ_loop, gamma_from_bruck, oplus_loop, power
from .loops import (
    Loop,
    check_gamma_axioms,
    inner_generators,
    is_automorphic,
    is_isomorphic,
    is_left_bruck,
    is_moufang,
    is_power_associative,
    loop_center,
    loop_nilpotency_class,
    powers_coincide,
    quotient_loop,
)
from .sdforms import SdElement, SdForms

__version__ = "0.1.0"
