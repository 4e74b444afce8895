"""Exact-arithmetic stabilizer states over finite Abelian groups."""

from .groups import Group, Subgroup, annihilator, cyclic_decompose, enumerate_subgroups, make_group, parse_group
from .phase_space import IsotropicSubgroup, enumerate_maximal_isotropic, pair_from_isotropic
from .quadratic import Char2, SymHom, beta_of, char2_cyclic, char2_product, count_sym, enumerate_ch2
from .stabilizer import (
    StabilizerGroup,
    count_states,
    enumerate_states,
    group_from_sstate,
    is_sstate,
    sstate_from_group,
    sstate_synthesize,
    verify_stabilized,
)
from .wehrl import berezin_lieb, fourier_husimi, husimi, parse_g, verify_max_bound, verify_min_bound
from .weyl import DensityOperator, WaveFunction, cst, characteristic_fn, shift_apply

__version__ = "0.1.0"

__all__ = [
    "Group",
    "Subgroup",
    "annihilator",
    "cyclic_decompose",
    "enumerate_subgroups",
    "make_group",
    "parse_group",
    "IsotropicSubgroup",
    "enumerate_maximal_isotropic",
    "pair_from_isotropic",
    "Char2",
    "SymHom",
    "beta_of",
    "char2_cyclic",
    "char2_product",
    "count_sym",
    "enumerate_ch2",
    "StabilizerGroup",
    "count_states",
    "enumerate_states",
    "group_from_sstate",
    "is_sstate",
    "sstate_from_group",
    "sstate_synthesize",
    "verify_stabilized",
    "berezin_lieb",
    "fourier_husimi",
    "husimi",
    "parse_g",
    "verify_max_bound",
    "verify_min_bound",
    "DensityOperator",
    "WaveFunction",
    "cst",
    "characteristic_fn",
    "shift_apply",
]
