"""Pfaffian orientations on punctured cellulated orientable surfaces."""

from .complex import CellComplex, PuncturedComplex, euler_and_genus, puncture, validate
from .enumeration import (
    Orientation,
    brute_force_count,
    count_pfaffian,
    decode,
    encode,
    enumerate_orientations,
    is_pfaffian,
)
from .generators import fixture, generate
from .incidence import build_system, incidence_matrix, reduce_system, system_nullity
from .matching import construct_orientation, find_acyclic_matching

__all__ = [
    "CellComplex",
    "Orientation",
    "PuncturedComplex",
    "brute_force_count",
    "build_system",
    "construct_orientation",
    "count_pfaffian",
    "decode",
    "encode",
    "enumerate_orientations",
    "euler_and_genus",
    "find_acyclic_matching",
    "fixture",
    "generate",
    "incidence_matrix",
    "is_pfaffian",
    "puncture",
    "reduce_system",
    "system_nullity",
    "validate",
]
