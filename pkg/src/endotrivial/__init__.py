"""Modules over restricted enveloping algebras and endotrivial module computations."""

from .algebra import PBWAlgebra, automorphism, build_algebra, get_algebra
from .census import endotrivial_census, enumerate_points
from .endotrivial import (
    class_add,
    endo_class,
    ext1,
    graded_hom,
    is_endotrivial,
    minimal_resolution,
    omega,
    omega_inverse,
    steinberg_lift_sequence,
    syzygy,
    syzygy_degree,
)
from .lie import PRESETS, RestrictedLiePresentation, preset
from .modules import ModuleRep, build_weyl_sl2, direct_sum, dual, tensor, trivial, twist
from .repro import repro_sl2_table, repro_sl3_omega2
from .structure import dade_split, decompose, hom_space, is_isomorphic, strip_projectives

__version__ = "0.1.0"

__all__ = [
    "PBWAlgebra", "automorphism", "build_algebra", "get_algebra",
    "endotrivial_census", "enumerate_points",
    "class_add", "endo_class", "ext1", "graded_hom", "is_endotrivial", "minimal_resolution",
    "omega", "omega_inverse", "steinberg_lift_sequence", "syzygy", "syzygy_degree",
    "PRESETS", "RestrictedLiePresentation", "preset",
    "ModuleRep", "build_weyl_sl2", "direct_sum", "dual", "tensor", "trivial", "twist",
    "repro_sl2_table", "repro_sl3_omega2",
    "dade_split", "decompose", "hom_space", "is_isomorphic", "strip_projectives",
]
