"""Exact computation of period-map relations, Jacobian-ring Yukawa data and Artin-local duality."""

from __future__ import annotations

__version__ = "0.1.0"

from .artin import (ArtinAlgebra, FiniteModule, MOSChain, OSChain, cofree_chain, duality_check,
                    free_module, os_dual, quasi_scalar, residue_field, standard_chain,
                    transpose_chain, transpose_module, truncate_algebra)
from .hodge import HodgeFrame, build_frame, graded_slice, sym_basis
from .jacobian import (HypersurfaceSpec, build_jacobian_ring, export_frame, fermat,
                       reduce_mod_jacobian, yukawa_tensors)
from .jet import (PeriodHom, PeriodJet, YukawaTensors, jet_from_yukawa, k3_quadric_jet,
                  leading_tensors, make_jet, period_hom, validate_jet)
from .schottky import (k3_period_quadric, km_generation_check, lift_relation, relation_kernel,
                       verify_defining, yukawa_relations)

__all__ = [
    "ArtinAlgebra", "FiniteModule", "MOSChain", "OSChain", "cofree_chain", "duality_check",
    "free_module", "os_dual", "quasi_scalar", "residue_field", "standard_chain",
    "transpose_chain", "transpose_module", "truncate_algebra",
    "HodgeFrame", "build_frame", "graded_slice", "sym_basis",
    "HypersurfaceSpec", "build_jacobian_ring", "export_frame", "fermat", "reduce_mod_jacobian",
    "yukawa_tensors",
    "PeriodHom", "PeriodJet", "YukawaTensors", "jet_from_yukawa", "k3_quadric_jet",
    "leading_tensors", "make_jet", "period_hom", "validate_jet",
    "k3_period_quadric", "km_generation_check", "lift_relation", "relation_kernel",
    "verify_defining", "yukawa_relations",
]
