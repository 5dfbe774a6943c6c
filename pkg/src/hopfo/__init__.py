"""Exact finite-dimensional computations with modules over Hopf algebras and smash products.

The subpackages build on each other in this order: ``exactla`` (exact linear
algebra over Q and GF(p)), ``hopfcore`` (validated Hopf algebras),
``hmodules`` (H-modules, homology, cones and suspensions), ``equivariant``
(H-module categories and equivariant modules), ``homotopy`` (stable hom,
triangles, A-split extensions), ``cotorsion`` (Ext^1, projectivity and the
orthogonality checks) and ``suites`` / ``cli``.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .exactla import Field, Subspace, kernel, image, rank, solve
from .hopfcore import AxiomError, HopfPresentation, HopfoError, catalog, parse_hopf, hopf_from_json, hopf_to_json
from .hmodules import HModule, homology, cone, suspend, desuspend, validate_module
from .equivariant import EquivariantModule, HModuleCategory, smash
from .homotopy import stable_hom, mapping_cone, is_contractible, long_exact_check
from .cotorsion import ext1, hovey_triple_report, contractible_pair_report
from .catalogs import load_hopf, parse_category, parse_module, module_zoo

__all__ = [
    "__version__",
    "Field",
    "Subspace",
    "kernel",
    "image",
    "rank",
    "solve",
    "AxiomError",
    "HopfoError",
    "HopfPresentation",
    "catalog",
    "parse_hopf",
    "hopf_from_json",
    "hopf_to_json",
    "HModule",
    "homology",
    "cone",
    "suspend",
    "desuspend",
    "validate_module",
    "EquivariantModule",
    "HModuleCategory",
    "smash",
    "stable_hom",
    "mapping_cone",
    "is_contractible",
    "long_exact_check",
    "ext1",
    "hovey_triple_report",
    "contractible_pair_report",
    "load_hopf",
    "parse_category",
    "parse_module",
    "module_zoo",
]
