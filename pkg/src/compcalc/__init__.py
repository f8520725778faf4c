"""Composition calculus for non-symmetric pre-operads.

Two concrete models (endomorphism tensors of a rank-d module, free planar
trees over a signature), the full set of derived operations (cup, total
composition, braces, commutator, pre-coboundary, derivation deviations,
auxiliary ladder elements), a seeded randomized identity suite, and a
Hochschild-cohomology application with an independent classical oracle.
"""

from .calculus import (
    Region,
    associator,
    braces,
    classify_region,
    commutator,
    compose_at,
    cup,
    delta,
    delta_via_cup,
    desusp,
    dev_braces,
    dev_total,
    jacobian,
    lambda_aux,
    lambda_prime_aux,
    total,
)
from .endomodel import EndoContext, HomElement, hom_from_json, identity_hom, random_hom
from .errors import (
    CompCalcError,
    DegreeError,
    FormatError,
    NonAssociativeError,
    PositionError,
    RingMismatchError,
)
from .freemodel import (
    FreeContext,
    FreeElement,
    Generator,
    PlanarTree,
    Representation,
    Signature,
    default_signature,
    parse_tree,
    represent,
)
from .hochschild import (
    AlgebraSpec,
    CochainMatrix,
    cohomology_dims,
    cohomology_dims_standard,
    delta_matrix,
    hochschild_report,
    is_associative,
    mu_from_spec,
    standard_delta,
)
from .ring import QQ, ZZ, IntegersMod, LinComb, Ring, koszul_sign, ring_from_token, sign_pow
from .suite import IdentityReport, ModelSpec, run_suite

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec",
    "CochainMatrix",
    "CompCalcError",
    "DegreeError",
    "EndoContext",
    "FormatError",
    "FreeContext",
    "FreeElement",
    "Generator",
    "HomElement",
    "IdentityReport",
    "IntegersMod",
    "LinComb",
    "ModelSpec",
    "NonAssociativeError",
    "PlanarTree",
    "PositionError",
    "QQ",
    "Region",
    "Representation",
    "Ring",
    "RingMismatchError",
    "Signature",
    "ZZ",
    "associator",
    "braces",
    "classify_region",
    "cohomology_dims",
    "cohomology_dims_standard",
    "commutator",
    "compose_at",
    "cup",
    "default_signature",
    "delta",
    "delta_matrix",
    "delta_via_cup",
    "desusp",
    "dev_braces",
    "dev_total",
    "hochschild_report",
    "hom_from_json",
    "identity_hom",
    "is_associative",
    "jacobian",
    "koszul_sign",
    "lambda_aux",
    "lambda_prime_aux",
    "mu_from_spec",
    "parse_tree",
    "random_hom",
    "represent",
    "ring_from_token",
    "run_suite",
    "sign_pow",
    "standard_delta",
    "total",
]
