"""Segre classes of subschemes of products of projective spaces and their
Segre zeta functions, computed with exact arithmetic."""

from .chowring import (
    AmbientSpec,
    BundleSpec,
    ChowClass,
    IntPoly,
    ZetaFunction,
    expand_rational,
    inverse,
)
from .errors import (
    DimensionError,
    FullAmbientError,
    GenericityExhaustedError,
    InhomogeneousError,
    NonUnitDenominatorError,
    PolynomialParseError,
    RankConstraintError,
    SegreZetaError,
    StructuralError,
    ZeroMapError,
    ZeroPolynomialError,
)
from .exactalg import GF, QQ, MultiPoly, PolyRing, multidegree_of
from .groebner import Ideal, eliminate, groebner_basis, intersect, quotient_length, saturate
from .segre import (
    compute_segre,
    complete_intersection_segre,
    equigenerate,
    graph_closure,
    multidegree_class,
    projective_degrees,
    segre_class,
    segre_from_projective_degrees,
)
from .zeta import (
    ZetaProblem,
    check_properties,
    cone_ideal,
    restrict_hyperplane,
    verify_cone,
    zeta_from_ideal,
)

__version__ = "0.1.0"

__all__ = [
    "GF",
    "QQ",
    "MultiPoly",
    "PolyRing",
    "multidegree_of",
    "Ideal",
    "eliminate",
    "groebner_basis",
    "intersect",
    "quotient_length",
    "saturate",
    "AmbientSpec",
    "BundleSpec",
    "ChowClass",
    "IntPoly",
    "ZetaFunction",
    "expand_rational",
    "inverse",
    "DimensionError",
    "FullAmbientError",
    "GenericityExhaustedError",
    "InhomogeneousError",
    "NonUnitDenominatorError",
    "PolynomialParseError",
    "RankConstraintError",
    "SegreZetaError",
    "StructuralError",
    "ZeroMapError",
    "ZeroPolynomialError",
    "compute_segre",
    "complete_intersection_segre",
    "equigenerate",
    "graph_closure",
    "multidegree_class",
    "projective_degrees",
    "segre_class",
    "segre_from_projective_degrees",
    "ZetaProblem",
    "check_properties",
    "cone_ideal",
    "restrict_hyperplane",
    "verify_cone",
    "zeta_from_ideal",
]
