"""Cylindrical gluing products, exponential quotients, and the homomorphism
duality between them, for finite labeled multigraphs."""

from . import catalog
from .construct import (
    ExpoTrace,
    ProductTrace,
    cyl_product,
    cylinders_from_surjection,
    exponential,
    uniform_labels,
)
from .core import GammaLabel, Graph, disjoint_union, isomorphic
from .cylinder import (
    Cylinder,
    CylinderSet,
    identity_cyl,
    make_cylinder,
    path_cyl,
    sqcap_cyl,
    square_cyl,
)
from .duality import (
    DualityReport,
    check_duality,
    counit_map,
    exponential_map,
    gamma_acts_freely,
    is_lower_closed,
    is_upper_closed,
    product_map,
    retraction,
    section,
    unit_map,
)
from .errors import (
    CylError,
    DomainError,
    EpsilonError,
    LabelConflict,
    NotACylinder,
    NotAPermutation,
    NotATwist,
    ResourceLimit,
)
from .hom import (
    Homomorphism,
    check_hom,
    compose_homs,
    count_homs,
    find_hom,
    identity_hom,
    iter_homs,
)
from .perm import Perm, PermGroup

__all__ = [
    "Cylinder",
    "CylinderSet",
    "CylError",
    "DomainError",
    "DualityReport",
    "ExpoTrace",
    "GammaLabel",
    "Graph",
    "Homomorphism",
    "EpsilonError",
    "LabelConflict",
    "NotACylinder",
    "NotATwist",
    "NotAPermutation",
    "Perm",
    "PermGroup",
    "ProductTrace",
    "ResourceLimit",
    "check_duality",
    "check_hom",
    "compose_homs",
    "counit_map",
    "count_homs",
    "cyl_product",
    "cylinders_from_surjection",
    "disjoint_union",
    "exponential",
    "exponential_map",
    "find_hom",
    "gamma_acts_freely",
    "identity_hom",
    "is_lower_closed",
    "is_upper_closed",
    "isomorphic",
    "iter_homs",
    "make_cylinder",
    "path_cyl",
    "product_map",
    "retraction",
    "section",
    "sqcap_cyl",
    "square_cyl",
    "identity_cyl",
    "uniform_labels",
    "unit_map",
]
__version__ = "0.1.0"
