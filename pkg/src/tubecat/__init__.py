"""Tube-algebra toolkit for multiplicity-free modular categories.

Exposes category loading/verification, the annular (tube) morphism engine,
finite-dimensional representations attached to integer multiplicity
matrices, and search for modular invariants.
"""

from .category import (
    CategoryDataError,
    ConsistencyReport,
    FusionRing,
    MTCData,
    ModularData,
    ModularDataError,
    NonScalarLambdaError,
    SingularSMatrixError,
    builtin_category,
    bundled_names,
    compute_modular_data,
    load_category,
    verify_data_consistency,
    verify_hexagon,
    verify_modular_relations,
    verify_pentagon,
)
from .modinv import (
    CommutantBasis,
    PartialSearchError,
    brute_force_invariants,
    commutant,
    default_entry_bound,
    enumerate_modular_invariants,
    is_modular_invariant,
    load_modular_data_file,
)
from .reps import (
    InvarianceReport,
    RepFamily,
    TubeRep,
    build_rep,
    check_modular_invariance,
    check_s_invariance,
    check_t_invariance,
    default_family,
    multiplicity_matrix,
    random_multiplicity,
    trace_s_twisted,
    trace_standard,
    trace_t_twisted,
)
from .tube import (
    TubeEngine,
    TubeMorphism,
    verify_handle_slides,
    verify_idempotents,
    verify_isotypic_partition,
    verify_twist_invertibility,
)

__version__ = "0.1.0"

__all__ = [
    "CategoryDataError",
    "CommutantBasis",
    "ConsistencyReport",
    "FusionRing",
    "InvarianceReport",
    "RepFamily",
    "MTCData",
    "ModularData",
    "ModularDataError",
    "NonScalarLambdaError",
    "PartialSearchError",
    "SingularSMatrixError",
    "TubeEngine",
    "TubeMorphism",
    "TubeRep",
    "builtin_category",
    "build_rep",
    "bundled_names",
    "brute_force_invariants",
    "check_modular_invariance",
    "check_s_invariance",
    "check_t_invariance",
    "commutant",
    "compute_modular_data",
    "default_entry_bound",
    "default_family",
    "enumerate_modular_invariants",
    "is_modular_invariant",
    "load_category",
    "load_modular_data_file",
    "multiplicity_matrix",
    "random_multiplicity",
    "trace_s_twisted",
    "trace_standard",
    "trace_t_twisted",
    "verify_data_consistency",
    "verify_handle_slides",
    "verify_hexagon",
    "verify_idempotents",
    "verify_isotypic_partition",
    "verify_modular_relations",
    "verify_pentagon",
    "verify_twist_invertibility",
    "__version__",
]
