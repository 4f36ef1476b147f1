"""Code Lattice - self-dual codes, additive F4-codes, Z4-codes and their lattices."""

from codelattice.models import (
    CodeKind,
    ComputationError,
    FrameType,
    JacobiKind,
    LatticeConstruction,
    RunManifest,
    ValidationError,
    WeightDistribution,
    Z4Type,
)
from codelattice.gf2core import (
    BitMatrix,
    BitVector,
    dual_code,
    enumerate_codewords,
    macwilliams_transform,
    minimum_weight,
    rref,
    weight_distribution,
)
from codelattice.canonical import (
    AutomorphismInfo,
    CanonicalForm,
    SearchBudgetError,
    are_equivalent,
    automorphism_order,
    canonical_form,
)
from codelattice.selfdual import (
    SelfDualCode,
    ShadowDecomposition,
    TDecomposition,
    check_extremal_profile,
    coset_weight_distribution,
    covering_radius,
    design_check,
    doubly_even_neighbors,
    extremal_bound,
    extremal_shadow_enumerator,
    extremal_weight_enumerator,
    find_t_decomposition,
    shadow,
    singly_even_neighbor,
    verify_self_dual,
)
from codelattice.classify import (
    ClassRecord,
    GenerationRun,
    brute_force_classes,
    classify_via_neighbors,
    first_extremal_neighbor,
    generate,
    mass_formula_total,
    parent_test,
    subcode_sweep,
)
from codelattice.f4additive import (
    AdditiveF4Code,
    b_map,
    f4_equivalence_certificate,
    f4_extremal_bound,
    trace_dual_check,
)
from codelattice.z4codes import (
    Z4Code,
    euclidean_weight,
    min_euclidean_weight,
    z4_dual,
    z4_extremal_bound,
    z4_self_dual_check,
)
from codelattice.qseries import (
    QSeries,
    ThetaSeries,
    extremal_odd_theta_family,
    fit_theta,
    jacobi_series,
    shadow_theta,
    validate_alpha,
)
from codelattice.lattice import (
    CongruenceLattice,
    Frame,
    construct_A4,
    construct_L_odd,
    construct_LA,
    construct_LB,
    construct_LC,
    lattice_shadow_counts,
    short_vectors,
    spherical_design_moments,
    theta_from_code,
    verify_frame,
    z4_code_from_4frame,
)
from codelattice.code_io import (
    FormatError,
    load_bundled,
    parse_text,
    read_input,
    write_object,
)
from codelattice.config import (
    AppConfig,
    LimitsConfig,
    LoggingConfig,
    RuntimeConfig,
    load_config,
    setup_logging,
    validate_config,
)


__all__ = [
    "AdditiveF4Code",
    "AppConfig",
    "are_equivalent",
    "automorphism_order",
    "AutomorphismInfo",
    "b_map",
    "BitMatrix",
    "BitVector",
    "brute_force_classes",
    "canonical_form",
    "CanonicalForm",
    "check_extremal_profile",
    "classify_via_neighbors",
    "ClassRecord",
    "CodeKind",
    "ComputationError",
    "CongruenceLattice",
    "construct_A4",
    "construct_L_odd",
    "construct_LA",
    "construct_LB",
    "construct_LC",
    "coset_weight_distribution",
    "covering_radius",
    "design_check",
    "doubly_even_neighbors",
    "dual_code",
    "enumerate_codewords",
    "euclidean_weight",
    "extremal_bound",
    "extremal_odd_theta_family",
    "extremal_shadow_enumerator",
    "extremal_weight_enumerator",
    "f4_equivalence_certificate",
    "f4_extremal_bound",
    "find_t_decomposition",
    "first_extremal_neighbor",
    "fit_theta",
    "FormatError",
    "Frame",
    "FrameType",
    "generate",
    "GenerationRun",
    "jacobi_series",
    "JacobiKind",
    "lattice_shadow_counts",
    "LatticeConstruction",
    "LimitsConfig",
    "load_bundled",
    "load_config",
    "LoggingConfig",
    "macwilliams_transform",
    "mass_formula_total",
    "min_euclidean_weight",
    "minimum_weight",
    "parent_test",
    "parse_text",
    "QSeries",
    "read_input",
    "rref",
    "RunManifest",
    "RuntimeConfig",
    "SearchBudgetError",
    "SelfDualCode",
    "setup_logging",
    "shadow",
    "shadow_theta",
    "ShadowDecomposition",
    "short_vectors",
    "singly_even_neighbor",
    "spherical_design_moments",
    "subcode_sweep",
    "TDecomposition",
    "theta_from_code",
    "ThetaSeries",
    "trace_dual_check",
    "validate_alpha",
    "validate_config",
    "ValidationError",
    "verify_frame",
    "verify_self_dual",
    "weight_distribution",
    "write_object",
    "z4_code_from_4frame",
    "z4_dual",
    "z4_extremal_bound",
    "z4_self_dual_check",
    "Z4Code",
    "Z4Type",
]
