"""Multipole decompositions of polynomials and sampled functions on quadric surfaces."""

from .algebra import (
    HomogPoly,
    Poly,
    QuadForm,
    QuadratureRule,
    divide_by_quadric,
    grade_split,
    homogenize_on_quadric,
    inner_product,
    monomial_sphere_integral,
    poly_eval,
    poly_mul,
    quad_reduce,
    surface_samples,
)
from .approx import (
    BandDecomposition,
    SeriesMultipoles,
    corollary20_stat,
    l2_project,
    multipole_series,
    parseval_gap,
)
from .conic import (
    BinaryForm,
    ConicParam,
    ProjPoint1,
    ProjPoint2,
    RootCluster,
    chordal,
    conic_param,
    line_through,
    restrict_to_conic,
    roots_projective,
)
from .deconstruct import (
    MultipoleSequence,
    RepresentationCount,
    full_decompose,
    lemma9_gap,
    reconstruct,
    representation_bound,
)
from .errors import (
    ConjugationPairingFailure,
    Degenerate,
    DegenerateTangency,
    DivisibleByQ,
    EnumerationLimit,
    InsufficientQuadrature,
    InvalidInput,
    InvalidPartition,
    MixedParity,
    NoEvaluationPoint,
    NotDefinite,
    NotDivisible,
    NotHarmonic,
    NotOnConic,
    NotReal,
    OddTotal,
    QuadpoleError,
    SolveFailure,
    StrategyMismatch,
    ZeroForm,
    ZeroVector,
)
from .harmonic import (
    HarmonicDecomp,
    apply_delta_q,
    delta_matrix,
    dirichlet_solve,
    harmonic_decompose,
    harmonic_project,
    is_harmonic,
)
from .maxwell import (
    PotentialTerm,
    directional_derivative_potential,
    maxwell_decompose,
    maxwell_poly,
)
from .planar import (
    ConicDivisor,
    PencilCenter,
    PencilDivisor,
    PencilFrame,
    divisors_close,
    fiber_enumerate,
    project_divisor,
    star_involution,
    tangent_lines_from,
    viete_inverse,
    viete_map,
)
from .sylvester import (
    GeneralizedParcelling,
    Multipole,
    MultipoleFactorization,
    all_factorizations,
    canonical_parcelling,
    count_parcellings,
    enumerate_parcellings,
    factor_on_quadric,
    in_discriminant,
    intersection_clusters,
    real_factor,
    real_factorizations,
)

__all__ = [
    "BandDecomposition",
    "BinaryForm",
    "ConicDivisor",
    "ConicParam",
    "ConjugationPairingFailure",
    "Degenerate",
    "DegenerateTangency",
    "DivisibleByQ",
    "EnumerationLimit",
    "GeneralizedParcelling",
    "HarmonicDecomp",
    "HomogPoly",
    "InsufficientQuadrature",
    "InvalidInput",
    "InvalidPartition",
    "MixedParity",
    "Multipole",
    "PotentialTerm",
    "MultipoleFactorization",
    "MultipoleSequence",
    "NoEvaluationPoint",
    "NotDefinite",
    "NotDivisible",
    "NotHarmonic",
    "NotOnConic",
    "NotReal",
    "OddTotal",
    "PencilCenter",
    "PencilDivisor",
    "PencilFrame",
    "Poly",
    "ProjPoint1",
    "ProjPoint2",
    "QuadForm",
    "QuadpoleError",
    "QuadratureRule",
    "RepresentationCount",
    "RootCluster",
    "SeriesMultipoles",
    "SolveFailure",
    "StrategyMismatch",
    "ZeroForm",
    "ZeroVector",
    "all_factorizations",
    "apply_delta_q",
    "canonical_parcelling",
    "chordal",
    "conic_param",
    "corollary20_stat",
    "count_parcellings",
    "delta_matrix",
    "directional_derivative_potential",
    "dirichlet_solve",
    "divide_by_quadric",
    "enumerate_parcellings",
    "factor_on_quadric",
    "divisors_close",
    "fiber_enumerate",
    "full_decompose",
    "grade_split",
    "harmonic_decompose",
    "harmonic_project",
    "homogenize_on_quadric",
    "in_discriminant",
    "inner_product",
    "intersection_clusters",
    "is_harmonic",
    "l2_project",
    "lemma9_gap",
    "line_through",
    "maxwell_decompose",
    "maxwell_poly",
    "monomial_sphere_integral",
    "multipole_series",
    "parseval_gap",
    "poly_eval",
    "poly_mul",
    "project_divisor",
    "quad_reduce",
    "real_factor",
    "real_factorizations",
    "reconstruct",
    "representation_bound",
    "restrict_to_conic",
    "roots_projective",
    "star_involution",
    "surface_samples",
    "tangent_lines_from",
    "viete_inverse",
    "viete_map",
]

__version__ = "0.1.0"
