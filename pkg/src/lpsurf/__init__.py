"""Laurent-phenomenon seeds, anti-symmetric quivers, and surface flip machinery."""

from .explorer import (
    ExchangeGraph,
    explore_flips,
    explore_seeds,
    export,
    graphs_isomorphic,
    verify_laurent,
)
from .lp_core import (
    InvalidSeed,
    LPSeed,
    MutationError,
    mutate,
    normalize,
    seed_from_json,
    seed_key,
    seed_to_json,
    seeds_equal,
    validate_seed,
)
from .poly import (
    ContextMismatch,
    PolyError,
    Polynomial,
    RationalFunction,
    VariableContext,
    divide_exact,
    is_irreducible,
    parse_polynomial,
    poly_gcd,
    strip_laurent_monomial,
    substitute,
)
from .quiver import (
    Quiver,
    cancel_two_cycles,
    double_mutate,
    exchange_polys,
    has_bad_path,
    lp_seed_from_quiver,
    mutate_vertex,
)
from .surface import (
    LiftedTriangulation,
    MarkedSurface,
    QuasiTriangulation,
    SurfaceError,
    adjacency_quiver,
    canonical_code,
    detect_m2,
    double_cover,
    flip,
    initial_quasi_triangulation,
    new_quasi_arc,
    rank,
    seed_from_quasi_triangulation,
    surface_from_json,
    surface_to_json,
)

__all__ = [
    "ContextMismatch",
    "ExchangeGraph",
    "InvalidSeed",
    "LPSeed",
    "LiftedTriangulation",
    "MarkedSurface",
    "MutationError",
    "PolyError",
    "Polynomial",
    "QuasiTriangulation",
    "Quiver",
    "RationalFunction",
    "SurfaceError",
    "VariableContext",
    "adjacency_quiver",
    "cancel_two_cycles",
    "canonical_code",
    "detect_m2",
    "divide_exact",
    "double_cover",
    "double_mutate",
    "exchange_polys",
    "explore_flips",
    "explore_seeds",
    "export",
    "flip",
    "graphs_isomorphic",
    "has_bad_path",
    "initial_quasi_triangulation",
    "is_irreducible",
    "lp_seed_from_quiver",
    "mutate",
    "mutate_vertex",
    "new_quasi_arc",
    "normalize",
    "parse_polynomial",
    "poly_gcd",
    "rank",
    "seed_from_json",
    "seed_from_quasi_triangulation",
    "seed_key",
    "seed_to_json",
    "seeds_equal",
    "strip_laurent_monomial",
    "substitute",
    "surface_from_json",
    "surface_to_json",
    "validate_seed",
    "verify_laurent",
]

__version__ = "0.1.0"
