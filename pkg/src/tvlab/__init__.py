"""tvlab: an exact-arithmetic workbench for Tverberg partitions of
colorful families of convex polytopes.

Everything is computed over arbitrary-precision rationals: LP feasibility
with Farkas certificates, convex hull intersections, the Sarkaria tensor
lift with equivariant separators, surjection and partial-surjection
complexes, discrete Morse matchings, and integral homology by Smith
normal form.  Every nontrivial answer carries a certificate that is
re-verified before it is returned.
"""

from .errors import InputError, SizeCapError, VerificationError
from .geometry import (
    AffineFlat,
    Point,
    VPolytope,
    affine_flat_of,
    as_point,
    flat_intersects_polytope,
    hulls_common_point,
)
from .linprog import (
    FeasibilityResult,
    Rational,
    RationalMatrix,
    format_rational,
    rank,
    rat,
    solve_feasibility,
)
from .rng import SeededGenerator
from .tverberg import (
    ColorSystem,
    Family,
    KPartition,
    TverbergWitness,
    build_extremal,
    check_colorful_intersection,
    colorful_tverberg_experiment,
    enumerate_partitions,
    extract_flat_transversal,
    find_tverberg,
    is_prime_power,
    is_tverberg,
    join_bound_check,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AffineFlat",
    "ColorSystem",
    "Family",
    "FeasibilityResult",
    "InputError",
    "KPartition",
    "Point",
    "Rational",
    "RationalMatrix",
    "SeededGenerator",
    "SizeCapError",
    "TverbergWitness",
    "VPolytope",
    "VerificationError",
    "affine_flat_of",
    "as_point",
    "build_extremal",
    "check_colorful_intersection",
    "colorful_tverberg_experiment",
    "enumerate_partitions",
    "extract_flat_transversal",
    "find_tverberg",
    "flat_intersects_polytope",
    "format_rational",
    "hulls_common_point",
    "is_prime_power",
    "is_tverberg",
    "join_bound_check",
    "rank",
    "rat",
    "solve_feasibility",
    "verify_witness",
]
