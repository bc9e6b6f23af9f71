"""Points, V-polytopes and affine flats over exact rationals.

A point is a plain tuple of Fractions.  Convex sets are V-polytopes
(finite vertex lists), so every geometric query below reduces to one
equality-form LP handed to :func:`tvlab.linprog.solve_feasibility`.
Degenerate polytopes (repeated vertices, lower-dimensional hulls) are
legal everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError, VerificationError
from .linprog import ONE, ZERO, RationalMatrix, rank, rat, solve_feasibility

Point = tuple  # tuple of Fractions


def as_point(coords) -> Point:
    return tuple(rat(c) for c in coords)


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of a nonempty vertex list, all in one ambient dimension."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(as_point(v) for v in self.vertices)
        if not verts:
            raise InputError("a V-polytope needs at least one vertex")
        d = len(verts[0])
        if any(len(v) != d for v in verts):
            raise InputError("vertices of mixed dimension")
        object.__setattr__(self, "vertices", verts)

    @property
    def dimension(self) -> int:
        """Ambient dimension (not the hull's affine dimension)."""
        return len(self.vertices[0])

    def canonical(self) -> "VPolytope":
        """Deduplicated, lexicographically sorted vertex list."""
        return VPolytope(tuple(sorted(set(self.vertices))))


@dataclass(frozen=True)
class AffineFlat:
    """base + span(directions); the directions must be independent."""

    base: Point
    directions: tuple

    def __post_init__(self):
        base = as_point(self.base)
        dirs = tuple(as_point(v) for v in self.directions)
        if any(len(v) != len(base) for v in dirs):
            raise InputError("direction dimension mismatch")
        if dirs and rank(RationalMatrix.from_rows(dirs)) != len(dirs):
            raise InputError("directions are linearly dependent")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @property
    def dim(self) -> int:
        return len(self.directions)

    @property
    def ambient(self) -> int:
        return len(self.base)

    def contains(self, point: Point) -> bool:
        diff = [rat(p) - b for p, b in zip(point, self.base)]
        if len(diff) != self.ambient:
            raise InputError("point dimension mismatch")
        if not self.directions:
            return all(v == 0 for v in diff)
        span = RationalMatrix.from_rows(list(self.directions))
        extended = RationalMatrix.from_rows(list(self.directions) + [diff])
        return rank(extended) == rank(span)


def _common_dimension(parts) -> int:
    dims = {len(p) for part in parts for p in part}
    if len(dims) != 1:
        raise InputError("points of mixed ambient dimension")
    return dims.pop()


def hulls_common_point(parts: Sequence[Sequence[Point]]):
    """Common point of conv(part) over all parts, or None.

    Returns (point, coefficients) where coefficients[j] are convex weights
    over parts[j], in the given vertex order.  The LP stacks the pairwise
    equalities of the affine combinations, then one normalization row per
    part; variables enter in (part, vertex) order, and Bland's rule makes
    the answer deterministic for a fixed input ordering.
    """
    parts = [list(map(as_point, part)) for part in parts]
    if not parts or any(not part for part in parts):
        raise InputError("every part needs at least one point")
    d = _common_dimension(parts)
    k = len(parts)
    sizes = [len(part) for part in parts]
    offsets = []
    total = 0
    for s in sizes:
        offsets.append(total)
        total += s

    rows = []
    b = []
    for j in range(1, k):
        for coord in range(d):
            row = [ZERO] * total
            for i, p in enumerate(parts[0]):
                row[offsets[0] + i] = p[coord]
            for i, p in enumerate(parts[j]):
                row[offsets[j] + i] = -p[coord]
            rows.append(row)
            b.append(ZERO)
    for j in range(k):
        row = [ZERO] * total
        for i in range(sizes[j]):
            row[offsets[j] + i] = ONE
        rows.append(row)
        b.append(ONE)

    result = solve_feasibility(RationalMatrix.from_rows(rows), b)
    if not result.feasible:
        return None

    coeffs = tuple(
        tuple(result.x[offsets[j] + i] for i in range(sizes[j])) for j in range(k)
    )
    point = tuple(
        sum((coeffs[0][i] * parts[0][i][coord] for i in range(sizes[0])), ZERO)
        for coord in range(d)
    )
    _verify_common_point(parts, point, coeffs)
    return point, coeffs


def _verify_common_point(parts, point, coeffs) -> None:
    for part, lam in zip(parts, coeffs):
        if any(c < 0 for c in lam):
            raise VerificationError("negative convex coefficient")
        if sum(lam, ZERO) != 1:
            raise VerificationError("coefficients do not sum to one")
        combo = tuple(
            sum((lam[i] * part[i][coord] for i in range(len(part))), ZERO)
            for coord in range(len(point))
        )
        if combo != point:
            raise VerificationError("combination does not reproduce the point")


def affine_flat_of(points: Sequence[Point]) -> AffineFlat:
    """Affine hull: base = first point, directions = an independent subset
    of the differences, collected in input order."""
    points = [as_point(p) for p in points]
    if not points:
        raise InputError("affine hull of no points")
    base = points[0]
    dirs = []
    r = 0
    for p in points[1:]:
        diff = tuple(a - b for a, b in zip(p, base))
        if all(v == 0 for v in diff):
            continue
        candidate = dirs + [diff]
        if rank(RationalMatrix.from_rows(candidate)) > r:
            dirs = candidate
            r += 1
    return AffineFlat(base, tuple(dirs))


def flat_intersects_polytope(flat: AffineFlat, poly: VPolytope) -> Optional[Point]:
    """A point of flat ∩ conv(poly), or None.

    Free flat parameters are split into positive and negative parts so the
    whole question is one standard-form feasibility LP.
    """
    if flat.ambient != poly.dimension:
        raise InputError("flat and polytope live in different dimensions")
    d = flat.ambient
    t = flat.dim
    nv = len(poly.vertices)
    # variables: t+ | t- | lambda
    total = 2 * t + nv
    rows = []
    b = []
    for coord in range(d):
        row = [ZERO] * total
        for l, direction in enumerate(flat.directions):
            row[l] = direction[coord]
            row[t + l] = -direction[coord]
        for i, v in enumerate(poly.vertices):
            row[2 * t + i] = -v[coord]
        rows.append(row)
        b.append(-flat.base[coord])
    row = [ZERO] * total
    for i in range(nv):
        row[2 * t + i] = ONE
    rows.append(row)
    b.append(ONE)

    result = solve_feasibility(RationalMatrix.from_rows(rows), b)
    if not result.feasible:
        return None
    lam = result.x[2 * t:]
    point = tuple(
        sum((lam[i] * poly.vertices[i][coord] for i in range(nv)), ZERO)
        for coord in range(d)
    )
    if not flat.contains(point):
        raise VerificationError("intersection point left the flat")
    return point
