"""Sarkaria's tensor trick, made exact and checkable.

A point x in R^d with block label i lifts to the (d+1) x k matrix
``append_one(x) (x) v_i`` where ``v_i = e_i - (1/k) 1``; the v_i sum to
zero and that is their only linear dependency.  The lifted matrices live
in the subspace of matrices whose rows each sum to zero, on which the
symmetric group acts by permuting columns.  A partition is Tverberg
exactly when zero is a convex combination of the lifted vertices, so an
infeasible combination comes with a Farkas vector that, after projection
back into the zero-row-sum subspace, strictly separates every lifted
vertex from the origin.  Those separators can be chosen one per orbit
and transported equivariantly, which is what powers the facet margin
report at the bottom of this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Mapping, Optional, Sequence

from .complexes import act, stirling2
from .errors import InputError, VerificationError
from .geometry import Point, as_point, hulls_common_point
from .linprog import ONE, ZERO, RationalMatrix, rank, solve_feasibility
from .tverberg import (
    ColorSystem,
    Family,
    KPartition,
    enumerate_partitions,
    find_tverberg,
)


def basis_vector(i: int, k: int) -> tuple:
    """v_i = e_i - (1/k) * all-ones, in Q^k; the v_i sum to zero."""
    if not 0 <= i < k:
        raise InputError("class index out of range")
    share = Fraction(1, k)
    return tuple(ONE - share if j == i else -share for j in range(k))


def lift(x: Point, i: int, k: int) -> RationalMatrix:
    """Tensor lift of x with class i: rows are coordinate * v_i, with a
    final row v_i itself (the appended homogenizing 1)."""
    x = as_point(x)
    v = basis_vector(i, k)
    entries = []
    for coord in tuple(x) + (ONE,):
        entries.extend(coord * c for c in v)
    return RationalMatrix(len(x) + 1, k, entries)


def pairing(a: RationalMatrix, b: RationalMatrix) -> Fraction:
    """Entrywise (Frobenius) inner product."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise InputError("pairing of mismatched shapes")
    return sum((x * y for x, y in zip(a.flatten(), b.flatten())), ZERO)


def column_action(g: Sequence[int], mat: RationalMatrix) -> RationalMatrix:
    """Send column i to position g[i]; matches act() on surjections, so
    column_action(g, lift(x, i, k)) == lift(x, g[i], k)."""
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    entries = []
    for r in range(mat.rows):
        row = mat.row(r)
        entries.extend(row[inv[c]] for c in range(mat.cols))
    return RationalMatrix(mat.rows, mat.cols, entries)


def in_lift_codomain(mat: RationalMatrix) -> bool:
    """Membership in the zero-row-sum subspace that hosts every lift."""
    return all(sum(mat.row(r), ZERO) == 0 for r in range(mat.rows))


def project_to_codomain(mat: RationalMatrix) -> RationalMatrix:
    """Orthogonal projection onto the zero-row-sum subspace: subtract each
    row's mean.  Pairings against lifted matrices are unchanged."""
    k = mat.cols
    entries = []
    for r in range(mat.rows):
        row = mat.row(r)
        mean = sum(row, ZERO) / k
        entries.extend(v - mean for v in row)
    return RationalMatrix(mat.rows, k, entries)


def _lifted_slots(family: Family, labels: Sequence[int]) -> List[tuple]:
    """(set index, vertex, lifted matrix) in (set, canonical vertex) order."""
    k = max(labels) + 1
    slots = []
    for set_index, poly in enumerate(family.sets):
        for vertex in poly.canonical().vertices:
            slots.append((set_index, vertex, lift(vertex, labels[set_index], k)))
    return slots


def zero_in_hull(family: Family, partition: KPartition):
    """Convex weights putting zero in the hull of the lifted vertex set,
    or None.  Feasibility here is equivalent to the partition being
    Tverberg; only the 'if' direction is classical, the converse is an
    exactness bonus that the tests exercise separately."""
    if partition.n != family.size:
        raise InputError("partition does not cover the family's index set")
    labels = partition.block_of()
    k = partition.k
    slots = _lifted_slots(family, labels)
    width = (family.dimension + 1) * k
    rows = [[ZERO] * len(slots) for _ in range(width + 1)]
    b = [ZERO] * width + [ONE]
    for col, (_, _, mat) in enumerate(slots):
        for pos, value in enumerate(mat.flatten()):
            rows[pos][col] = value
        rows[width][col] = ONE
    result = solve_feasibility(RationalMatrix.from_rows(rows), b)
    if not result.feasible:
        return None
    weights = tuple(
        (set_index, vertex, w)
        for (set_index, vertex, _), w in zip(slots, result.x)
    )
    _verify_zero_combination(family, labels, weights)
    return weights


def _verify_zero_combination(family: Family, labels, weights) -> None:
    k = max(labels) + 1
    total = ZERO
    acc = [ZERO] * ((family.dimension + 1) * k)
    for set_index, vertex, w in weights:
        if w < 0:
            raise VerificationError("negative weight in the zero combination")
        total += w
        for pos, value in enumerate(lift(vertex, labels[set_index], k).flatten()):
            acc[pos] += w * value
    if total != 1 or any(v != 0 for v in acc):
        raise VerificationError("the lifted combination does not hit zero")


@dataclass(frozen=True)
class SeparatorAssignment:
    """One strict separator per surjection, equivariant by construction:
    relabeling classes permutes columns."""

    n: int
    k: int
    functionals: Mapping  # value tuple -> RationalMatrix
    orbit_representatives: tuple
    margin: Fraction  # smallest pairing seen during verification

    def __getitem__(self, phi) -> RationalMatrix:
        return self.functionals[tuple(phi)]


def equivariant_separators(family: Family, k: int) -> SeparatorAssignment:
    """Build separators from the Farkas certificates of the per-partition
    zero-in-hull systems, one orbit at a time.

    Requires that no partition of the family is Tverberg (checked first).
    Each orbit representative (the restricted-growth relabeling) takes the
    projected Farkas vector; the rest of the orbit takes column-permuted
    copies.  Strict positivity against every lifted vertex is re-verified
    for every surjection before the assignment is returned.
    """
    n = family.size
    if not 1 <= k <= n:
        raise InputError("need 1 <= k <= n")
    if find_tverberg(family, k) is not None:
        raise InputError("family admits a Tverberg partition; no separators exist")

    d = family.dimension
    width = (d + 1) * k
    functionals: Dict[tuple, RationalMatrix] = {}
    reps = []
    for partition in enumerate_partitions(n, k):
        rep = partition.block_of()
        reps.append(rep)
        slots = _lifted_slots(family, rep)
        rows = [[ZERO] * len(slots) for _ in range(width + 1)]
        b = [ZERO] * width + [ONE]
        for col, (_, _, mat) in enumerate(slots):
            for pos, value in enumerate(mat.flatten()):
                rows[pos][col] = value
            rows[width][col] = ONE
        result = solve_feasibility(RationalMatrix.from_rows(rows), b)
        if result.feasible:
            raise VerificationError(
                "zero-in-hull certificate contradicts the partition search"
            )
        flat = [-v for v in result.farkas[:width]]
        functional = project_to_codomain(RationalMatrix(d + 1, k, flat))
        for g in permutations(range(k)):
            functionals[act(g, rep)] = column_action(g, functional)

    margin = _verify_separators(family, k, functionals)
    assignment = SeparatorAssignment(
        n=n,
        k=k,
        functionals=functionals,
        orbit_representatives=tuple(reps),
        margin=margin,
    )
    return assignment


def _verify_separators(family: Family, k: int, functionals) -> Fraction:
    margin: Optional[Fraction] = None
    for phi, functional in functionals.items():
        if not in_lift_codomain(functional):
            raise VerificationError("separator escaped the zero-row-sum subspace")
        for set_index, poly in enumerate(family.sets):
            for vertex in poly.canonical().vertices:
                value = pairing(functional, lift(vertex, phi[set_index], k))
                if value <= 0:
                    raise VerificationError(
                        "separator is not strictly positive on a lifted vertex"
                    )
                if margin is None or value < margin:
                    margin = value
    if margin is None:
        raise VerificationError("no separators were produced")
    return margin


def orbit_count(n: int, k: int) -> int:
    """Orbits of the relabeling action on surjections: the action is free,
    so this is the surjection count divided by k!."""
    return stirling2(n, k)


@dataclass
class FacetMarginReport:
    """Strict-positivity table for one facet of the joined complex,
    described by one injection per family."""

    injections: tuple
    colorful_points: tuple  # per class j: the common point x_j
    margins: tuple  # (family, surjection, class j, pairing value)
    min_margin: Fraction
    all_positive: bool


def facet_avoidance_margins(
    system: ColorSystem,
    injections: Sequence[Sequence[int]],
    assignments: Sequence[SeparatorAssignment],
) -> FacetMarginReport:
    """Evaluate every separator of a facet against the lifted colorful
    witness points.

    For each class j a point x_j common to the m selected sets is found by
    LP (the colorful intersection property guarantees one), and every
    facet vertex's separator must pair strictly positively with every
    lift of x_j.  All pairings are reported; positivity is what keeps the
    facet image away from the distinguished last-row subspace.
    """
    m = system.m
    if len(injections) != m or len(assignments) != m:
        raise InputError("need one injection and one assignment per family")
    k = assignments[0].k
    for rho in injections:
        if len(set(rho)) != len(rho) or len(rho) != k:
            raise InputError("facet selectors must be injective on classes")
        if any(not 0 <= i < system.n for i in rho):
            raise InputError("facet selector index out of range")

    points = []
    for j in range(k):
        parts = [
            list(system.families[i].sets[injections[i][j]].vertices)
            for i in range(m)
        ]
        solved = hulls_common_point(parts)
        if solved is None:
            raise InputError(
                "selected sets have empty intersection; colorful hypothesis fails"
            )
        points.append(solved[0])

    lifted = [lift(x, j, k) for j, x in enumerate(points)]
    margins = []
    min_margin: Optional[Fraction] = None
    all_positive = True
    for i in range(m):
        fixed = {pos: j for j, pos in enumerate(injections[i])}
        vertex_maps = _facet_vertices(system.n, k, fixed)
        for phi in vertex_maps:
            functional = assignments[i][phi]
            for j in range(k):
                value = pairing(functional, lifted[j])
                margins.append((i, phi, j, value))
                if min_margin is None or value < min_margin:
                    min_margin = value
                if value <= 0:
                    all_positive = False
    return FacetMarginReport(
        injections=tuple(tuple(r) for r in injections),
        colorful_points=tuple(points),
        margins=tuple(margins),
        min_margin=min_margin,
        all_positive=all_positive,
    )


def _facet_vertices(n: int, k: int, fixed: Mapping[int, int]) -> List[tuple]:
    """Surjections sending the pinned position of each class to it."""
    free = [i for i in range(n) if i not in fixed]
    out = []

    def rec(prefix):
        if len(prefix) == len(free):
            phi = [0] * n
            for pos, j in fixed.items():
                phi[pos] = j
            for pos, v in zip(free, prefix):
                phi[pos] = v
            out.append(tuple(phi))
            return
        for v in range(k):
            rec(prefix + [v])

    rec([])
    return sorted(out)


@dataclass(frozen=True)
class SubspaceReport:
    """Dimension audit of the lift codomain Y (zero row sums), the last-row
    subspace B, and their difference Y ∩ B-perp, against closed forms."""

    d: int
    k: int
    dim_codomain: int
    dim_last_row: int
    dim_intersection: int
    dim_intersection_by_constraints: int

    @property
    def expected(self) -> tuple:
        return ((self.d + 1) * (self.k - 1), self.k, self.d * (self.k - 1))

    @property
    def ok(self) -> bool:
        actual = (self.dim_codomain, self.dim_last_row, self.dim_intersection)
        return actual == self.expected and (
            self.dim_intersection_by_constraints == self.dim_intersection
        )


def subspace_dims(d: int, k: int) -> SubspaceReport:
    """Span-and-rank measurement of the three subspaces, with a second,
    independent computation of the intersection via constraint rank."""
    if d < 1 or k < 1:
        raise InputError("need d >= 1 and k >= 1")
    width = (d + 1) * k

    def unit(r, c):
        row = [ZERO] * width
        row[r * k + c] = ONE
        return row

    def unit_diff(r, c1, c2):
        row = [ZERO] * width
        row[r * k + c1] = ONE
        row[r * k + c2] = -ONE
        return row

    span_y = [unit_diff(r, c, k - 1) for r in range(d + 1) for c in range(k - 1)]
    span_b = [unit(d, c) for c in range(k)]
    span_meet = [unit_diff(r, c, k - 1) for r in range(d) for c in range(k - 1)]

    dim_y = rank(RationalMatrix.from_rows(span_y)) if span_y else 0
    dim_b = rank(RationalMatrix.from_rows(span_b))
    dim_meet = rank(RationalMatrix.from_rows(span_meet)) if span_meet else 0

    # independent route: ambient minus the rank of the defining constraints
    constraints = []
    for r in range(d + 1):
        row = [ZERO] * width
        for c in range(k):
            row[r * k + c] = ONE
        constraints.append(row)
    constraints.extend(unit(d, c) for c in range(k))
    by_constraints = width - rank(RationalMatrix.from_rows(constraints))

    return SubspaceReport(
        d=d,
        k=k,
        dim_codomain=dim_y,
        dim_last_row=dim_b,
        dim_intersection=dim_meet,
        dim_intersection_by_constraints=by_constraints,
    )
