"""Partition search and theorem-level checks for families of polytopes.

A family is an ordered list of V-polytopes in one ambient dimension; a
color system is m same-sized families.  A k-partition of the index set
is Tverberg when the convex hulls of the pooled blocks share a point;
the search scans unordered partitions in restricted-growth order (the
property is symmetric in the blocks, so ordered partitions would only
multiply the work by k!).

Everything returns exact witnesses that are re-verified on the spot.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, VerificationError
from .geometry import (
    AffineFlat,
    Point,
    VPolytope,
    affine_flat_of,
    as_point,
    flat_intersects_polytope,
    hulls_common_point,
)
from .linprog import ZERO, rat
from .rng import SeededGenerator


@dataclass(frozen=True)
class Family:
    """Labeled list of convex sets, all in one ambient dimension."""

    label: str
    sets: tuple

    def __post_init__(self):
        sets = tuple(
            s if isinstance(s, VPolytope) else VPolytope(tuple(s)) for s in self.sets
        )
        if not sets:
            raise InputError("a family needs at least one set")
        d = sets[0].dimension
        if any(s.dimension != d for s in sets):
            raise InputError("family mixes ambient dimensions")
        object.__setattr__(self, "sets", sets)

    @property
    def size(self) -> int:
        return len(self.sets)

    @property
    def dimension(self) -> int:
        return self.sets[0].dimension


@dataclass(frozen=True)
class ColorSystem:
    """m families of equal size n in R^d."""

    dimension: int
    families: tuple

    def __post_init__(self):
        fams = tuple(self.families)
        if not fams:
            raise InputError("a color system needs at least one family")
        n = fams[0].size
        for f in fams:
            if f.size != n:
                raise InputError("families of unequal size")
            if f.dimension != self.dimension:
                raise InputError("family dimension disagrees with the system")
        object.__setattr__(self, "families", fams)

    @property
    def m(self) -> int:
        return len(self.families)

    @property
    def n(self) -> int:
        return self.families[0].size


@dataclass(frozen=True)
class KPartition:
    """Disjoint nonempty blocks covering range(n), sorted by minimum."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((frozenset(b) for b in self.blocks), key=min))
        if not blocks or any(not b for b in blocks):
            raise InputError("blocks must be nonempty")
        seen: set = set()
        for b in blocks:
            if seen & b:
                raise InputError("blocks overlap")
            seen |= b
        if seen != set(range(len(seen))):
            raise InputError("blocks must cover an initial index range")
        object.__setattr__(self, "blocks", blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self) -> tuple:
        """Value tuple: position i holds the block index of i."""
        out = [0] * self.n
        for j, b in enumerate(self.blocks):
            for i in b:
                out[i] = j
        return tuple(out)

    def __str__(self) -> str:
        return "|".join(
            "".join(str(i + 1) for i in sorted(b)) for b in self.blocks
        )


def enumerate_partitions(n: int, k: int) -> Iterator[KPartition]:
    """Unordered partitions of range(n) into exactly k blocks, emitted in
    lexicographic order of their restricted growth strings; there are
    Stirling2(n, k) of them."""
    if k < 1:
        raise InputError("k must be at least 1")
    if k > n:
        return
    values = [0] * n

    def rec(i: int, used: int):
        if i == n:
            if used == k:
                blocks: List[list] = [[] for _ in range(k)]
                for pos, v in enumerate(values):
                    blocks[v].append(pos)
                yield KPartition(tuple(map(frozenset, blocks)))
            return
        top = min(used, k - 1)
        for v in range(top + 1):
            new_used = max(used, v + 1)
            if k - new_used <= n - i - 1:
                values[i] = v
                yield from rec(i + 1, new_used)

    yield from rec(0, 0)


@dataclass(frozen=True)
class TverbergWitness:
    """A partition plus an exact common point of the block hulls.

    Coefficients are stored per block as (set index, vertex, weight)
    triples over the deduplicated, sorted vertex lists of the block's
    polytopes, so per-set masses can be read off directly.
    """

    partition: KPartition
    point: Point
    coefficients: tuple


def verify_witness(family: Family, witness: TverbergWitness) -> None:
    """Exact re-check of a witness; raises VerificationError on any flaw."""
    if witness.partition.n != family.size:
        raise VerificationError("partition size disagrees with the family")
    for block, rows in zip(witness.partition.blocks, witness.coefficients):
        total = ZERO
        combo = [ZERO] * family.dimension
        for set_index, vertex, weight in rows:
            if set_index not in block:
                raise VerificationError("coefficient attached outside its block")
            if vertex not in family.sets[set_index].canonical().vertices:
                raise VerificationError("coefficient on a foreign vertex")
            if weight < 0:
                raise VerificationError("negative convex weight")
            total += weight
            for t, c in enumerate(vertex):
                combo[t] += weight * c
        if total != 1:
            raise VerificationError("block weights do not sum to one")
        if tuple(combo) != witness.point:
            raise VerificationError("block combination misses the witness point")


def is_tverberg(family: Family, partition: KPartition) -> Optional[TverbergWitness]:
    """Witness that the block hulls share a point, or None.

    Pooled vertices enter the LP in (block, set index, canonical vertex)
    order, which makes the returned witness deterministic.
    """
    if partition.n != family.size:
        raise InputError("partition does not cover the family's index set")
    pooled = []
    slots = []
    for block in partition.blocks:
        part = []
        rows = []
        for set_index in sorted(block):
            for vertex in family.sets[set_index].canonical().vertices:
                part.append(vertex)
                rows.append((set_index, vertex))
        pooled.append(part)
        slots.append(rows)
    solved = hulls_common_point(pooled)
    if solved is None:
        return None
    point, coeffs = solved
    coefficients = tuple(
        tuple(
            (set_index, vertex, weight)
            for (set_index, vertex), weight in zip(rows, lam)
        )
        for rows, lam in zip(slots, coeffs)
    )
    witness = TverbergWitness(partition, point, coefficients)
    verify_witness(family, witness)
    return witness


def find_tverberg(family: Family, k: int) -> Optional[TverbergWitness]:
    """First partition, in enumeration order, whose hulls intersect."""
    for partition in enumerate_partitions(family.size, k):
        witness = is_tverberg(family, partition)
        if witness is not None:
            return witness
    return None


def check_colorful_intersection(system: ColorSystem) -> Optional[tuple]:
    """None when every choice of one set per family has a common point,
    otherwise the lexicographically first violating index tuple."""
    def scan(prefix: list) -> Optional[tuple]:
        if len(prefix) == system.m:
            parts = [
                [v for v in system.families[i].sets[prefix[i]].vertices]
                for i in range(system.m)
            ]
            if hulls_common_point(parts) is None:
                return tuple(prefix)
            return None
        for idx in range(system.n):
            hit = scan(prefix + [idx])
            if hit is not None:
                return hit
        return None

    return scan([])


def is_prime_power(k: int) -> bool:
    """True for p^a with p prime and a >= 1, by trial factorization."""
    if k < 2:
        return False
    p = None
    rest = k
    for cand in range(2, k + 1):
        if cand * cand > rest:
            break
        if rest % cand == 0:
            p = cand
            while rest % cand == 0:
                rest //= cand
            break
    if p is None:
        return True  # k itself is prime
    return rest == 1


SUCCESS = "SUCCESS"
HYPOTHESIS_NOT_MET = "HYPOTHESIS_NOT_MET"
THEOREM_VIOLATION = "THEOREM_VIOLATION"
CONJECTURE_COUNTEREXAMPLE = "CONJECTURE_COUNTEREXAMPLE"


@dataclass
class ExperimentReport:
    """One run of the colorful-implies-Tverberg experiment."""

    dimension: int
    m: int
    n: int
    k: int
    colorful_ok: bool
    colorful_violation: Optional[tuple]
    size_bound: Fraction  # families must be strictly larger than this
    size_ok: bool
    prime_power_k: bool
    witnesses: tuple  # per family: TverbergWitness or None
    verdict: str = ""
    winning_family: Optional[int] = None

    def finalize(self) -> "ExperimentReport":
        hit = next((i for i, w in enumerate(self.witnesses) if w is not None), None)
        self.winning_family = hit
        if not (self.colorful_ok and self.size_ok):
            self.verdict = HYPOTHESIS_NOT_MET
        elif hit is not None:
            self.verdict = SUCCESS
        elif self.prime_power_k:
            self.verdict = THEOREM_VIOLATION
        else:
            self.verdict = CONJECTURE_COUNTEREXAMPLE
        return self


def colorful_tverberg_experiment(system: ColorSystem, k: int) -> ExperimentReport:
    """Check the hypotheses (colorful intersections, family size) and then
    search every family for a Tverberg k-partition.

    Verdicts: SUCCESS when some family has a witness under met hypotheses;
    HYPOTHESIS_NOT_MET when a hypothesis fails; THEOREM_VIOLATION when the
    hypotheses hold, k is a prime power, and no family succeeds (that can
    only be a bug and the command line turns it into a hard failure);
    CONJECTURE_COUNTEREXAMPLE instead when k is not a prime power.
    """
    violation = check_colorful_intersection(system)
    bound = (Fraction(system.dimension, system.m) + 1) * (k - 1)
    witnesses = tuple(find_tverberg(f, k) for f in system.families)
    report = ExperimentReport(
        dimension=system.dimension,
        m=system.m,
        n=system.n,
        k=k,
        colorful_ok=violation is None,
        colorful_violation=violation,
        size_bound=bound,
        size_ok=Fraction(system.n) > bound,
        prime_power_k=is_prime_power(k),
        witnesses=witnesses,
    )
    return report.finalize()


def _box_vertices(low_high: Sequence[Tuple[Fraction, Fraction]]) -> List[Point]:
    """Corners of a product of intervals; degenerate intervals collapse."""
    corners: List[tuple] = [()]
    for lo, hi in low_high:
        choices = (lo,) if lo == hi else (lo, hi)
        corners = [c + (v,) for c in corners for v in choices]
    return [as_point(c) for c in corners]


def build_extremal(
    d: int,
    m: int,
    k: int,
    base: Optional[Sequence[Point]] = None,
    seed: int = 0,
) -> ColorSystem:
    """Tight system: m families of (d/m + 1)(k - 1) boxes that satisfy the
    colorful intersection property while no family admits a Tverberg
    k-partition.

    Family i fixes the i-th block of d/m coordinates to a base point and
    spans [-M, M] elsewhere, M exceeding every base coordinate; a base
    with no Tverberg k-partition in the small space is required, verified,
    and drawn at random (then re-drawn) when not supplied.
    """
    if m < 1 or d < 1 or k < 2:
        raise InputError("need d >= 1, m >= 1, k >= 2")
    if d % m != 0:
        raise InputError("m must divide d")
    t = d // m
    n = (t + 1) * (k - 1)

    if base is not None:
        points = [as_point(p) for p in base]
        if len(points) != n or any(len(p) != t for p in points):
            raise InputError(f"base must be {n} points in dimension {t}")
        if _base_has_partition(points, k):
            raise InputError("supplied base admits a Tverberg partition")
    else:
        rng = SeededGenerator(seed)
        while True:
            points = [
                tuple(rng.fraction(-4, 4, max_den=8) for _ in range(t))
                for _ in range(n)
            ]
            if not _base_has_partition(points, k):
                break

    bound = max((abs(c) for p in points for c in p), default=ZERO)
    m_box = Fraction(1) + bound

    families = []
    for i in range(m):
        sets = []
        for p in points:
            intervals = []
            for block in range(m):
                for axis in range(t):
                    if block == i:
                        intervals.append((p[axis], p[axis]))
                    else:
                        intervals.append((-m_box, m_box))
            sets.append(VPolytope(tuple(_box_vertices(intervals))))
        families.append(Family(label=f"factor-{i}", sets=tuple(sets)))
    system = ColorSystem(dimension=d, families=tuple(families))

    if check_colorful_intersection(system) is not None:
        raise VerificationError("tight construction lost the colorful property")
    return system


def _base_has_partition(points: Sequence[Point], k: int) -> bool:
    family = Family(label="base", sets=tuple(VPolytope((p,)) for p in points))
    return find_tverberg(family, k) is not None


def extract_flat_transversal(family: Family, witness: TverbergWitness) -> AffineFlat:
    """Affine flat of dimension at most n - k meeting every set.

    Each set contributes its normalized weighted vertex combination (or
    its first canonical vertex when it carries no weight); the flat is the
    affine hull of those n points.  Dimension and the n membership LPs are
    asserted before returning.
    """
    try:
        verify_witness(family, witness)
    except VerificationError as exc:
        raise InputError(f"witness failed re-verification: {exc}") from exc

    n = family.size
    k = witness.partition.k
    anchors: List[Optional[Point]] = [None] * n
    for rows in witness.coefficients:
        masses: dict = {}
        combos: dict = {}
        for set_index, vertex, weight in rows:
            masses[set_index] = masses.get(set_index, ZERO) + weight
            acc = combos.setdefault(set_index, [ZERO] * family.dimension)
            for t, c in enumerate(vertex):
                acc[t] += weight * c
        for set_index, mass in masses.items():
            if mass > 0:
                anchors[set_index] = tuple(v / mass for v in combos[set_index])
            else:
                anchors[set_index] = family.sets[set_index].canonical().vertices[0]
    for i in range(n):
        if anchors[i] is None:  # set untouched by any block: cannot happen
            raise VerificationError("witness left a set without an anchor")

    flat = affine_flat_of(anchors)
    if flat.dim > n - k:
        raise VerificationError("transversal flat is too large")
    for poly in family.sets:
        if flat_intersects_polytope(flat, poly) is None:
            raise VerificationError("transversal flat misses a set")
    return flat


@dataclass(frozen=True)
class BoundReport:
    """Exact comparison of the family-size hypothesis against the join
    connectivity inequality; the two are equivalent integer inequalities."""

    d: int
    m: int
    k: int
    n: int
    size_lhs: Fraction
    size_rhs: Fraction
    size_holds: bool
    join_lhs: int
    join_rhs: int
    join_holds: bool

    @property
    def equivalent(self) -> bool:
        return self.size_holds == self.join_holds


def join_bound_check(d: int, m: int, k: int, n: int) -> BoundReport:
    size_lhs = Fraction(n)
    size_rhs = (Fraction(d, m) + 1) * (k - 1)
    join_lhs = m * (n - k + 1) - 2
    join_rhs = d * (k - 1) - 2
    return BoundReport(
        d=d, m=m, k=k, n=n,
        size_lhs=size_lhs,
        size_rhs=size_rhs,
        size_holds=size_lhs > size_rhs,
        join_lhs=join_lhs,
        join_rhs=join_rhs,
        join_holds=join_lhs > join_rhs,
    )
