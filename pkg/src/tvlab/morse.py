"""Discrete Morse theory and integral homology.

Matchings live on the Hasse diagram of a finite poset: vertex-disjoint
pairs (lower, upper) of covering cells.  A matching is acyclic when the
digraph that orients matched covers upward and all other covers downward
has no directed cycle; the unmatched cells are the critical ones, and an
acyclic matching whose critical cells all have dimension at least d
certifies (d-1)-connectivity of the underlying complex.

Two composition tools are provided: the element matching on a family of
sets (pair sigma-x with sigma+x whenever both belong to the family) and
the patchwork composition along an order-preserving map, which unions
per-fiber matchings.  :func:`collapsing_matching` combines them
recursively to collapse the partial-surjection poset onto critical cells
that are exactly the full partitions.

The homology backend is independent of all of that: integer boundary
matrices of a simplicial complex (cell posets go through their order
complex first, which is a barycentric subdivision) reduced to Smith
normal form by exact integer elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .complexes import (
    CellPoset,
    Poset,
    SimplicialComplex,
    cell_poset,
    size_cap,
)
from .errors import InputError, SizeCapError, VerificationError


# ---------------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class Matching:
    """Vertex-disjoint set of (lower, upper) Hasse pairs."""

    pairs: frozenset

    def __post_init__(self):
        seen = set()
        for lo, hi in self.pairs:
            if lo in seen or hi in seen or lo == hi:
                raise InputError("matching reuses a cell")
            seen.add(lo)
            seen.add(hi)

    @classmethod
    def of(cls, pairs) -> "Matching":
        return cls(frozenset((lo, hi) for lo, hi in pairs))

    def matched_cells(self) -> set:
        out = set()
        for lo, hi in self.pairs:
            out.add(lo)
            out.add(hi)
        return out

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class MorseReport:
    """Outcome of acyclicity verification plus the critical-cell audit."""

    acyclic: bool
    critical: tuple
    critical_dims: tuple
    euler_critical: Optional[int] = None
    euler_all: Optional[int] = None

    @property
    def balanced(self) -> bool:
        """Signed critical count must reproduce the reduced Euler
        characteristic; matched pairs cancel dimension against dimension."""
        return (
            self.euler_critical is not None
            and self.euler_critical == self.euler_all
        )

    def connectivity_bound(self) -> Optional[int]:
        """The complex is (min critical dimension - 1)-connected."""
        if not self.acyclic:
            return None
        if not self.critical_dims:
            return None  # collapsible all the way
        return min(self.critical_dims) - 1


def _dim_function(poset, dim):
    if dim is not None:
        return dim
    if isinstance(poset, CellPoset):
        return poset.dim
    sample = poset.elements[0] if poset.elements else None
    if isinstance(sample, frozenset):
        return lambda s: len(s) - 1
    return None


def verify_acyclic(poset: Poset, matching: Matching, dim=None) -> MorseReport:
    """Check a matching against a poset: covers only, vertex-disjoint, and
    no alternating directed cycle.  Critical cells are the unmatched ones.
    """
    cover_set = set(poset.covers)
    for pair in matching.pairs:
        if pair not in cover_set:
            raise InputError(f"matched pair {pair} is not a Hasse cover")

    succ: Dict = {e: [] for e in poset.elements}
    for lo, hi in poset.covers:
        if (lo, hi) in matching.pairs:
            succ[lo].append(hi)
        else:
            succ[hi].append(lo)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {e: WHITE for e in poset.elements}
    acyclic = True
    for start in poset.elements:
        if color[start] != WHITE or not acyclic:
            continue
        stack = [(start, iter(succ[start]))]
        color[start] = GRAY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GRAY:
                    acyclic = False
                    stack.clear()
                    advanced = True
                    break
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced and stack:
                color[node] = BLACK
                stack.pop()
        if not acyclic:
            break

    matched = matching.matched_cells()
    critical = tuple(e for e in poset.elements if e not in matched)
    dim_fn = _dim_function(poset, dim)
    if dim_fn is None:
        return MorseReport(acyclic, critical, ())
    critical_dims = tuple(dim_fn(e) for e in critical)
    sign = lambda d: -1 if d % 2 else 1  # noqa: E731  (dim -1 stays integral)
    euler_critical = sum(sign(d) for d in critical_dims)
    euler_all = sum(sign(dim_fn(e)) for e in poset.elements)
    return MorseReport(acyclic, critical, critical_dims, euler_critical, euler_all)


def subset_poset(family) -> Poset:
    """Inclusion order on a family of frozensets, with true Hasse covers
    (an intermediate member of the family blocks a cover)."""
    family = sorted(set(family), key=lambda s: (len(s), sorted(s)))
    covers = []
    for lo in family:
        for hi in family:
            if lo >= hi or not lo < hi:
                continue
            if any(lo < mid < hi for mid in family):
                continue
            covers.append((lo, hi))
    return Poset(tuple(family), tuple(covers))


def element_matching(family, x) -> Matching:
    """Pair sigma-x with sigma+x whenever both lie in the family.

    Acyclic by the element matching lemma; re-verified here on the subset
    poset before the matching is handed back.
    """
    family = {frozenset(s) for s in family}
    pairs = set()
    for s in family:
        if x in s:
            continue
        partner = s | {x}
        if partner in family:
            pairs.add((s, partner))
    matching = Matching.of(pairs)
    report = verify_acyclic(subset_poset(family), matching)
    if not report.acyclic:
        raise VerificationError("element matching failed its acyclicity check")
    return matching


def patchwork(
    poset: Poset,
    h: Callable,
    matchings: Mapping,
    target_leq: Callable,
) -> Matching:
    """Union per-fiber matchings along an order-preserving map h.

    h must be order-preserving on every Hasse edge (checked), each
    matching must stay inside its own fiber (checked), and the union must
    come out acyclic (checked; cyclic per-fiber input is rejected here).
    """
    for lo, hi in poset.covers:
        if not target_leq(h(lo), h(hi)):
            raise InputError("map is not order-preserving on a Hasse edge")
    pairs = set()
    for q, m in matchings.items():
        for lo, hi in m.pairs:
            if h(lo) != q or h(hi) != q:
                raise InputError("matching escapes its fiber")
        pairs.update(m.pairs)
    union = Matching.of(pairs)
    report = verify_acyclic(poset, union)
    if not report.acyclic:
        raise InputError("patchwork union is cyclic; a per-fiber matching was bad")
    return union


# ---------------------------------------------------------------------------
# the recursive collapsing matching on partial surjections


def _subset_cell(subset, n, value=0):
    cell = [None] * n
    for pos in subset:
        cell[pos] = value
    return tuple(cell)


def _map_matching(matching: Matching, f) -> Matching:
    return Matching.of((f(lo), f(hi)) for lo, hi in matching.pairs)


_EXT_LEQ = lambda a, b: all(x is None or x == y for x, y in zip(a, b))  # noqa: E731


def _pinned_class_matching(sub: Poset, n: int, k: int, i: int) -> Matching:
    """Matching on the cells whose class i contains the last position.

    Fibers of 'forget class i' are power sets of the untouched positions;
    each gets an element matching at its largest free position.  A fiber
    with no free position is a single full-support cell, left critical.
    """
    last = n - 1

    def key(cell):
        return tuple(v if (v is not None and v != i) else None for v in cell[:last])

    fibers: Dict[tuple, list] = {}
    for cell in sub.elements:
        fibers.setdefault(key(cell), []).append(cell)

    matchings = {}
    for ky, cells in fibers.items():
        free = [p for p in range(last) if ky[p] is None]
        if not free:
            matchings[ky] = Matching.of(())
            continue
        x = max(free)
        family = [
            frozenset(p for p in range(last) if c[p] == i) for c in cells
        ]

        def rebuild(subset, ky=ky):
            cell = [ky[p] if ky[p] is not None else (i if p in subset else None)
                    for p in range(last)]
            cell.append(i)
            return tuple(cell)

        matchings[ky] = _map_matching(element_matching(family, x), rebuild)
    return patchwork(sub, key, matchings, target_leq=_EXT_LEQ)


def _trailing_class_matching(rest: Poset, n: int, k: int) -> Matching:
    """Matching on the cells that keep the last position out of the first
    k-1 classes.  Cells whose last class is exactly {last position}, plus
    the empty cell, copy the collapsing matching one size down; everything
    else is paired by toggling the last position inside the last class."""
    last = n - 1
    cls = k - 1
    empty = tuple([None] * n)

    def h2(cell):
        support = tuple(p for p, v in enumerate(cell) if v == cls)
        return "a" if (support == (last,) or cell == empty) else "b"

    def h2_leq(x, y):
        return x == y or (x == "a" and y == "b")

    def embed(local):
        if all(v is None for v in local):
            return empty
        return tuple(local) + (cls,)

    recursed = _map_matching(_collapse(n - 1, k - 1), embed)

    b_cells = [c for c in rest.elements if h2(c) == "b"]
    bsub = rest.restrict(b_cells)

    def keyb(cell):
        return tuple(v if (v is not None and v != cls) else None for v in cell[:last])

    fibers: Dict[tuple, list] = {}
    for cell in b_cells:
        fibers.setdefault(keyb(cell), []).append(cell)
    b_matchings = {}
    for ky, cells in fibers.items():
        family = [frozenset(p for p, v in enumerate(c) if v == cls) for c in cells]

        def rebuild(subset, ky=ky):
            cell = list(ky) + [None]
            for p in subset:
                cell[p] = cls
            return tuple(cell)

        b_matchings[ky] = _map_matching(element_matching(family, last), rebuild)
    b_matching = patchwork(bsub, keyb, b_matchings, target_leq=_EXT_LEQ)

    return patchwork(rest, h2, {"a": recursed, "b": b_matching}, target_leq=h2_leq)


def _collapse(n: int, k: int) -> Matching:
    poset = cell_poset(n, k) if k > 0 else None
    last = n - 1
    if k == 1:
        family = [
            frozenset(p for p, v in enumerate(c) if v is not None)
            for c in poset.elements
        ]
        return _map_matching(
            element_matching(family, last), lambda s: _subset_cell(s, n)
        )

    sentinel = "rest"

    def h1(cell):
        v = cell[last]
        return v if (v is not None and v < k - 1) else sentinel

    def h1_leq(a, b):
        return a == b or a == sentinel

    matchings = {}
    for i in range(k - 1):
        sub = poset.restrict([c for c in poset.elements if h1(c) == i])
        matchings[i] = _pinned_class_matching(sub, n, k, i)
    rest = poset.restrict([c for c in poset.elements if h1(c) == sentinel])
    matchings[sentinel] = _trailing_class_matching(rest, n, k)
    return patchwork(poset, h1, matchings, target_leq=h1_leq)


def collapsing_matching(n: int, k: int) -> Tuple[Matching, MorseReport]:
    """Acyclic matching on the whole partial-surjection poset whose
    critical cells are exactly full partitions (dimension n - k).

    For k = 1 the matching is complete.  The report re-verifies
    acyclicity, critical dimensions, and the signed Euler audit.
    """
    if not (n > k >= 1):
        raise InputError("collapsing matching needs n > k >= 1")
    poset = cell_poset(n, k)
    matching = _collapse(n, k)
    report = verify_acyclic(poset, matching)
    if not report.acyclic:
        raise VerificationError("collapsing matching is not acyclic")
    if any(d != n - k for d in report.critical_dims):
        raise VerificationError("a critical cell has the wrong dimension")
    if not report.balanced:
        raise VerificationError("signed critical count disagrees with the census")
    return matching, report


# ---------------------------------------------------------------------------
# order complexes


def order_complex(poset: Poset, exclude=()) -> SimplicialComplex:
    """Simplicial complex of chains, excluding the given elements (for a
    cell poset, pass the empty cell to get the barycentric subdivision)."""
    excluded = set(exclude)
    keep = [e for e in poset.elements if e not in excluded]
    keep_index = {e: i for i, e in enumerate(keep)}

    raw_up: Dict = {e: set() for e in poset.elements}
    for lo, hi in poset.covers:
        raw_up[lo].add(hi)
    above: Dict = {}

    def reach(e):
        if e in above:
            return above[e]
        acc = set()
        for nxt in raw_up[e]:
            acc.add(nxt)
            acc |= reach(nxt)
        above[e] = acc
        return acc

    for e in poset.elements:
        reach(e)

    budget = 2000 * size_cap()
    chains: List[tuple] = []

    def grow(chain, top):
        if len(chains) > budget:
            raise SizeCapError("order complex exceeds the chain budget")
        chains.append(tuple(chain))
        for nxt in above[top]:
            if nxt in keep_index:
                chain.append(keep_index[nxt])
                grow(chain, nxt)
                chain.pop()

    for e in keep:
        grow([keep_index[e]], e)

    return SimplicialComplex.from_faces(keep, [tuple(sorted(c)) for c in chains])


# ---------------------------------------------------------------------------
# integral homology via Smith normal form


@dataclass
class ChainComplex:
    """Integer boundary maps, one per positive dimension; boundaries[t]
    sends dimension t to t-1 and is stored column-sparse."""

    sizes: tuple
    boundaries: tuple  # boundaries[t]: {col: {row: coeff}}

    def validate(self) -> None:
        for t in range(2, len(self.sizes)):
            lower = self.boundaries[t - 1]
            for col, entries in self.boundaries[t].items():
                acc: Dict[int, int] = {}
                for mid, c1 in entries.items():
                    for row, c2 in lower.get(mid, {}).items():
                        acc[row] = acc.get(row, 0) + c1 * c2
                if any(v != 0 for v in acc.values()):
                    raise VerificationError("boundary of boundary is nonzero")


def chain_complex(sc: SimplicialComplex) -> ChainComplex:
    indexes = [
        {face: i for i, face in enumerate(faces)} for faces in sc.faces_by_dim
    ]
    boundaries: List[Dict[int, Dict[int, int]]] = []
    for t, faces in enumerate(sc.faces_by_dim):
        cols: Dict[int, Dict[int, int]] = {}
        if t > 0:
            lower = indexes[t - 1]
            for ci, face in enumerate(faces):
                col = {}
                for drop in range(len(face)):
                    sub = face[:drop] + face[drop + 1:]
                    col[lower[sub]] = 1 if drop % 2 == 0 else -1
                cols[ci] = col
        boundaries.append(cols)
    return ChainComplex(sc.face_counts(), tuple(boundaries))


def smith_invariants(columns: Mapping[int, Mapping[int, int]]):
    """Rank and invariant factors of a sparse integer matrix.

    Exact integer elimination; pivots are chosen in the sparsest column,
    smallest magnitude first, which keeps coefficient growth harmless at
    this scale.  The diagonal is then normalized into a divisibility
    chain by gcd/lcm exchanges.
    """
    cols: Dict[int, Dict[int, int]] = {
        c: {r: v for r, v in entries.items() if v != 0}
        for c, entries in columns.items()
    }
    cols = {c: e for c, e in cols.items() if e}
    rows: Dict[int, Dict[int, int]] = {}
    for c, entries in cols.items():
        for r, v in entries.items():
            rows.setdefault(r, {})[c] = v

    def set_entry(r, c, v):
        if v == 0:
            rows.get(r, {}).pop(c, None)
            cols.get(c, {}).pop(r, None)
            if r in rows and not rows[r]:
                del rows[r]
            if c in cols and not cols[c]:
                del cols[c]
        else:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v

    def add_row(dst, src, mult):
        # row_dst += mult * row_src
        for c, v in list(rows.get(src, {}).items()):
            set_entry(dst, c, rows.get(dst, {}).get(c, 0) + mult * v)

    def add_col(dst, src, mult):
        for r, v in list(cols.get(src, {}).items()):
            set_entry(r, dst, cols.get(r, {}).get(dst, 0) + mult * v)

    diagonal: List[int] = []
    while cols:
        c = min(cols, key=lambda cc: (len(cols[cc]), cc))
        r = min(cols[c], key=lambda rr: (abs(cols[c][rr]), len(rows[rr]), rr))

        # euclidean phase: shrink the pivot until it divides its row+col
        while True:
            piv = cols[c][r]
            off = next(
                (r2 for r2, v in cols[c].items() if r2 != r and v % piv != 0),
                None,
            )
            if off is not None:
                q = cols[c][off] // piv
                add_row(off, r, -q)
                r = off
                continue
            offc = next(
                (c2 for c2, v in rows[r].items() if c2 != c and v % piv != 0),
                None,
            )
            if offc is not None:
                q = rows[r][offc] // piv
                add_col(offc, c, -q)
                c = offc
                continue
            break

        piv = cols[c][r]
        for r2 in [x for x in cols[c] if x != r]:
            add_row(r2, r, -(cols[c][r2] // piv))
        for c2 in [x for x in rows[r] if x != c]:
            add_col(c2, c, -(rows[r][c2] // piv))
        diagonal.append(abs(piv))
        for c2 in list(rows.get(r, {})):
            set_entry(r, c2, 0)
        for r2 in list(cols.get(c, {})):
            set_entry(r2, c, 0)

    # normalize into a divisibility chain
    factors = sorted(diagonal)
    changed = True
    while changed:
        changed = False
        for i in range(len(factors)):
            for j in range(i + 1, len(factors)):
                a, b = factors[i], factors[j]
                if b % a != 0:
                    g = gcd(a, b)
                    factors[i], factors[j] = g, a * b // g
                    changed = True
        if changed:
            factors.sort()
    return len(diagonal), factors


@dataclass
class HomologyResult:
    betti: tuple
    torsion: tuple  # torsion[t] = invariant factors > 1 of H_t
    face_counts: tuple

    @property
    def reduced_betti(self) -> tuple:
        if not self.betti:
            return ()
        return (self.betti[0] - 1,) + self.betti[1:]


def homology(space, max_dim: Optional[int] = None) -> HomologyResult:
    """Integral homology of a simplicial complex or a cell poset.

    Cell posets are subdivided through their order complex (minus the
    empty cell) first.  When max_dim is given, Betti numbers and torsion
    are computed only through that dimension, which needs faces up to one
    dimension higher; feeding a complex truncated any lower is on the
    caller.
    """
    if isinstance(space, CellPoset):
        empty = tuple([None] * space.n)
        space = order_complex(space, exclude=[empty])
    elif isinstance(space, Poset):
        space = order_complex(space)
    if not isinstance(space, SimplicialComplex):
        raise InputError("homology expects a simplicial complex or a poset")

    cc = chain_complex(space)
    cc.validate()
    top = len(cc.sizes) - 1
    upto = top if max_dim is None else min(max_dim, top)

    ranks: Dict[int, int] = {}
    factors: Dict[int, list] = {}
    for t in range(1, min(upto + 1, top) + 1):
        ranks[t], factors[t] = smith_invariants(cc.boundaries[t])

    betti = []
    torsion = []
    for t in range(upto + 1):
        r_t = ranks.get(t, 0)
        r_up = ranks.get(t + 1, 0)
        betti.append(cc.sizes[t] - r_t - r_up)
        torsion.append(tuple(f for f in factors.get(t + 1, []) if f > 1))
    return HomologyResult(tuple(betti), tuple(torsion), cc.sizes)
