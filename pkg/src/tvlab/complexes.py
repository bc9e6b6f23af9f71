"""Combinatorial complexes built from surjections [n] -> [k].

Two closely related objects live here, both over 0-based index sets:

* the *surjection complex* on n and k: a simplicial complex whose
  vertices are the surjective maps ``phi: {0..n-1} -> {0..k-1}`` (stored
  as value tuples) and whose faces are the sets of surjections that admit
  a common system of representatives, one per class;

* the *partial-surjection poset*: cells are partial maps whose defined
  part is surjective, ordered by extension, together with one empty cell
  at the bottom.  A cell with s defined positions has dimension s - k,
  and the empty cell has dimension -1.

The symmetric group on the k class labels acts on both by relabeling:
``act(g, phi) = g o phi``.  The action is free on surjections.

Display helpers print classes 1-based in the usual ``"12|3"`` block
notation; all programmatic indices stay 0-based.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InputError, SizeCapError

DEFAULT_SIZE_CAP = 60


def size_cap() -> int:
    """Vertex cap for full face enumeration; override with TVLAB_SIZE_CAP."""
    raw = os.environ.get("TVLAB_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"TVLAB_SIZE_CAP must be an integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# surjections and the relabeling action


def stirling2(n: int, k: int) -> int:
    """Partitions of an n-set into k unlabeled nonempty blocks."""
    if k < 0 or k > n:
        return 0
    if n == 0:
        return 1
    return sum(
        (-1) ** j * comb(k, j) * (k - j) ** n for j in range(k + 1)
    ) // factorial(k)


def surjection_count(n: int, k: int) -> int:
    return factorial(k) * stirling2(n, k)


def surjections(n: int, k: int) -> List[tuple]:
    """All surjective value tuples of length n over {0..k-1}, lex order."""
    if k < 1:
        raise InputError("k must be at least 1")
    if n < k:
        return []
    out = []
    values = list(range(k))

    def rec(prefix, missing, slots):
        if slots == 0:
            if missing == 0:
                out.append(tuple(prefix))
            return
        for v in values:
            new_missing = missing - (1 if prefix.count(v) == 0 else 0)
            if new_missing <= slots - 1:
                prefix.append(v)
                rec(prefix, new_missing, slots - 1)
                prefix.pop()

    rec([], k, n)
    return out


def act(g: Sequence[int], phi: Sequence[int]) -> tuple:
    """Relabel classes of phi by g (composition g o phi).

    With the companion column action on matrices this makes all
    equivariance identities exact: act(g, act(h, phi)) = act(g o h, phi).
    """
    return tuple(g[v] for v in phi)


def orbit_representative(phi: Sequence[int]) -> Tuple[tuple, tuple]:
    """Lexicographically smallest relabeling of phi and the permutation g
    with act(g, rep) == phi.

    The representative renames classes in order of first appearance, so it
    is a restricted growth string.
    """
    k = max(phi) + 1
    rename: Dict[int, int] = {}
    for v in phi:
        if v not in rename:
            rename[v] = len(rename)
    if len(rename) != k:
        raise InputError("not a surjection onto its classes")
    rep = tuple(rename[v] for v in phi)
    g = [0] * k
    for old, new in rename.items():
        g[new] = old
    return rep, tuple(g)


# ---------------------------------------------------------------------------
# faces and facets of the surjection complex


def face_check(sigma: Iterable[Sequence[int]], k: int):
    """The tuple of classwise preimage intersections, or None.

    A set of surjections spans a face exactly when every class still has a
    common representative.
    """
    sigma = [tuple(phi) for phi in sigma]
    if not sigma:
        raise InputError("empty vertex set")
    n = len(sigma[0])
    if any(len(phi) != n for phi in sigma):
        raise InputError("surjections of mixed length")
    classes = []
    for j in range(k):
        common = set(range(n))
        for phi in sigma:
            common &= {i for i, v in enumerate(phi) if v == j}
            if not common:
                return None
        classes.append(frozenset(common))
    return tuple(classes)


def injections(n: int, k: int) -> List[tuple]:
    """Injective tuples rho with rho[j] the representative of class j."""
    return list(permutations(range(n), k))


def facets(n: int, k: int) -> List[Tuple[tuple, tuple]]:
    """(rho, vertex tuple) for every facet.

    The facet of rho consists of the k^(n-k) surjections that map rho[j]
    to j for all j; there are n!/(n-k)! of them.
    """
    if n <= k:
        raise InputError("facets need n > k")
    out = []
    for rho in injections(n, k):
        fixed = {pos: j for j, pos in enumerate(rho)}
        free = [i for i in range(n) if i not in fixed]
        verts = []
        for assignment in product(range(k), repeat=len(free)):
            phi = [0] * n
            for pos, j in fixed.items():
                phi[pos] = j
            for pos, v in zip(free, assignment):
                phi[pos] = v
            verts.append(tuple(phi))
        out.append((rho, tuple(sorted(verts))))
    return out


@dataclass(frozen=True)
class SimplicialComplex:
    """Faces listed per dimension as sorted tuples of vertex indices."""

    vertex_labels: tuple
    faces_by_dim: tuple  # faces_by_dim[t] = sorted tuple of (t+1)-tuples

    @classmethod
    def from_faces(cls, vertex_labels, faces) -> "SimplicialComplex":
        by_dim: Dict[int, set] = {}
        for f in faces:
            f = tuple(sorted(f))
            by_dim.setdefault(len(f) - 1, set()).add(f)
        top = max(by_dim) if by_dim else -1
        return cls(
            tuple(vertex_labels),
            tuple(tuple(sorted(by_dim.get(t, ()))) for t in range(top + 1)),
        )

    @classmethod
    def from_maximal(cls, maximal_faces) -> "SimplicialComplex":
        """Close a list of maximal faces (given by vertex labels) downward."""
        labels = sorted({v for f in maximal_faces for v in f})
        index = {v: i for i, v in enumerate(labels)}
        faces = set()
        for f in maximal_faces:
            idx = sorted(index[v] for v in f)
            for t in range(1, len(idx) + 1):
                faces.update(combinations(idx, t))
        return cls.from_faces(labels, faces)

    @property
    def dimension(self) -> int:
        return len(self.faces_by_dim) - 1

    def face_counts(self) -> tuple:
        return tuple(len(fs) for fs in self.faces_by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** t * len(fs) for t, fs in enumerate(self.faces_by_dim))


def surjection_complex(n: int, k: int, max_dim: Optional[int] = None) -> SimplicialComplex:
    """The surjection complex, fully or truncated at max_dim.

    Every subset of a facet is a face and every face extends to a facet,
    so faces are enumerated as subsets of facet vertex sets.  Full
    enumeration is refused above the size cap; truncated enumeration gets
    ten times the slack since it is polynomial in the face bound.
    """
    verts = surjections(n, k)
    cap = size_cap()
    if max_dim is None and len(verts) > cap:
        raise SizeCapError(
            f"{len(verts)} vertices exceed the cap {cap} for full enumeration"
        )
    if max_dim is not None and len(verts) > 10 * cap:
        raise SizeCapError(
            f"{len(verts)} vertices exceed the cap {10 * cap} for truncated enumeration"
        )
    index = {phi: i for i, phi in enumerate(verts)}
    faces = set()
    for _, fverts in facets(n, k):
        idx = sorted(index[phi] for phi in fverts)
        top = len(idx) if max_dim is None else min(len(idx), max_dim + 1)
        for t in range(1, top + 1):
            faces.update(combinations(idx, t))
    return SimplicialComplex.from_faces(verts, faces)


# ---------------------------------------------------------------------------
# the partial-surjection cell poset


Cell = tuple  # length n over {0..k-1} plus None for undefined positions


def _sort_key(cell: Cell):
    return tuple(-1 if v is None else v for v in cell)


def cell_dimension(cell: Cell, k: int) -> int:
    defined = sum(1 for v in cell if v is not None)
    return defined - k if defined else -1


def format_cell(cell: Cell) -> str:
    """1-based block notation, e.g. (1,1,0) -> '3|12'; empty cell -> 'empty'."""
    if all(v is None for v in cell):
        return "empty"
    k = max(v for v in cell if v is not None) + 1
    blocks = []
    for j in range(k):
        blocks.append("".join(str(i + 1) for i, v in enumerate(cell) if v == j))
    return "|".join(blocks)


@dataclass(frozen=True)
class Poset:
    """Finite poset given by its elements and Hasse covers."""

    elements: tuple
    covers: tuple  # (lower, upper) pairs

    def __post_init__(self):
        elems = set(self.elements)
        for lo, hi in self.covers:
            if lo not in elems or hi not in elems:
                raise InputError("cover endpoint outside the poset")

    def upper_adjacency(self) -> Dict:
        up: Dict = {e: [] for e in self.elements}
        for lo, hi in self.covers:
            up[lo].append(hi)
        return up

    def restrict(self, keep) -> "Poset":
        """Induced subposet.  Correct only for order-convex subsets, which
        covers every fiber of an order-preserving map."""
        keep = set(keep)
        return Poset(
            tuple(e for e in self.elements if e in keep),
            tuple((lo, hi) for lo, hi in self.covers if lo in keep and hi in keep),
        )


@dataclass(frozen=True)
class CellPoset(Poset):
    """Partial-surjection poset for given n and k, empty cell included."""

    n: int = 0
    k: int = 0

    def dim(self, cell: Cell) -> int:
        return cell_dimension(cell, self.k)

    def census(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for cell in self.elements:
            d = self.dim(cell)
            counts[d] = counts.get(d, 0) + 1
        return counts

    def reduced_euler(self) -> int:
        return sum(-1 if self.dim(cell) % 2 else 1 for cell in self.elements)


def partial_surjections(n: int, k: int) -> List[Cell]:
    """All nonempty cells: partial maps with surjective defined part."""
    out = []
    for dom_size in range(k, n + 1):
        for dom in combinations(range(n), dom_size):
            for values in surjections(dom_size, k):
                cell = [None] * n
                for pos, v in zip(dom, values):
                    cell[pos] = v
                out.append(tuple(cell))
    return out


def cell_poset(n: int, k: int) -> CellPoset:
    """Build the poset with Hasse covers by single-position extension plus
    the bottom edges from the empty cell to every 0-cell."""
    if not (n > k >= 1):
        raise InputError("cell poset needs n > k >= 1")
    empty = tuple([None] * n)
    cells = [empty] + sorted(partial_surjections(n, k), key=_sort_key)
    cellset = set(cells)
    covers = []
    for cell in cells:
        if cell is empty:
            continue
        defined = [i for i, v in enumerate(cell) if v is not None]
        if len(defined) == k:
            covers.append((empty, cell))
        for pos in defined:
            below = list(cell)
            below[pos] = None
            below = tuple(below)
            if below in cellset:
                covers.append((below, cell))
    return CellPoset(tuple(cells), tuple(covers), n=n, k=k)


def expected_cell_census(n: int, k: int) -> Dict[int, int]:
    """Independent census: C(n, s) * surj(s, k) cells of dimension s - k."""
    counts = {-1: 1}
    for s in range(k, n + 1):
        counts[s - k] = comb(n, s) * surjection_count(s, k)
    return counts


# ---------------------------------------------------------------------------
# the face-to-cell map and its fibers


def face_cell(sigma: Iterable[Sequence[int]], k: int) -> Optional[Cell]:
    """The cell recording the common refinement of a face: position i is
    mapped to j when every member of sigma does so."""
    classes = face_check(sigma, k)
    if classes is None:
        return None
    sigma = list(sigma)
    n = len(next(iter(sigma)))
    cell = [None] * n
    for j, cls in enumerate(classes):
        for i in cls:
            cell[i] = j
    return tuple(cell)


def extensions(cell: Cell, k: int) -> List[tuple]:
    """All total surjections extending a nonempty cell."""
    free = [i for i, v in enumerate(cell) if v is None]
    out = []
    for assignment in product(range(k), repeat=len(free)):
        phi = list(cell)
        for pos, v in zip(free, assignment):
            phi[pos] = v
        out.append(tuple(phi))
    return sorted(out)


@dataclass
class QuillenReport:
    """Exhaustive audit of the face-to-cell map at one (n, k)."""

    n: int
    k: int
    face_count: int
    cell_count: int
    order_reversing: bool = True
    fibers_are_simplices: bool = True
    monotonicity_violations: list = field(default_factory=list)
    fiber_violations: list = field(default_factory=list)
    setwise_fixed_faces: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.order_reversing and self.fibers_are_simplices


def _cell_extends(bigger: Cell, smaller: Cell) -> bool:
    return all(s is None or s == b for s, b in zip(smaller, bigger))


def quillen_fiber_report(n: int, k: int) -> QuillenReport:
    """Check that the face-to-cell map is order-reversing and that the
    preimage of every principal up-set is a full simplex.

    Also scans for faces fixed setwise by a nontrivial relabeling; they
    are reported, nothing depends on their absence.
    """
    complex_ = surjection_complex(n, k)
    verts = complex_.vertex_labels
    faces = [f for dim_faces in complex_.faces_by_dim for f in dim_faces]
    face_set = set(faces)
    cell_of = {f: face_cell([verts[i] for i in f], k) for f in faces}

    poset = cell_poset(n, k)
    report = QuillenReport(n, k, len(faces), len(poset.elements))

    for f in faces:
        if len(f) == 1:
            continue
        for drop in range(len(f)):
            sub = f[:drop] + f[drop + 1:]
            if not _cell_extends(cell_of[sub], cell_of[f]):
                report.order_reversing = False
                report.monotonicity_violations.append((sub, f))

    for cell in poset.elements:
        if all(v is None for v in cell):
            continue
        ext = extensions(cell, k)
        ext_idx = sorted(verts.index(phi) for phi in ext)
        fiber = {f for f in faces if _cell_extends(cell_of[f], cell)}
        expected = set()
        for t in range(1, len(ext_idx) + 1):
            expected.update(combinations(ext_idx, t))
        if fiber != expected or not expected <= face_set:
            report.fibers_are_simplices = False
            report.fiber_violations.append(cell)

    identity = tuple(range(k))
    for g in permutations(range(k)):
        if g == identity:
            continue
        for f in faces:
            image = tuple(sorted(verts.index(act(g, verts[i])) for i in f))
            if image == f:
                report.setwise_fixed_faces.append((g, f))
    return report
