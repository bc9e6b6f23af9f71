"""Instance files and seeded random color systems.

Instances are UTF-8 JSON with every coordinate an exact rational string,
so load(save(x)) == x with no float anywhere:

    {"dimension": 2,
     "families": [{"label": "rows",
                   "sets": [[["0", "1/2"], ["1", "1/2"]], ...]}]}

The generators below are deterministic in the seed (splitmix64 stream)
and every scheme guarantees the colorful intersection property by
construction; the property is still asserted before anything is returned.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import IO, Union

from .errors import InputError, VerificationError
from .geometry import VPolytope, as_point
from .linprog import format_rational, rat
from .rng import SeededGenerator
from .tverberg import ColorSystem, Family, check_colorful_intersection

SCHEMES = ("axis-slabs", "shifted-boxes", "random-points-fattened")


def system_to_dict(system: ColorSystem) -> dict:
    return {
        "dimension": system.dimension,
        "families": [
            {
                "label": f.label,
                "sets": [
                    [[format_rational(c) for c in v] for v in s.vertices]
                    for s in f.sets
                ],
            }
            for f in system.families
        ],
    }


def system_from_dict(data: dict) -> ColorSystem:
    try:
        dimension = int(data["dimension"])
        families = []
        for fam in data["families"]:
            sets = tuple(
                VPolytope(tuple(as_point([rat(c) for c in v]) for v in s))
                for s in fam["sets"]
            )
            families.append(Family(label=str(fam["label"]), sets=sets))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed instance: {exc}") from exc
    return ColorSystem(dimension=dimension, families=tuple(families))


def save_instance(system: ColorSystem, target: Union[str, IO[str]]) -> None:
    payload = json.dumps(system_to_dict(system), indent=2, sort_keys=True)
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        target.write(payload + "\n")


def load_instance(source: Union[str, IO[str]]) -> ColorSystem:
    try:
        if isinstance(source, str):
            with open(source, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        else:
            data = json.load(source)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read instance: {exc}") from exc
    return system_from_dict(data)


def _box(intervals) -> VPolytope:
    corners = [()]
    for lo, hi in intervals:
        choices = (lo,) if lo == hi else (lo, hi)
        corners = [c + (v,) for c in corners for v in choices]
    return VPolytope(tuple(corners))


def _axis_slabs(d, m, k, n, rng: SeededGenerator) -> ColorSystem:
    # family i is a stack of slabs orthogonal to axis i; any choice picks
    # slabs along pairwise distinct axes, and those always intersect
    if m > d:
        raise InputError("axis-slabs needs m <= d (one axis per family)")
    extent = Fraction(5)
    families = []
    for axis in range(m):
        sets = []
        for _ in range(n):
            center = rng.fraction(-3, 3, max_den=20)
            half = rng.fraction(Fraction(1, 4), Fraction(5, 4), max_den=16)
            intervals = [
                (center - half, center + half) if ax == axis else (-extent, extent)
                for ax in range(d)
            ]
            sets.append(_box(intervals))
        families.append(Family(label=f"axis-{axis}", sets=tuple(sets)))
    return ColorSystem(dimension=d, families=tuple(families))


def _shifted_boxes(d, m, k, n, rng: SeededGenerator) -> ColorSystem:
    # every box contains one global anchor point, so all choices intersect
    anchor = tuple(rng.fraction(-1, 1, max_den=20) for _ in range(d))
    families = []
    for i in range(m):
        sets = []
        for _ in range(n):
            intervals = []
            for ax in range(d):
                below = rng.fraction(Fraction(1, 2), 2, max_den=20)
                above = rng.fraction(Fraction(1, 2), 2, max_den=20)
                intervals.append((anchor[ax] - below, anchor[ax] + above))
            sets.append(_box(intervals))
        families.append(Family(label=f"boxes-{i}", sets=tuple(sets)))
    return ColorSystem(dimension=d, families=tuple(families))


def _fattened_points(d, m, k, n, rng: SeededGenerator) -> ColorSystem:
    # a small box around a random point, coned to a shared anchor
    anchor = tuple(rng.fraction(-1, 1, max_den=20) for _ in range(d))
    families = []
    for i in range(m):
        sets = []
        for _ in range(n):
            center = [rng.fraction(-3, 3, max_den=20) for _ in range(d)]
            half = rng.fraction(Fraction(1, 8), Fraction(1, 2), max_den=16)
            box = _box([(c - half, c + half) for c in center])
            sets.append(VPolytope(box.vertices + (anchor,)))
        families.append(Family(label=f"fattened-{i}", sets=tuple(sets)))
    return ColorSystem(dimension=d, families=tuple(families))


_BUILDERS = {
    "axis-slabs": _axis_slabs,
    "shifted-boxes": _shifted_boxes,
    "random-points-fattened": _fattened_points,
}


def generate_random_colorful_system(
    d: int, m: int, k: int, n: int, seed: int, scheme: str
) -> ColorSystem:
    """Seeded instance with the colorful intersection property.

    The three schemes trade realism against structure: axis-slabs makes
    crossing grids (distinct axis per family), shifted-boxes shares one
    anchor point, random-points-fattened cones random boxes to an anchor.
    The colorful property is asserted on the result.
    """
    if scheme not in _BUILDERS:
        raise InputError(f"unknown scheme {scheme!r}; pick one of {SCHEMES}")
    if min(d, m, k, n) < 1:
        raise InputError("d, m, k, n must all be positive")
    system = _BUILDERS[scheme](d, m, k, n, SeededGenerator(seed))
    violation = check_colorful_intersection(system)
    if violation is not None:
        raise VerificationError(
            f"scheme {scheme} produced a non-colorful instance at {violation}"
        )
    return system
