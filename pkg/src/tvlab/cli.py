"""Command-line entry point.

Reports are JSON on stdout; exact rationals are printed as strings.
Exit codes: 0 for success or a verified negative answer, 1 for input
errors, 2 for a THEOREM_VIOLATION verdict or a failed internal
verification (both of which mean a bug, not bad input).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import complexes, instances, morse, sarkaria, tverberg
from .errors import InputError, VerificationError
from .geometry import AffineFlat
from .linprog import RationalMatrix, format_rational, rat
from .tverberg import THEOREM_VIOLATION, KPartition, TverbergWitness


def _point_json(point) -> list:
    return [format_rational(c) for c in point]


def _matrix_json(mat: RationalMatrix) -> list:
    return [[format_rational(v) for v in mat.row(r)] for r in range(mat.rows)]


def _witness_json(witness: Optional[TverbergWitness]):
    if witness is None:
        return None
    return {
        "partition": [sorted(b) for b in witness.partition.blocks],
        "point": _point_json(witness.point),
        "coefficients": [
            [
                {"set": s, "vertex": _point_json(v), "weight": format_rational(w)}
                for s, v, w in rows
            ]
            for rows in witness.coefficients
        ],
    }


def _flat_json(flat: AffineFlat) -> dict:
    return {
        "base": _point_json(flat.base),
        "directions": [_point_json(v) for v in flat.directions],
        "dim": flat.dim,
    }


def _experiment_json(report) -> dict:
    return {
        "dimension": report.dimension,
        "m": report.m,
        "n": report.n,
        "k": report.k,
        "colorful": {
            "ok": report.colorful_ok,
            "violation": list(report.colorful_violation)
            if report.colorful_violation
            else None,
        },
        "size": {
            "ok": report.size_ok,
            "n": report.n,
            "bound": format_rational(report.size_bound),
        },
        "prime_power_k": report.prime_power_k,
        "families": [_witness_json(w) for w in report.witnesses],
        "winning_family": report.winning_family,
        "verdict": report.verdict,
    }


def _parse_point(text: str):
    try:
        return tuple(rat(part.strip()) for part in text.split(","))
    except (ValueError, InputError) as exc:
        raise InputError(f"cannot parse point {text!r}: {exc}") from exc


def _parse_blocks(text: str) -> KPartition:
    try:
        blocks = [
            frozenset(int(v) for v in chunk.split(","))
            for chunk in text.split("|")
        ]
    except ValueError as exc:
        raise InputError(f"cannot parse blocks {text!r}: {exc}") from exc
    return KPartition(tuple(blocks))


def _parse_injections(text: str) -> List[tuple]:
    out = []
    for chunk in text.split(";"):
        try:
            out.append(tuple(int(v) for v in chunk.split(",")))
        except ValueError as exc:
            raise InputError(f"cannot parse injections {text!r}: {exc}") from exc
    return out


def _family(system, index: int):
    if not 0 <= index < system.m:
        raise InputError(f"family index {index} out of range")
    return system.families[index]


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_tverberg_search(args) -> int:
    system = instances.load_instance(args.file)
    family = _family(system, args.family)
    witness = tverberg.find_tverberg(family, args.k)
    _emit({"command": "tverberg search", "witness": _witness_json(witness)})
    return 0


def _cmd_tverberg_check(args) -> int:
    system = instances.load_instance(args.file)
    family = _family(system, args.family)
    witness = tverberg.is_tverberg(family, _parse_blocks(args.blocks))
    _emit({"command": "tverberg check", "witness": _witness_json(witness)})
    return 0


def _cmd_colorful_check(args) -> int:
    system = instances.load_instance(args.file)
    violation = tverberg.check_colorful_intersection(system)
    _emit(
        {
            "command": "colorful check",
            "colorful": violation is None,
            "violation": list(violation) if violation else None,
        }
    )
    return 0


def _run_trials(args, label: str) -> int:
    verdicts = []
    reports = []
    for trial in range(args.trials):
        system = instances.generate_random_colorful_system(
            args.d, args.m, args.k, args.n, args.seed + trial, args.scheme
        )
        report = tverberg.colorful_tverberg_experiment(system, args.k)
        verdicts.append(report.verdict)
        reports.append(
            {
                "trial": trial,
                "seed": args.seed + trial,
                "verdict": report.verdict,
                "winning_family": report.winning_family,
            }
        )
    summary = {v: verdicts.count(v) for v in sorted(set(verdicts))}
    _emit(
        {
            "command": f"experiment {label}",
            "scheme": args.scheme,
            "trials": reports,
            "summary": summary,
        }
    )
    return 2 if THEOREM_VIOLATION in summary else 0


def _cmd_experiment_theorem1(args) -> int:
    return _run_trials(args, "theorem1")


def _cmd_experiment_conjecture(args) -> int:
    # same harness; meant for non-prime-power k, where a miss is recorded
    # as CONJECTURE_COUNTEREXAMPLE rather than failed
    return _run_trials(args, "conjecture")


def _cmd_construct_extremal(args) -> int:
    system = tverberg.build_extremal(args.d, args.m, args.k, seed=args.seed)
    if args.out:
        instances.save_instance(system, args.out)
    _emit(
        {
            "command": "construct extremal",
            "dimension": system.dimension,
            "m": system.m,
            "n": system.n,
            "written": args.out,
            "instance": instances.system_to_dict(system),
        }
    )
    return 0


def _cmd_transversal_extract(args) -> int:
    system = instances.load_instance(args.file)
    family = _family(system, args.family)
    witness = tverberg.find_tverberg(family, args.k)
    if witness is None:
        _emit({"command": "transversal extract", "flat": None})
        return 0
    flat = tverberg.extract_flat_transversal(family, witness)
    _emit(
        {
            "command": "transversal extract",
            "witness": _witness_json(witness),
            "flat": _flat_json(flat),
        }
    )
    return 0


def _cmd_sarkaria_lift(args) -> int:
    mat = sarkaria.lift(_parse_point(args.point), args.index, args.k)
    _emit({"command": "sarkaria lift", "matrix": _matrix_json(mat)})
    return 0


def _cmd_sarkaria_certify(args) -> int:
    system = instances.load_instance(args.file)
    family = _family(system, args.family)
    weights = sarkaria.zero_in_hull(family, _parse_blocks(args.blocks))
    payload: dict = {"command": "sarkaria certify"}
    if weights is None:
        payload["certificate"] = None
    else:
        payload["certificate"] = [
            {"set": s, "vertex": _point_json(v), "weight": format_rational(w)}
            for s, v, w in weights
        ]
    _emit(payload)
    return 0


def _cmd_sarkaria_separators(args) -> int:
    system = instances.load_instance(args.file)
    family = _family(system, args.family)
    assignment = sarkaria.equivariant_separators(family, args.k)
    _emit(
        {
            "command": "sarkaria separators",
            "orbits": len(assignment.orbit_representatives),
            "surjections": len(assignment.functionals),
            "min_margin": format_rational(assignment.margin),
            "functionals": {
                "".join(map(str, phi)): _matrix_json(mat)
                for phi, mat in sorted(assignment.functionals.items())
            },
        }
    )
    return 0


def _cmd_sarkaria_avoid_b(args) -> int:
    system = instances.load_instance(args.file)
    injections = _parse_injections(args.injections)
    assignments = [
        sarkaria.equivariant_separators(f, args.k) for f in system.families
    ]
    report = sarkaria.facet_avoidance_margins(system, injections, assignments)
    _emit(
        {
            "command": "sarkaria avoid-b",
            "injections": [list(r) for r in report.injections],
            "colorful_points": [_point_json(p) for p in report.colorful_points],
            "all_positive": report.all_positive,
            "min_margin": format_rational(report.min_margin),
            "margins": [
                {
                    "family": fam,
                    "surjection": "".join(map(str, phi)),
                    "class": j,
                    "value": format_rational(v),
                }
                for fam, phi, j, v in report.margins
            ],
        }
    )
    return 0 if report.all_positive else 2


def _cmd_complex_build(args) -> int:
    poset = complexes.cell_poset(args.n, args.k)
    census = {str(d): c for d, c in sorted(poset.census().items())}
    _emit(
        {
            "command": "complex build",
            "surjections": complexes.surjection_count(args.n, args.k),
            "facets": len(complexes.facets(args.n, args.k)),
            "facet_size": args.k ** (args.n - args.k),
            "cell_census": census,
            "reduced_euler": poset.reduced_euler(),
        }
    )
    return 0


def _cmd_complex_homology(args) -> int:
    if args.cells:
        space = complexes.cell_poset(args.n, args.k)
        result = morse.homology(space, max_dim=args.max_dim)
        label = "partial-surjection complex"
    else:
        want = args.max_dim
        sc = complexes.surjection_complex(
            args.n, args.k, max_dim=None if want is None else want + 1
        )
        result = morse.homology(sc, max_dim=want)
        label = "surjection complex"
    _emit(
        {
            "command": "complex homology",
            "space": label,
            "betti": list(result.betti),
            "torsion": [list(t) for t in result.torsion],
            "face_counts": list(result.face_counts),
        }
    )
    return 0


def _cmd_complex_quillen(args) -> int:
    report = complexes.quillen_fiber_report(args.n, args.k)
    _emit(
        {
            "command": "complex quillen",
            "faces": report.face_count,
            "cells": report.cell_count,
            "order_reversing": report.order_reversing,
            "fibers_are_simplices": report.fibers_are_simplices,
            "setwise_fixed_faces": len(report.setwise_fixed_faces),
            "ok": report.ok,
        }
    )
    return 0 if report.ok else 2


def _cmd_complex_morse(args) -> int:
    matching, report = morse.collapsing_matching(args.n, args.k)
    _emit(
        {
            "command": "complex morse",
            "pairs": len(matching),
            "acyclic": report.acyclic,
            "critical_cells": [
                complexes.format_cell(c) for c in sorted(report.critical)
            ],
            "critical_dims": sorted(report.critical_dims),
            "euler_audit": {
                "critical": report.euler_critical,
                "cells": report.euler_all,
                "balanced": report.balanced,
            },
        }
    )
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvlab",
        description="Exact workbench for Tverberg partitions of colorful "
        "families of convex polytopes.",
    )
    top = parser.add_subparsers(dest="group", required=True)

    tv = top.add_parser("tverberg", help="partition search and checking")
    tv_sub = tv.add_subparsers(dest="action", required=True)
    p = tv_sub.add_parser("search")
    p.add_argument("--file", required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_tverberg_search)
    p = tv_sub.add_parser("check")
    p.add_argument("--file", required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--blocks", required=True, help='e.g. "0,2|1"')
    p.set_defaults(func=_cmd_tverberg_check)

    co = top.add_parser("colorful", help="colorful intersection property")
    co_sub = co.add_subparsers(dest="action", required=True)
    p = co_sub.add_parser("check")
    p.add_argument("--file", required=True)
    p.set_defaults(func=_cmd_colorful_check)

    ex = top.add_parser("experiment", help="seeded experiment batches")
    ex_sub = ex.add_subparsers(dest="action", required=True)
    for name, func in (
        ("theorem1", _cmd_experiment_theorem1),
        ("conjecture", _cmd_experiment_conjecture),
    ):
        p = ex_sub.add_parser(name)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=1)
        p.add_argument("--scheme", default="axis-slabs", choices=instances.SCHEMES)
        p.set_defaults(func=func)

    cn = top.add_parser("construct", help="reference constructions")
    cn_sub = cn.add_subparsers(dest="action", required=True)
    p = cn_sub.add_parser("extremal")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_construct_extremal)

    tr = top.add_parser("transversal", help="affine flat transversals")
    tr_sub = tr.add_subparsers(dest="action", required=True)
    p = tr_sub.add_parser("extract")
    p.add_argument("--file", required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_transversal_extract)

    sa = top.add_parser("sarkaria", help="tensor lift machinery")
    sa_sub = sa.add_subparsers(dest="action", required=True)
    p = sa_sub.add_parser("lift")
    p.add_argument("--point", required=True, help='e.g. "1,1/2"')
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_sarkaria_lift)
    p = sa_sub.add_parser("certify")
    p.add_argument("--file", required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--blocks", required=True)
    p.set_defaults(func=_cmd_sarkaria_certify)
    p = sa_sub.add_parser("separators")
    p.add_argument("--file", required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_sarkaria_separators)
    p = sa_sub.add_parser("avoid-b")
    p.add_argument("--file", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--injections", required=True, help='e.g. "0,1;2,0"')
    p.set_defaults(func=_cmd_sarkaria_avoid_b)

    cx = top.add_parser("complex", help="complexes, matchings, homology")
    cx_sub = cx.add_subparsers(dest="action", required=True)
    p = cx_sub.add_parser("build")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_complex_build)
    p = cx_sub.add_parser("homology")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cells", action="store_true",
                   help="partial-surjection complex instead of the surjection complex")
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(func=_cmd_complex_homology)
    p = cx_sub.add_parser("quillen")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_complex_quillen)
    p = cx_sub.add_parser("morse")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_complex_morse)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
