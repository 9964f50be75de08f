"""Command-line interface.

Every subcommand reads and writes the JSON file formats from serialize, so
outputs feed back in as inputs without transformation.  Exit codes: 0 on
success, 1 on a verification mismatch, 2 on input or schema errors, 3 on a
violated mathematical precondition.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import convolution, corpus, katz, serialize
from .cyclotomic import parse_cyclotomic, rou_str
from .errors import InputError, MathError
from .isogeny import lift_class_so6_to_sl4, spin_class
from .linalg import Matrix
from .localdata import is_cohomologically_rigid, parse_group
from .serialize import (
    classfile_from_json,
    class_to_json,
    dump_json,
    load_json,
    plan_from_json,
    plan_to_json,
    profile_from_json,
    profile_to_json,
    scalars_from_json,
    tuple_from_json,
    tuple_to_json,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


def _emit(obj, out_path=None):
    text = dump_json(obj, out_path)
    if out_path is None:
        print(text)


def _read_tuple(path):
    return tuple_from_json(load_json(path))


def _read_profile(path):
    return profile_from_json(load_json(path))


# -- subcommand handlers -----------------------------------------------------------


def cmd_jordan(args) -> int:
    t = _read_tuple(args.infile)
    profile = convolution.jordan_profile(t, args.order)
    _emit(profile_to_json(profile), args.out)
    return EXIT_OK


def cmd_rigidity(args) -> int:
    f = _read_profile(args.infile)
    group = parse_group(args.group)
    report = is_cohomologically_rigid(f, group, assume_irreducible=args.assume_irreducible)
    _emit(
        {
            "group": report.group,
            "chi": report.chi,
            "threshold": report.threshold,
            "rigid": report.rigid,
            "conditional": report.conditional,
        },
        args.out,
    )
    return EXIT_OK


def cmd_mc(args) -> int:
    t = _read_tuple(args.infile)
    lam = parse_cyclotomic(args.lam)
    _emit(tuple_to_json(convolution.middle_convolution(t, lam)), args.out)
    return EXIT_OK


def cmd_twist(args) -> int:
    t = _read_tuple(args.infile)
    try:
        raw = json.loads(args.scalars)
    except json.JSONDecodeError as exc:
        raise InputError(f"--scalars is not valid JSON: {exc}") from exc
    _emit(tuple_to_json(convolution.twist(t, scalars_from_json(raw))), args.out)
    return EXIT_OK


def cmd_tensor(args) -> int:
    t1 = _read_tuple(args.infile)
    t2 = _read_tuple(args.with_file)
    _emit(tuple_to_json(convolution.tensor(t1, t2)), args.out)
    return EXIT_OK


def cmd_sym2(args) -> int:
    _emit(tuple_to_json(convolution.sym2(_read_tuple(args.infile))), args.out)
    return EXIT_OK


def cmd_lambda2(args) -> int:
    _emit(tuple_to_json(convolution.lambda2(_read_tuple(args.infile))), args.out)
    return EXIT_OK


def cmd_project(args) -> int:
    t = _read_tuple(args.infile)
    if args.map == "sp4_so5":
        out = convolution.project_sp4_to_so5(t)
    else:
        out = convolution.project_sl4_to_so6(t)
    _emit(tuple_to_json(out), args.out)
    return EXIT_OK


def cmd_reduce(args) -> int:
    f = _read_profile(args.infile)
    plan, trace = katz.reduce_profile(f)
    if args.plan is not None:
        dump_json(plan_to_json(plan), args.plan)
    payload = {
        "plan": plan_to_json(plan),
        "trace": [
            {
                "rank_before": s.rank_before,
                "rank_after": s.rank_after,
                "lambda": rou_str(s.lam),
                "scalars": {k: rou_str(v) for k, v in s.scalars},
            }
            for s in trace.steps
        ],
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_replay(args) -> int:
    plan = plan_from_json(load_json(args.plan))
    _emit(tuple_to_json(katz.replay(plan)), args.out)
    return EXIT_OK


def cmd_realize(args) -> int:
    f = _read_profile(args.infile)
    _emit(tuple_to_json(katz.realize(f)), args.out)
    return EXIT_OK


def cmd_spin(args) -> int:
    c, file_group = classfile_from_json(load_json(args.infile))
    group = parse_group(args.group) if args.group else file_group
    if args.group and parse_group(args.group) != file_group:
        raise InputError(
            f"--group {args.group} disagrees with the class file ({file_group})"
        )
    if group.family == "SO" and group.size == 6:
        result = lift_class_so6_to_sl4(c)
    else:
        result = spin_class(c, group)
    _emit(
        {
            "group": str(group),
            "candidates": [class_to_json(x) for x in result.candidates],
            "canonical": result.canonical,
        },
        args.out,
    )
    return EXIT_OK


def cmd_conjugate(args) -> int:
    t1 = _read_tuple(args.a)
    t2 = _read_tuple(args.b)
    witness = convolution.are_conjugate(t1, t2)
    if witness is None:
        _emit({"conjugate": False, "witness": None}, args.out)
    else:
        from .cyclotomic import format_cyclotomic

        _emit(
            {
                "conjugate": True,
                "witness": [
                    [format_cyclotomic(x) for x in row] for row in witness.entries
                ],
            },
            args.out,
        )
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    if args.case == "all":
        report = corpus.run_all(args.fixtures_dir)
    else:
        report = corpus.run_case(args.case, args.fixtures_dir)
    if args.out is not None:
        dump_json(report, args.out)
    if args.json:
        print(dump_json(report))
    else:
        print(corpus.render_report(report))
    ok = report["ok"]
    return EXIT_OK if ok else EXIT_MISMATCH


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rigidmc",
        description="Exact computations with rigid local systems: convolution, "
        "rigidity tests, rank reduction, spin lifts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=fn)
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        return p

    p = add("jordan", cmd_jordan, help="local Jordan data of a tuple")
    p.add_argument("--in", dest="infile", required=True, help="tuple file")
    p.add_argument("--order", type=int, required=True,
                   help="search eigenvalues among roots of unity of order dividing this")

    p = add("rigidity", cmd_rigidity, help="Euler-characteristic rigidity test")
    p.add_argument("--in", dest="infile", required=True, help="profile file")
    p.add_argument("--group", required=True, help="GL4, SL4, SO7, Sp4, ...")
    p.add_argument("--assume-irreducible", action="store_true")

    p = add("mc", cmd_mc, help="middle convolution of a tuple")
    p.add_argument("--lambda", dest="lam", required=True, help='character, e.g. "-1"')
    p.add_argument("--in", dest="infile", required=True, help="tuple file")

    p = add("twist", cmd_twist, help="scale finite monodromies")
    p.add_argument("--scalars", required=True,
                   help='JSON object, e.g. \'{"0": "-1"}\'')
    p.add_argument("--in", dest="infile", required=True, help="tuple file")

    p = add("tensor", cmd_tensor, help="tensor product of two tuples")
    p.add_argument("--in", dest="infile", required=True, help="first tuple file")
    p.add_argument("--with", dest="with_file", required=True, help="second tuple file")

    p = add("sym2", cmd_sym2, help="symmetric square")
    p.add_argument("--in", dest="infile", required=True, help="tuple file")

    p = add("lambda2", cmd_lambda2, help="exterior square")
    p.add_argument("--in", dest="infile", required=True, help="tuple file")

    p = add("project", cmd_project, help="isogeny projection")
    p.add_argument("--map", required=True, choices=("sp4_so5", "sl4_so6"))
    p.add_argument("--in", dest="infile", required=True, help="tuple file")

    p = add("reduce", cmd_reduce, help="rank-reduce a rigid profile to a plan")
    p.add_argument("--in", dest="infile", required=True, help="profile file")
    p.add_argument("--plan", default=None, help="write the plan here")

    p = add("replay", cmd_replay, help="replay a construction plan on matrices")
    p.add_argument("--plan", required=True, help="plan file")

    p = add("realize", cmd_realize, help="reduce then replay: profile to tuple")
    p.add_argument("--in", dest="infile", required=True, help="profile file")

    p = add("spin", cmd_spin, help="both candidate class lifts through the isogeny")
    p.add_argument("--group", default=None, help="SO3, SO5, SO6 or SO7")
    p.add_argument("--in", dest="infile", required=True, help="class file")

    p = add("conjugate", cmd_conjugate, help="find an intertwining witness")
    p.add_argument("--a", required=True, help="first tuple file")
    p.add_argument("--b", required=True, help="second tuple file")

    p = add("verify-paper", cmd_verify_paper,
            help="run the bundled verification cases")
    p.add_argument("--case", default="all",
                   choices=corpus.CASES + ("all",))
    p.add_argument("--fixtures-dir", default=None,
                   help="override the bundled fixtures directory")
    p.add_argument("--json", action="store_true",
                   help="print the JSON report instead of the text rendering")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
