"""Command-line entry point.

Exit codes: 0 all checks pass, 2 flagged discrepancies, 1 error, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import AlgebraError, build_algebra, get_algebra
from .census import endotrivial_census
from .endotrivial import is_endotrivial, syzygy, syzygy_degree
from .lie import PRESETS, PresentationError, RestrictedLiePresentation
from .modules import (
    ModuleError,
    ModuleRep,
    build_weyl_sl2,
    check_valid,
    dual,
    natural_sl3,
    pim_module,
    regular,
    tensor,
    trivial,
)
from .repro import repro_sl2_table, repro_sl3_omega2
from .structure import decompose, is_projective_free, projective_multiplicities, strip_projectives

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(data, out: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_module(path: str) -> ModuleRep:
    return ModuleRep.from_json(json.loads(Path(path).read_text()))


def _module_summary(m: ModuleRep) -> dict:
    ok, msg = check_valid(m)
    return {
        "algebra": m.pres.name,
        "p": m.p,
        "dim": m.dim,
        "graded": m.graded,
        "valid": ok,
        "violation": msg,
        "projective_multiplicities": projective_multiplicities(m) if ok else None,
    }


# ---------------------------------------------------------------------------
# handlers


def cmd_algebra_build(args) -> int:
    if args.presentation:
        pres = RestrictedLiePresentation.from_json(json.loads(Path(args.presentation).read_text()))
        alg = build_algebra(pres)
    else:
        if args.preset is None or args.p is None:
            raise UsageError("give --preset and -p, or --presentation")
        alg = get_algebra(args.preset, args.p)
    data = {
        "presentation": alg.pres.to_json(),
        "p": alg.p,
        "dim": alg.dim,
        "triangular": alg.triangular,
        "pims": [{"label": list(pim.label), "dim": pim.dim, "t": pim.t} for pim in alg.pims],
    }
    _emit(data, args.out)
    return EXIT_OK


def cmd_module_build(args) -> int:
    alg = get_algebra(args.preset, args.p)
    kind = args.kind
    if kind == "trivial":
        m = trivial(alg)
    elif kind == "regular":
        m = regular(alg)
    elif kind == "pim":
        m, _ = pim_module(alg, args.index)
    elif kind == "natural":
        m = natural_sl3(alg)
    elif kind == "weyl":
        if args.preset != "sl2-g1":
            raise UsageError("weyl modules are built over sl2-g1")
        m = build_weyl_sl2(args.index, args.p)
    else:
        raise UsageError(f"unknown kind {kind!r}")
    _emit(m.to_json(), args.out)
    return EXIT_OK


def cmd_module_check(args) -> int:
    m = _load_module(args.module)
    summary = _module_summary(m)
    _emit(summary, args.out)
    return EXIT_OK if summary["valid"] else EXIT_ERROR


def cmd_module_tensor(args) -> int:
    _emit(tensor(_load_module(args.a), _load_module(args.b)).to_json(), args.out)
    return EXIT_OK


def cmd_module_dual(args) -> int:
    _emit(dual(_load_module(args.module)).to_json(), args.out)
    return EXIT_OK


def cmd_module_strip(args) -> int:
    _emit(strip_projectives(_load_module(args.module)).to_json(), args.out)
    return EXIT_OK


def cmd_module_decompose(args) -> int:
    parts = decompose(_load_module(args.module), seed=args.seed)
    _emit({"summands": [x.to_json() for x in parts], "dims": [x.dim for x in parts]}, args.out)
    return EXIT_OK


def cmd_syzygy(args) -> int:
    _emit(syzygy(_load_module(args.module), args.n).to_json(), args.out)
    return EXIT_OK


def cmd_endo_check(args) -> int:
    m = _load_module(args.module)
    ok = is_endotrivial(m)
    _emit({"dim": m.dim, "endotrivial": ok}, args.out)
    return EXIT_OK if ok else EXIT_FLAGGED


def cmd_endo_add(args) -> int:
    a, b = _load_module(args.a), _load_module(args.b)
    for m in (a, b):
        if not is_endotrivial(m):
            raise ModuleError("inputs must be endotrivial")
    _emit(strip_projectives(tensor(a, b)).to_json(), args.out)
    return EXIT_OK


def cmd_endo_degree(args) -> int:
    m = _load_module(args.module)
    if not is_projective_free(m):
        m = strip_projectives(m)
    n = syzygy_degree(m, bound=args.bound)
    _emit({"dim": m.dim, "degree": n}, args.out)
    return EXIT_OK if n is not None else EXIT_FLAGGED


def cmd_census(args) -> int:
    alg = get_algebra(args.preset, args.p)
    sample = None if args.exhaustive or args.sample is None else args.sample
    report = endotrivial_census(alg, args.dim, sample=sample, seed=args.seed)
    _emit(report.to_json(), args.out)
    print(
        f"census {args.preset} p={args.p} n={args.dim}: {report.class_count} class(es), "
        f"{report.endotrivial_points}/{report.relation_points} endotrivial points",
        file=sys.stderr,
    )
    return EXIT_FLAGGED if report.indeterminate else EXIT_OK


def _finish_report(report, out) -> int:
    _emit(report.to_json(), out)
    print(report.summary(), file=sys.stderr)
    return report.exit_code


def cmd_repro_sl2(args) -> int:
    return _finish_report(repro_sl2_table(args.p, args.max_n), args.out)


def cmd_repro_sl3(args) -> int:
    report = repro_sl3_omega2(emit_dot=bool(args.emit_dot))
    if args.emit_dot:
        Path(args.emit_dot).write_text(report.artifacts["dot"])
    return _finish_report(report, args.out)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="endotrivial", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opt(p):
        p.add_argument("--out", help="write JSON here instead of standard output")

    alg = sub.add_parser("algebra").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = alg.add_parser("build")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("-p", type=int)
    p.add_argument("--presentation", help="presentation JSON file")
    out_opt(p)
    p.set_defaults(func=cmd_algebra_build)

    mod = sub.add_parser("module").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = mod.add_parser("build")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--kind", choices=("trivial", "regular", "pim", "natural", "weyl"), required=True)
    p.add_argument("--index", type=int, default=0, help="PIM index or Weyl highest weight")
    out_opt(p)
    p.set_defaults(func=cmd_module_build)
    for name, func in (("check", cmd_module_check), ("dual", cmd_module_dual), ("strip", cmd_module_strip)):
        p = mod.add_parser(name)
        p.add_argument("module")
        out_opt(p)
        p.set_defaults(func=func)
    p = mod.add_parser("tensor")
    p.add_argument("a")
    p.add_argument("b")
    out_opt(p)
    p.set_defaults(func=cmd_module_tensor)
    p = mod.add_parser("decompose")
    p.add_argument("module")
    p.add_argument("--seed", type=int, default=0)
    out_opt(p)
    p.set_defaults(func=cmd_module_decompose)

    p = sub.add_parser("syzygy")
    p.add_argument("--module", required=True)
    p.add_argument("-n", type=int, required=True)
    out_opt(p)
    p.set_defaults(func=cmd_syzygy)

    endo = sub.add_parser("endo").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = endo.add_parser("check")
    p.add_argument("module")
    out_opt(p)
    p.set_defaults(func=cmd_endo_check)
    p = endo.add_parser("add")
    p.add_argument("a")
    p.add_argument("b")
    out_opt(p)
    p.set_defaults(func=cmd_endo_add)
    p = endo.add_parser("degree")
    p.add_argument("module")
    p.add_argument("--bound", type=int, default=4)
    out_opt(p)
    p.set_defaults(func=cmd_endo_degree)

    p = sub.add_parser("census")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    out_opt(p)
    p.set_defaults(func=cmd_census)

    rep = sub.add_parser("repro").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = rep.add_parser("sl2-table")
    p.add_argument("-p", type=int, required=True, choices=(2, 3, 5))
    p.add_argument("--max-n", type=int, default=4)
    out_opt(p)
    p.set_defaults(func=cmd_repro_sl2)
    p = rep.add_parser("sl3-omega2")
    p.add_argument("--emit-dot", metavar="FILE")
    out_opt(p)
    p.set_defaults(func=cmd_repro_sl3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, ModuleError, PresentationError, ValueError, ArithmeticError, RuntimeError,
            OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
