"""Command-line front end: ``hopfo validate | compute | suite``.

Exit codes: 0 success, 1 a check or validation failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .catalogs import (
    ShorthandError,
    hmodule_from_json,
    load_hopf,
    parse_category,
    parse_module,
)
from .cotorsion import ext1
from .equivariant import category_from_json, eqmod_from_json, smash
from .hmodules import homology, is_free, jordan_decompose, sigma_homology_dims
from .homotopy import (
    is_sigma_acyclic,
    mapping_cone,
    null_homotopy_iff_cone_splits,
    random_equivariant_map,
    stable_hom,
)
from .cotorsion import reduced_shift
from .equivariant import eq_cone
from .hopfcore import AxiomError, HopfoError, hopf_from_json
from .suites import SUITES, SuiteConfig, rng_for, run_suite

log = logging.getLogger("hopfo")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMPUTE = ("integral", "homology", "stablehom", "cone", "suspend", "ext1", "smash", "jordan")

SHORTHAND_HELP = """\
shorthand:
  --hopf   divided_power:p | group:n1xn2:p (q = rationals) | taft:n:p | sweedler:p | FILE.json
  --a      k | truncpoly:n | truncpoly:n:trivial | a2 | FILE.json
  modules  k, S<i>, A, Lambda, free:r, H, Hbar, kereps, J<n>, X@V (tensor with H-module V),
           C:X (cone), S:X (suspension), D:X (desuspension), E:X, F:X, sums X+Y, FILE.json
"""


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _emit(report: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = _table(report)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _table(report: dict) -> str:
    lines = []
    checks = report.get("checks") if isinstance(report.get("checks"), list) else None
    for key in sorted(k for k in report if k != "checks" or checks is None):
        lines.append(f"{key:<22} {_cell(report[key])}")
    if checks is not None:
        width = max((len(c["key"]) for c in checks), default=10)
        lines.append("")
        lines.append(f"{'check':<{width}}  result")
        for c in checks:
            lines.append(f"{c['key']:<{width}}  {'PASS' if c['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


# ---------------------------------------------------------------------------
# input helpers


def _hopf(args):
    if not args.hopf:
        raise InputError("--hopf is required")
    return load_hopf(args.hopf)


def _cat(args, hopf):
    return parse_category(args.a or "k", hopf)


def _module(spec: Optional[str], cat, flag: str):
    if not spec:
        raise InputError(f"{flag} is required")
    return parse_module(spec, cat)


def _resolve(ref: str, base: Path) -> str:
    """A reference inside a file: catalog shorthand or a path relative to that file."""
    if ref.endswith(".json") and not Path(ref).is_absolute():
        return str(base / ref)
    return ref


# ---------------------------------------------------------------------------
# validate


def _validate_one(path: str, args) -> str:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(exc.strerror or str(exc)) from exc
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    base = p.parent

    def hopf_ref():
        ref = data.get("hopf") or args.hopf
        if not ref:
            raise InputError("no Hopf algebra: add a 'hopf' field or pass --hopf")
        return load_hopf(_resolve(ref, base))

    if "comult" in data:
        h = hopf_from_json(data)
        return f"Hopf algebra, dim {h.dim}, integral {list(h.field.format(x) for x in h.integral)}"
    if "objects" in data:
        cat = category_from_json(data, hopf_ref())
        return f"H-module category, {len(cat.objects)} object(s), dim {cat.dim}"
    if "object_grading" in data:
        h = hopf_ref()
        ref = data.get("category") or args.a or "k"
        cat = parse_category(_resolve(ref, base), h)
        m = eqmod_from_json(data, cat)
        return f"equivariant module, dim {m.dim}"
    if "action" in data:
        m = hmodule_from_json(data, hopf_ref())
        return f"H-module, dim {m.dim}"
    raise InputError("unrecognized file: expected a Hopf algebra, category, or module")


def cmd_validate(args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            msg = _validate_one(path, args)
            print(f"{path}: OK ({msg})")
        except AxiomError as exc:
            print(f"{path}: INVALID: {exc}", file=sys.stderr)
            status = max(status, EXIT_FAIL)
        except (InputError, ShorthandError, KeyError, TypeError, ValueError) as exc:
            print(f"{path}: ERROR: {exc}", file=sys.stderr)
            status = EXIT_INPUT
    return status


# ---------------------------------------------------------------------------
# compute


def _fmt_vec(F, v) -> list:
    return [F.format(x) for x in v]


def compute_report(args) -> dict:
    h = _hopf(args)
    F = h.field
    what = args.what
    out: dict = {"command": f"compute {what}", "hopf": h.name or args.hopf, "seed": args.seed,
                 "window": args.window}
    if what == "integral":
        out.update(integral=_fmt_vec(F, h.integral), basis=list(h.labels), semisimple=bool(h.is_semisimple))
        return out
    if what == "smash":
        cat = _cat(args, h)
        lam = smash(cat)
        out.update(a=cat.name, dim=lam.dim, basis=list(lam.labels),
                   structure=[[int(i), int(j), int(k), F.format(lam.mult[i, j, k])]
                              for i, j, k in sorted(zip(*np.nonzero(lam.mult)))])
        return out
    cat = _cat(args, h)
    out["a"] = cat.name
    if what in ("homology", "jordan", "cone", "suspend") and not (args.m and args.n and what == "cone"):
        m = _module(args.module or args.m, cat, "--module")
        out["module"] = m.name
        out["dim"] = m.dim
        if what == "homology":
            hd = homology(m.hmod)
            out.update(dim_Z=hd.Z.dim, dim_B=hd.B.dim, dim_H=hd.dim_H)
            out["sigma_homology"] = {str(k): v for k, v in sorted(sigma_homology_dims(m.hmod, args.window).items())}
            out["sigma_acyclic_within_window"] = all(v == 0 for v in out["sigma_homology"].values())
        elif what == "jordan":
            try:
                out["jordan_type"] = jordan_decompose(m.hmod)
            except ValueError as exc:
                raise InputError(str(exc)) from exc
        elif what == "cone":
            c = eq_cone(m)
            out.update(cone_dim=c.dim, cone_free_rank=is_free(c.hmod),
                       cone_sigma_acyclic_within_window=is_sigma_acyclic(c, args.window))
        else:
            s = reduced_shift(m, args.power)
            out.update(power=args.power, shifted_dim_up_to_free=s.dim, dim_H=homology(s.hmod).dim_H)
        return out
    m = _module(args.m, cat, "--m")
    n = _module(args.n, cat, "--n")
    out.update(m=m.name, n=n.name)
    if what == "stablehom":
        sh = stable_hom(m, n)
        out.update(dim=sh.dim, homology_of_hom=sh.homology_dim, equivariant_maps=sh.equivariant.dim,
                   null_homotopic=sh.null_homotopic.dim)
    elif what == "ext1":
        e = ext1(m, n)
        out.update(dim=e.dim, cocycle_space=e.cocycle_space.dim, coboundaries=e.coboundaries.dim,
                   free_cover_rank=len(e.presentation.generators))
    elif what == "cone":
        rng = rng_for(args.seed, f"compute/cone/{m.name}|{n.name}")
        f = random_equivariant_map(m, n, rng)
        tri = mapping_cone(f, m, n)
        v = null_homotopy_iff_cone_splits(f, m, n)
        out.update(map=[_fmt_vec(F, row) for row in f], cone_dim=tri.cone.dim,
                   null_homotopic=v.homotopic, cone_splits=v.cone_splits)
    else:
        raise InputError(f"compute {what} does not take --m/--n")
    return out


def cmd_compute(args) -> int:
    _emit(compute_report(args), args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# suite


def cmd_suite(args) -> int:
    pairs = None
    if args.hopf:
        pairs = [(args.hopf, args.a or "k")]
        # fail early on bad shorthand
        parse_category(pairs[0][1], load_hopf(pairs[0][0]))
    cfg = SuiteConfig(seed=args.seed, window=args.window, pairs=pairs, samples=args.samples)
    names = sorted(SUITES) if args.name == "all" else [args.name]
    reports = [run_suite(n, cfg).to_json() for n in names]
    report = reports[0] if len(reports) == 1 else {
        "suite": "all", "seed": args.seed, "window": args.window,
        "passed": all(r["passed"] for r in reports),
        "checks": [{"key": f"{r['suite']}/{c['key']}", **{k: v for k, v in c.items() if k != "key"}}
                   for r in reports for c in r["checks"]],
    }
    _emit(report, args)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _window(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("window must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--hopf", help="Hopf algebra shorthand or file")
    common.add_argument("--a", help="H-module category shorthand or file (default k)")
    common.add_argument("--window", type=_window, default=3, help="shift window w, n in [-w, w] (default 3)")
    common.add_argument("--seed", type=_seed, default=0, help="64-bit seed (default 0)")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--output", help="write the report to this path")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hopfo", description="Hopfological algebra workbench.",
                                epilog=SHORTHAND_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="validate JSON files",
                       epilog=SHORTHAND_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    v.add_argument("paths", nargs="+")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("compute", parents=[common], help="compute an invariant",
                       epilog=SHORTHAND_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("what", choices=COMPUTE)
    c.add_argument("--module", help="module shorthand (homology, jordan, cone, suspend)")
    c.add_argument("--m", help="source / first module")
    c.add_argument("--n", help="target / second module")
    c.add_argument("--power", type=int, default=1, help="suspension power for 'suspend' (negative desuspends)")
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("suite", parents=[common], help="run a verification suite",
                       epilog=SHORTHAND_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("name", choices=sorted(SUITES) + ["all"])
    s.add_argument("--samples", type=int, default=None, help="override per-suite sample counts")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (InputError, ShorthandError, AxiomError) as exc:
        print(f"hopfo: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, KeyError, OSError) as exc:
        print(f"hopfo: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HopfoError as exc:
        print(f"hopfo: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
