"""Command line entry point ``qhull``."""

from __future__ import annotations

import argparse
import json
import sys

from ..config import configured, get_config
from ..errors import AlgebraError, CapExceeded, UnknownCheck
from .textio import FormatError, load, write_module, write_ring

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

PREDICATES = ("dense", "reldense", "essential", "polyform", "nonsingular", "qi", "qc", "extending", "continuous", "injective", "complete")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qhull", description="Hulls, rings of quotients and theorem replay for finite modules.")
    p.add_argument("--max-module-order", type=int)
    p.add_argument("--max-hom-maps", type=int)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="validate the structures in a file")
    c.add_argument("file")

    h = sub.add_parser("hull", help="print a hull in the text format")
    h.add_argument("--kind", choices=("injective", "rational", "quasi"), required=True)
    h.add_argument("file")
    h.add_argument("module", help="module name, or a ring name for its regular module")

    pr = sub.add_parser("predicate", help="evaluate one predicate")
    pr.add_argument("name", choices=PREDICATES)
    pr.add_argument("file")
    pr.add_argument("module")
    pr.add_argument("--sub", help="comma-separated members of the submodule N (dense, reldense, essential)")
    pr.add_argument("--K", dest="K", help="the module K (reldense)")

    q = sub.add_parser("qmax", help="print the maximal right ring of quotients")
    q.add_argument("file")
    q.add_argument("ring", nargs="?")

    s = sub.add_parser("suite", help="run the theorem-replay suite")
    _catalog_args(s)
    s.add_argument("--checks", help="comma-separated check names (default: all)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--debug-crosscheck", action="store_true")
    s.add_argument("--report", choices=("json", "text"), default="text")
    s.add_argument("--timings", action="store_true", help="record wall time per check (breaks byte-stability)")
    s.add_argument("--out")

    se = sub.add_parser("search", help="counterexample search")
    se.add_argument("what", choices=("continuous",))
    _catalog_args(se)
    se.add_argument("--out")
    return p


def _catalog_args(p):
    p.add_argument("--catalog", default="builtin", help="'builtin' or a structure file")
    p.add_argument("--commutative-only", action="store_true")


def _catalog(args):
    from .catalog import CatalogEntry, builtin_catalog

    if args.catalog == "builtin":
        return builtin_catalog(commutative_only=args.commutative_only)
    st = load(args.catalog)
    out = []
    for R in st.rings.values():
        if args.commutative_only and not R.is_commutative:
            continue
        mods = [R.regular_module] + [M for M in st.modules.values() if M.ring is R]
        out.append(CatalogEntry(R, mods, ["file"]))
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _submodule(M, spec):
    from ..finite_algebra import Submodule

    if spec is None:
        raise FormatError("this predicate needs --sub")
    N = Submodule.from_members(M, [int(v) for v in spec.split(",") if v.strip()])
    N.check()
    return N


def _predicate(args) -> int:
    from .. import hulls
    from ..density import is_dense, is_essential, is_rel_dense

    st = load(args.file)
    M = st.module(args.module)
    if args.name in ("dense", "essential", "reldense"):
        N = _submodule(M, args.sub)
        if args.name == "dense":
            v = is_dense(N)
        elif args.name == "essential":
            v = is_essential(N)
        else:
            if not args.K:
                raise FormatError("reldense needs --K")
            v = is_rel_dense(N, st.module(args.K))
        print("true" if v.answer else "false")
        if v.witness is not None:
            print("witness " + json.dumps([list(w) if isinstance(w, tuple) else w for w in v.witness]))
        return EXIT_OK
    fn = {
        "polyform": hulls.is_polyform,
        "nonsingular": hulls.is_nonsingular,
        "qi": hulls.is_quasi_injective,
        "qc": hulls.is_quasi_continuous,
        "extending": hulls.is_extending,
        "continuous": hulls.is_continuous,
        "injective": hulls.is_injective,
        "complete": hulls.is_rationally_complete,
    }[args.name]
    print("true" if fn(M) else "false")
    return EXIT_OK


def _hull(args) -> int:
    from .. import hulls
    from .cache import injective_hull_cached

    st = load(args.file)
    M = st.module(args.module)
    injective_hull_cached(M)
    res = {"injective": hulls.injective_hull, "rational": hulls.rational_hull, "quasi": hulls.quasi_injective_hull}[args.kind](M)
    label = {"injective": "E", "rational": "~E", "quasi": "^M"}[args.kind]
    res.hull.label = f"{label}({args.module})"
    ring_name = next((k for k, R in st.rings.items() if R is M.ring), M.ring.name)
    sys.stdout.write(write_module(res.hull, name=f"{label}({args.module})", ring_name=ring_name, embed=res.embedding.table))
    return EXIT_OK


def _qmax(args) -> int:
    from ..quotient_rings import q_max

    st = load(args.file)
    if args.ring is None:
        if len(st.rings) != 1:
            raise FormatError("name the ring: the file holds several")
        name = next(iter(st.rings))
    else:
        name = args.ring
    if name not in st.rings:
        raise FormatError(f"no ring named {name!r}")
    res = q_max(st.rings[name])
    qname = f"Q({name})"
    sys.stdout.write(write_ring(res.Q, name=qname) + "embed " + " ".join(str(int(v)) for v in res.embedding.table) + "\n")
    return EXIT_OK


def _suite(args) -> int:
    from .suite import report_json, report_text, run_suite

    checks = [c.strip() for c in args.checks.split(",")] if args.checks else None
    with configured(debug_crosscheck=args.debug_crosscheck or get_config().debug_crosscheck):
        report = run_suite(_catalog(args), checks, parallelism=args.jobs, timings=args.timings)
    _emit(report_json(report) if args.report == "json" else report_text(report), args.out)
    return EXIT_FAIL if report["summary"]["fail"] else EXIT_OK


def _search(args) -> int:
    from .suite import search_continuous_transfer

    rep = search_continuous_transfer(_catalog(args))
    _emit(json.dumps(rep, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {}
    if args.max_module_order is not None:
        overrides["max_module_order"] = args.max_module_order
    if args.max_hom_maps is not None:
        overrides["max_hom_maps"] = args.max_hom_maps
    try:
        with configured(**overrides):
            if args.cmd == "check":
                st = load(args.file)
                for name, R in st.rings.items():
                    print(f"ring {name}: order {R.order}, char {R.char}, invariant factors {list(R.invariant_factors)}")
                for name, M in st.modules.items():
                    print(f"module {name}: order {M.order}, invariant factors {list(M.invariant_factors)}")
                return EXIT_OK
            return {"hull": _hull, "predicate": _predicate, "qmax": _qmax, "suite": _suite, "search": _search}[args.cmd](args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OSError, FormatError, UnknownCheck, AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
