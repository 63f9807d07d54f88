"""Command-line entry point: ``rsfpl enumerate | verify | search | render``.

Exit codes: 0 pass, 1 error or failed check, 2 expected-negative finding,
3 size cap exceeded.  Machine-readable output goes to stdout (or a file);
a one-line human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import altpath, fpl_core, patterns, spectral
from .fpl_core import Fpl, ResourceLimitError
from .render import RenderSpec, render_svg

EXIT_OK, EXIT_FAIL, EXIT_NEGATIVE, EXIT_CAP = 0, 1, 2, 3
VERIFY_KINDS = ("rs", "harmonic", "sets", "tl", "gyration")


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_enumerate(args) -> int:
    expected = fpl_core.asm_count_formula(args.n)
    count = 0
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        for a in fpl_core.enumerate_asms(args.n, max_n=args.max_n):
            count += 1
            if args.count_only:
                continue
            if args.format == "fpl":
                out.write(dump(fpl_core.asm_to_fpl(a).to_json(with_edges=True)) + "\n")
            elif args.format == "text":
                out.write(a.key + "\n")
            else:
                out.write(dump(a.to_json()) + "\n")
        ok = count == expected
        out.write(f"n={args.n} count={count} expected={expected} {'OK' if ok else 'MISMATCH'}\n")
    finally:
        if args.output:
            out.close()
    return EXIT_OK if ok else EXIT_FAIL


def _tl_record(n: int) -> spectral.Verification:
    checks = patterns.check_tl_relations(n)
    return spectral.Verification(n, "tl", all(c.passed for c in checks), [c.to_json() for c in checks])


def _gyration_record(n: int, max_n: int) -> spectral.Verification:
    rows = fpl_core.gyration_shift_report(n, max_n=max_n)
    return spectral.Verification(n, "gyration", all(r["pass"] for r in rows), rows,
                                 {"shift": fpl_core.GYRATION_SHIFT})


def build_verification(n: int, kind: str, k: Optional[int] = None,
                       max_n: int = fpl_core.DEFAULT_MAX_N,
                       max_dim: int = spectral.DEFAULT_MAX_DIM) -> spectral.Verification:
    if kind == "rs":
        return spectral.verify_rs(n, max_n=max_n, max_dim=max_dim)
    if kind == "harmonic":
        return spectral.verify_harmonic(n, max_n=max_n)
    if kind == "sets":
        return spectral.verify_set_equinumeracy(n, k, max_n=max_n)
    if kind == "tl":
        return _tl_record(n)
    if kind == "gyration":
        return _gyration_record(n, max_n)
    raise ValueError(f"unknown kind {kind!r}")


def cmd_verify(args) -> int:
    rec = build_verification(args.n, args.kind, args.k, args.max_n, args.max_dim)
    _emit(dump(rec.to_json()) + "\n", args.output)
    print(f"verify n={args.n} kind={args.kind} {'PASS' if rec.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if rec.passed else EXIT_FAIL


def search_report(n: int, strategy: str, cycle_limit: int = altpath.DEFAULT_CYCLE_LIMIT,
                  max_n: int = fpl_core.DEFAULT_MAX_N) -> Dict:
    hist = altpath.run_counting_test(n, strategy, cycle_limit, max_n)
    audit = altpath.audit_bijection(n, strategy, cycle_limit, max_n, histogram=hist)
    report = hist.to_json()
    report["audit"] = audit.to_json()
    return report


def cmd_search(args) -> int:
    report = search_report(args.n, args.strategy, args.cycle_limit, args.max_n)
    _emit(dump(report) + "\n", args.report)
    print(f"search n={args.n} strategy={args.strategy} pass_2n_test={report['pass_2n_test']} "
          f"ambiguous={len(report['ambiguous'])} not_found={len(report['not_found'])}", file=sys.stderr)
    if report["pass_2n_test"]:
        return EXIT_OK
    return EXIT_NEGATIVE


def cmd_render(args) -> int:
    data = json.loads(Path(args.input).read_text())
    f = Fpl.from_json(data)
    spec = RenderSpec(path_color=args.path_color, converse_color=args.converse_color,
                      labels=not args.no_labels, scale=args.scale)
    mask = 0
    if args.cycle:
        edges = json.loads(Path(args.cycle).read_text())
        mask = f.lattice.mask_of(edges)
    elif args.cycle_index is not None:
        cycles = altpath.find_alternating_cycles(f)
        mask = cycles[args.cycle_index].mask
    svg = render_svg(f, spec, mask)
    Path(args.output).write_text(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsfpl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def caps(p, dim=False):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--max-n", type=int, default=fpl_core.DEFAULT_MAX_N,
                       help="enumeration cap (default %(default)s)")
        if dim:
            p.add_argument("--max-dim", type=int, default=spectral.DEFAULT_MAX_DIM,
                           help="solver dimension cap C_n (default %(default)s)")

    p = sub.add_parser("enumerate", help="stream all ASMs / FPLs of size n")
    caps(p)
    p.add_argument("--format", choices=("json", "fpl", "text"), default="json")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="run one exact verification")
    caps(p, dim=True)
    p.add_argument("--kind", choices=VERIFY_KINDS, required=True)
    p.add_argument("--k", type=int, help="single basis index for --kind sets")
    p.add_argument("--output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="counting test and bijection audit for a strategy")
    caps(p)
    p.add_argument("--strategy", choices=altpath.STRATEGIES, required=True)
    p.add_argument("--cycle-limit", type=int, default=altpath.DEFAULT_CYCLE_LIMIT)
    p.add_argument("--report")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("render", help="draw an FPL as SVG")
    p.add_argument("--input", required=True, help="FPL JSON file")
    p.add_argument("--output", required=True)
    p.add_argument("--cycle", help="JSON file with an edge list to highlight")
    p.add_argument("--cycle-index", type=int, help="highlight the k-th alternating cycle (0-based)")
    p.add_argument("--scale", type=int, default=40)
    p.add_argument("--path-color", default=RenderSpec.path_color)
    p.add_argument("--converse-color", default=RenderSpec.converse_color)
    p.add_argument("--no-labels", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, KeyError, IndexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
