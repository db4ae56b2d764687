"""Command line entry point ``zeta0``.

    zeta0 table --input FILE --out-md FILE --out-json FILE [--prime-bound 3000] [--modulus-cap 8]
    zeta0 search --from N --to M
    zeta0 row --n 29 --cubic "x^3-6*x-s" --audit

Exit status: 0 when every row was computed and passed its invariants, 2 when
an invariant failed (the witness goes to stderr as JSON), 1 for other errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .pipeline import (Job, Options, ParseError, read_jobs, render_json, render_markdown,
                       run_row, run_table, search_mode, table_ok)


def _options(args) -> Options:
    return Options(prime_bound=args.prime_bound, modulus_cap=args.modulus_cap,
                   cache_dir=args.cache_dir, timing=args.timing, workers=args.workers,
                   audit=getattr(args, "audit", False))


def _finish(reports) -> int:
    ok, witnesses = table_ok(reports)
    if ok:
        return 0
    print(json.dumps({"failures": witnesses}, sort_keys=True), file=sys.stderr)
    if any("invariant_failures" in w for w in witnesses):
        return 2
    return 1


def cmd_table(args) -> int:
    try:
        jobs = read_jobs(args.input)
    except (OSError, ParseError) as e:
        print(f"zeta0: {e}", file=sys.stderr)
        return 1
    reports = run_table(jobs, _options(args))
    md = render_markdown(reports)
    if args.out_md:
        Path(args.out_md).write_text(md)
    else:
        sys.stdout.write(md)
    if args.out_json:
        Path(args.out_json).write_text(render_json(reports))
    if args.out_fig:
        from .plots import plot_table
        plot_table(reports, args.out_fig)
    return _finish(reports)


def cmd_row(args) -> int:
    rep = run_row(Job(args.n, args.cubic), _options(args))
    for line in rep.pop("audit", []):
        print(line)
    print(json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False))
    return _finish([rep])


def cmd_search(args) -> int:
    rows = search_mode(args.lo, args.hi, _options(args))
    for r in rows:
        if "error" in r:
            print(f"{r['n']:5d}  error: {r['error']['message']}")
        elif r["candidate"]:
            conds = ", ".join(h["conductor"] for h in r["cubic_handles"])
            print(f"{r['n']:5d}  |c0| = {r['derived_c0']}  cubic handles: {conds or 'none'}")
    if args.out_json:
        Path(args.out_json).write_text(json.dumps({"version": __version__, "rows": rows},
                                                  indent=2, sort_keys=True) + "\n")
    return 1 if any("error" in r for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zeta0", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime-bound", type=int, default=3000)
    common.add_argument("--modulus-cap", type=int, default=8)
    common.add_argument("--cache-dir", default=None, help="directory for the per-n cache")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--timing", action="store_true", help="record wall time per row")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("table", parents=[common], help="run a table of rows")
    t.add_argument("--input", required=True)
    t.add_argument("--out-md")
    t.add_argument("--out-json")
    t.add_argument("--out-fig", help="optional figure of the theta coefficients")
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("search", parents=[common], help="search real quadratic fields")
    s.add_argument("--from", dest="lo", type=int, required=True)
    s.add_argument("--to", dest="hi", type=int, required=True)
    s.add_argument("--out-json")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("row", parents=[common], help="run a single row")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--cubic", required=True)
    r.add_argument("--audit", action="store_true", help="print every cone contribution")
    r.set_defaults(func=cmd_row)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
