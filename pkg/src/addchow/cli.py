"""Command line: ``addchow verify | cycle | homology``.

Exit status: 0 when everything asked for passed, 1 when a check failed or
an input complex is invalid, 2 for unreadable input or bad arguments.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence, TextIO

from . import cycles as cy
from .cyclefile import format_cycle_file, read_cycle_file
from .field import ParseError
from .mixedcx import InvalidComplexError, _column_homology, connes_sequence, load_complex, validate
from .verify import SUITES, CheckResult, RunConfig, run_suite

__all__ = ["main", "build_parser"]

MAX_CAPS = {"shuffle": 7, "delta": 6, "forms": 6}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="addchow", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--output", help="write the report here instead of stdout")

    v = sub.add_parser("verify", help="run an identity-check suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--max-n", type=int, help="size cap: r+s for shuffle, n for delta and forms")
    v.add_argument("--r1", type=int, help="derivation suite: first degree")
    v.add_argument("--r2", type=int, help="derivation suite: second degree")
    v.add_argument("--fixtures", type=int, default=100, help="random fixtures for the mixedcx suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(v)

    c = sub.add_parser("cycle", help="apply an operator to cycle files")
    c.add_argument("op", choices=("boundary", "delta", "wedge", "cyclic-shuffle"))
    c.add_argument("--input", action="append", required=True,
                   help="cycle file; give it twice for wedge and cyclic-shuffle")
    c.add_argument("--mode", choices=("full", "reduced"), default="full", help="boundary mode")
    c.add_argument("--k", type=int, help="delta: insert at this slot only")
    c.add_argument("--output")

    h = sub.add_parser("homology", help="homology of a mixed complex file")
    h.add_argument("--input", required=True)
    h.add_argument("--connes", action="store_true", help="also check the Connes periodicity sequence")
    common(h)
    return p


def _emit(text: str, path: str | None, out: TextIO):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _format_results(results: list[CheckResult], fmt: str) -> str:
    if fmt == "structured":
        return "".join(f"{r.check_id}\t{r.status}\t{r.detail}\n" for r in results)
    lines = [f"{r.status}  {r.check_id}" + (f": {r.detail}" if r.detail else "") for r in results]
    return "\n".join(lines) + "\n"


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    cap = MAX_CAPS.get(args.suite)
    if args.max_n is not None and (args.max_n < 0 or (cap is not None and args.max_n > cap)):
        err.write(f"--max-n must be in 0..{cap} for the {args.suite} suite\n")
        return 2
    if args.jobs < 1 or args.fixtures < 0:
        err.write("--jobs must be >= 1 and --fixtures >= 0\n")
        return 2
    cfg = RunConfig(args.max_n, args.r1, args.r2, args.fixtures, args.seed, args.jobs)
    names = SUITES if args.suite == "all" else (args.suite,)
    results: list[CheckResult] = []
    start = time.perf_counter()
    for name in names:
        results += run_suite(name, cfg)
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r.ok]
    report = _format_results(results, args.format)
    if args.format == "text":
        report += f"{len(results)} checks, {len(failed)} failed, {elapsed:.1f} s\n"
    _emit(report, args.output, out)
    if failed:
        first = failed[0]
        err.write(f"first failure: {first.check_id}: {first.detail}\n")
        return 1
    return 0


def cmd_cycle(args, out: TextIO, err: TextIO) -> int:
    two = args.op in ("wedge", "cyclic-shuffle")
    if len(args.input) != (2 if two else 1):
        err.write(f"{args.op} takes {'two' if two else 'one'} --input file(s)\n")
        return 2
    c = [read_cycle_file(path) for path in args.input]
    if args.op == "boundary":
        res = cy.boundary(c[0], args.mode)
    elif args.op == "delta":
        res = cy.delta(c[0], args.k)
    elif args.op == "wedge":
        res = cy.wedge(c[0], c[1])
    else:
        res = cy.cyclic_shuffle(c[0], c[1])
    _emit(format_cycle_file(res), args.output, out)
    return 0


def cmd_homology(args, out: TextIO, err: TextIO) -> int:
    with open(args.input, encoding="utf-8") as fh:
        m = load_complex(fh.read())
    v = validate(m)
    if not v.ok:
        err.write(f"invalid complex: {v}\n")
        return 1
    degrees = range(0, m.top + 1)
    hom = {n: _column_homology(m, n).dim for n in degrees}
    lines = []
    if args.format == "structured":
        lines += [f"H[{n}]\tdim={m.dim(n)}\t{hom[n]}" for n in degrees]
    else:
        lines.append("degree  dim  H")
        lines += [f"{n:>6}  {m.dim(n):>3}  {hom[n]}" for n in degrees]
    status = 0
    if args.connes:
        rep = connes_sequence(m)
        if args.format == "structured":
            lines += [f"{nd.name}[{nd.degree}]\t{'exact' if nd.exact else 'NOT-EXACT'}\tdim={nd.dim}"
                      for nd in rep.nodes]
        else:
            lines.append("Connes periodicity sequence:")
            lines += ["  " + x for x in rep.lines()]
            lines.append("exact at every node" if rep.exact else "NOT exact")
        status = 0 if rep.exact else 1
    _emit("\n".join(lines) + "\n", args.output, out)
    return status


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"verify": cmd_verify, "cycle": cmd_cycle, "homology": cmd_homology}
    try:
        return handlers[args.command](args, out, err)
    except (ParseError, cy.AdmissibilityError, cy.ImproperIntersectionError,
            cy.UnsupportedProductError, InvalidComplexError, OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
