"""Plain-text file format for formal cycles.

Example::

    # Totaro's cycle
    symbols: a b1 b2
    parameter: s
    modulus: 2
    slots: 2
    +1 (1/a; s, (b1*s - b1*b2)/(s - b1*b2))

Header lines are ``key: value``; every other non-blank, non-comment line is
a term ``<integer> (<affine coords>; <box coords>)``.  A term whose box
coordinates mention the parameter is a Mobius curve, otherwise a point.
``symbols`` is optional; when present, other identifiers are rejected.
"""

from __future__ import annotations

import re

from .cycles import AdmissibilityError, FormalCycle, ModulusRing, MobiusCurve, PointCycle, SlotSpace, admissible
from .field import Mobius, ParseError, UnknownVariableError, parse_ratfunc

__all__ = ["parse_cycle_file", "format_cycle_file", "read_cycle_file", "write_cycle_file"]

_HEADERS = {"symbols", "parameter", "modulus", "slots", "decomposable"}
_TERM = re.compile(r"^([+-]?\s*\d+)\s*\((.*)\)\s*$")


def parse_cycle_file(text: str) -> FormalCycle:
    header: dict[str, str] = {}
    term_lines: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if sep and key.strip() in _HEADERS and not line.startswith(("+", "-")) and "(" not in key:
            header[key.strip()] = value.strip()
        else:
            term_lines.append((lineno, line))

    param = header.get("parameter", "s")
    symbols = header.get("symbols")
    names = None if symbols is None else set(symbols.split()) | {param}
    if symbols is not None and param in symbols.split():
        raise ParseError(f"parameter {param!r} is also declared as a symbol")
    try:
        ring = ModulusRing(tuple(int(x) for x in header.get("modulus", "2").split()))
    except ValueError as exc:
        raise ParseError(f"bad modulus line: {exc}") from None
    decomposable = header.get("decomposable", "false").lower() in ("true", "yes", "1")

    terms: dict = {}
    n_slots = int(header["slots"]) if "slots" in header else None
    for lineno, line in term_lines:
        m = _TERM.match(line)
        if not m:
            raise ParseError(f"line {lineno}: expected '<coeff> (<a>; <box>)', got {line!r}")
        coeff = int(m.group(1).replace(" ", ""))
        body = m.group(2)
        if body.count(";") != 1:
            raise ParseError(f"line {lineno}: need exactly one ';' between affine and box coordinates")
        a_part, box_part = body.split(";")
        try:
            a = tuple(parse_ratfunc(x, names) for x in a_part.split(","))
            box_f = [parse_ratfunc(x, names) for x in box_part.split(",")] if box_part.strip() else []
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except UnknownVariableError as exc:
            raise ParseError(f"line {lineno}: undeclared symbol {exc}") from None
        if any(param in x.variables for x in a):
            raise ParseError(f"line {lineno}: affine coordinate depends on the parameter")
        if any(param in f.variables for f in box_f):
            box = [Mobius.from_ratfunc(f, param) if param in f.variables else f for f in box_f]
            try:
                term = MobiusCurve(a, tuple(box))
            except AdmissibilityError as exc:
                raise AdmissibilityError(f"line {lineno}: {exc}") from None
        else:
            try:
                term = PointCycle(a, tuple(box_f))
            except AdmissibilityError as exc:
                raise AdmissibilityError(f"line {lineno}: {exc}") from None
        ok, why = admissible(term, ring)
        if not ok:
            raise AdmissibilityError(f"line {lineno}: {term}: {why}")
        if n_slots is None:
            n_slots = len(term.box)
        elif len(term.box) != n_slots:
            raise ParseError(f"line {lineno}: {len(term.box)} box coordinates, expected {n_slots}")
        terms[term] = terms.get(term, 0) + coeff
    if n_slots is None:
        raise ParseError("empty cycle file needs a 'slots:' header")
    return FormalCycle(SlotSpace(ring, n_slots), terms, decomposable)


def _variables(c: FormalCycle) -> set[str]:
    out: set[str] = set()
    for t, _ in c:
        for x in t.a:
            out |= set(x.variables)
        for x in t.box:
            coeffs = x.coefficients() if isinstance(x, Mobius) else (x,)
            for y in coeffs:
                out |= set(y.variables)
    return out


def format_cycle_file(c: FormalCycle, param: str | None = None) -> str:
    symbols = sorted(_variables(c))
    if param is None:
        param = "s"
        k = 0
        while param in symbols:
            k += 1
            param = f"s{k}"
    lines = [
        f"symbols: {' '.join(symbols)}".rstrip(),
        f"parameter: {param}",
        f"modulus: {c.ring}",
        f"slots: {c.n}",
    ]
    if c.decomposable:
        lines.append("decomposable: true")
    for t, k in c:
        box = t.box_strings(param) if isinstance(t, MobiusCurve) else [str(x) for x in t.box]
        a = ", ".join(str(x) for x in t.a)
        lines.append(f"{k:+d} ({a}; {', '.join(box)})")
    return "\n".join(lines) + "\n"


def read_cycle_file(path: str) -> FormalCycle:
    with open(path, encoding="utf-8") as fh:
        return parse_cycle_file(fh.read())


def write_cycle_file(path: str, c: FormalCycle) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_cycle_file(c))
