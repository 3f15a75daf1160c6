"""Mixed complexes over QQ: validation, totalization, homology and the
Connes periodicity sequence, plus a builder turning reduced cycles into a
finite mixed complex under (d', delta).

A ``MixedComplex`` has finitely many nonzero degrees.  ``b[n]`` is the
matrix of V_n -> V_{n-1} (shape dim(n-1) x dim(n)) and ``B[n]`` the matrix
of V_n -> V_{n+1}.  Missing entries are zero maps.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg as la
from .cycles import FormalCycle, boundary, delta, is_reduced

__all__ = [
    "GradedSpace",
    "MixedComplex",
    "TotalComplex",
    "HomologyGroup",
    "LESNode",
    "LESReport",
    "ValidationReport",
    "validate",
    "totalize",
    "homology",
    "connes_sequence",
    "span_builder",
    "random_mixed_complex",
    "InvalidComplexError",
    "CapExceededError",
    "load_complex",
    "dump_complex",
]


class InvalidComplexError(ValueError):
    pass


class CapExceededError(ValueError):
    pass


@dataclass
class GradedSpace:
    dims: dict[int, int]
    labels: dict[int, list[str]] = field(default_factory=dict)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> list[int]:
        return sorted(n for n, d in self.dims.items() if d)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())


@dataclass
class MixedComplex:
    space: GradedSpace
    b: dict[int, la.Matrix] = field(default_factory=dict)
    B: dict[int, la.Matrix] = field(default_factory=dict)

    def __post_init__(self):
        for name, maps, shift in (("b", self.b, -1), ("B", self.B, 1)):
            for n, m in maps.items():
                rows, cols = self.space.dim(n + shift), self.space.dim(n)
                if len(m) != rows or any(len(r) != cols for r in m):
                    raise InvalidComplexError(f"{name}[{n}] should be {rows}x{cols}")

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    def b_at(self, n: int) -> la.Matrix:
        return self.b.get(n) or la.zeros(self.dim(n - 1), self.dim(n))

    def B_at(self, n: int) -> la.Matrix:
        return self.B.get(n) or la.zeros(self.dim(n + 1), self.dim(n))

    @property
    def top(self) -> int:
        degs = self.space.degrees()
        return degs[-1] if degs else -1


@dataclass
class ValidationReport:
    ok: bool
    degree: int | None = None
    axiom: str | None = None

    def __str__(self):
        return "valid" if self.ok else f"{self.axiom} fails at degree {self.degree}"


def validate(m: MixedComplex) -> ValidationReport:
    """Check b^2 = 0, B^2 = 0, bB + Bb = 0; report the first violation."""
    degs = m.space.degrees()
    for n in degs:
        d = m.dim
        bb = la.matmul(m.b_at(n - 1), m.b_at(n), d(n - 1), d(n)) if d(n - 2) else []
        if not la.is_zero(bb):
            return ValidationReport(False, n, "b^2 = 0")
        BB = la.matmul(m.B_at(n + 1), m.B_at(n), d(n + 1), d(n)) if d(n + 2) else []
        if not la.is_zero(BB):
            return ValidationReport(False, n, "B^2 = 0")
        bB = la.matmul(m.b_at(n + 1), m.B_at(n), d(n + 1), d(n))
        Bb = la.matmul(m.B_at(n - 1), m.b_at(n), d(n - 1), d(n))
        if any(x + y for r1, r2 in zip(bB, Bb) for x, y in zip(r1, r2)):
            return ValidationReport(False, n, "bB + Bb = 0")
    return ValidationReport(True)


# total complex


@dataclass
class TotalComplex:
    """Tot_n = sum_{i >= 0} V_{n-2i}; ``d[n]`` maps Tot_n -> Tot_{n-1}."""

    source: MixedComplex
    max_degree: int
    labels: dict[int, list[tuple[int, int, int]]]  # (i, column degree, basis index)
    d: dict[int, la.Matrix]

    def dim(self, n: int) -> int:
        return len(self.labels.get(n, []))

    def blocks(self, n: int) -> list[tuple[int, int, int]]:
        """(i, degree n-2i, offset) for each summand of Tot_n."""
        out, off = [], 0
        for i in range(n // 2 + 1):
            k = n - 2 * i
            if self.source.dim(k):
                out.append((i, k, off))
                off += self.source.dim(k)
        return out


def totalize(m: MixedComplex, max_degree: int | None = None) -> TotalComplex:
    if not validate(m).ok:
        raise InvalidComplexError(str(validate(m)))
    if max_degree is None:
        max_degree = m.top + 3
    tot = TotalComplex(m, max_degree, {}, {})
    for n in range(0, max_degree + 1):
        tot.labels[n] = [(i, k, j) for i, k, _ in tot.blocks(n) for j in range(m.dim(k))]
    for n in range(1, max_degree + 1):
        src, dst = tot.blocks(n), tot.blocks(n - 1)
        mat = la.zeros(tot.dim(n - 1), tot.dim(n))
        dst_off = {i: (k, off) for i, k, off in dst}
        for i, k, off in src:
            # c_i in V_k contributes b c_i to slot i and B c_i to slot i-1
            if i in dst_off and dst_off[i][0] == k - 1:
                _paste(mat, m.b_at(k), dst_off[i][1], off)
            if i - 1 in dst_off and dst_off[i - 1][0] == k + 1:
                _paste(mat, m.B_at(k), dst_off[i - 1][1], off)
        tot.d[n] = mat
    return tot


def _paste(target: la.Matrix, block: la.Matrix, r0: int, c0: int):
    for r, row in enumerate(block):
        for c, x in enumerate(row):
            if x:
                target[r0 + r][c0 + c] += x


# homology


@dataclass
class HomologyGroup:
    """H = ker(d_out) / im(d_in) with a chosen basis of representatives."""

    dim: int
    chain_dim: int
    boundaries: list[la.Vector]
    reps: list[la.Vector]

    def coords(self, z: la.Vector) -> la.Vector:
        """Coordinates of the class of cycle ``z`` in the representative basis."""
        if not self.dim:
            return []
        basis = self.boundaries + self.reps
        x = la.solve(la.from_columns(basis, self.chain_dim), z, len(basis))
        if x is None:
            raise ValueError("vector is not a cycle")
        return x[len(self.boundaries):]


def homology(d_out: la.Matrix | None, d_in: la.Matrix | None, chain_dim: int,
             in_dim: int = 0) -> HomologyGroup:
    """Homology at a chain group of dimension ``chain_dim``.

    ``d_out`` maps it to the next lower group, ``d_in`` (with ``in_dim``
    columns) maps into it.  Raises if their composite is nonzero.
    """
    if chain_dim == 0:
        return HomologyGroup(0, 0, [], [])
    if d_out and d_in and in_dim:
        if not la.is_zero(la.matmul(d_out, d_in, chain_dim, in_dim)):
            raise InvalidComplexError("d^2 != 0")
    cycles = la.nullspace(d_out, chain_dim) if d_out else [
        [Fraction(int(i == j)) for i in range(chain_dim)] for j in range(chain_dim)]
    bd_cols = la.columns(d_in, in_dim) if d_in and in_dim else []
    idx = la.independent_columns(bd_cols, chain_dim)
    boundaries = [bd_cols[i] for i in idx]
    combined = boundaries + cycles
    keep = la.independent_columns(combined, chain_dim)
    reps = [combined[i] for i in keep if i >= len(boundaries)]
    return HomologyGroup(len(reps), chain_dim, boundaries, reps)


def _column_homology(m: MixedComplex, n: int) -> HomologyGroup:
    return homology(m.b_at(n) if m.dim(n - 1) else None, m.b_at(n + 1), m.dim(n), m.dim(n + 1))


def _tot_homology(t: TotalComplex, n: int) -> HomologyGroup:
    if n < 0:
        return HomologyGroup(0, 0, [], [])
    d_out = t.d.get(n) if n >= 1 and t.dim(n - 1) else None
    return homology(d_out, t.d.get(n + 1), t.dim(n), t.dim(n + 1))


# the Connes sequence


@dataclass
class LESNode:
    name: str
    degree: int
    dim: int
    exact: bool
    verified: bool = True


@dataclass
class LESReport:
    """Nodes of ... -> H_n -I-> HC_n -S-> HC_{n-2} -B-> H_{n-1} -> ...

    Node names: ``H`` (column homology), ``HC`` (as the target of I) and
    ``HC'`` (the same group as the target of S).

    ``maps`` holds the induced matrices keyed by (map name, degree).
    """

    nodes: list[LESNode]
    maps: dict[tuple[str, int], la.Matrix]
    column_dims: dict[int, int]
    cyclic_dims: dict[int, int]

    @property
    def exact(self) -> bool:
        return all(nd.exact for nd in self.nodes if nd.verified)

    def lines(self) -> list[str]:
        out = []
        for nd in self.nodes:
            status = "exact" if nd.exact else "NOT-EXACT"
            if not nd.verified:
                status += " (unverified)"
            out.append(f"{nd.name}[{nd.degree}] dim={nd.dim} {status}")
        return out


def _induced(f: la.Matrix, src: HomologyGroup, dst: HomologyGroup) -> la.Matrix:
    """Matrix of the map on homology induced by the chain map ``f``."""
    if not dst.dim:
        return la.zeros(0, src.dim)
    return la.from_columns([dst.coords(la.matvec(f, z)) for z in src.reps], dst.dim)


def _exact_at(f: la.Matrix, f_cols: int, g: la.Matrix, mid: int) -> bool:
    """im f == ker g for f: A -> X and g: X -> Y, with dim X = mid."""
    if not mid:
        return True
    if len(g) and f_cols and not la.is_zero(la.matmul(g, f, mid, f_cols)):
        return False
    rank_f = la.rank(f, f_cols) if f_cols else 0
    rank_g = la.rank(g, mid) if len(g) else 0
    return rank_f + rank_g == mid


def connes_sequence(m: MixedComplex, max_degree: int | None = None) -> LESReport:
    """Induced maps I, S, B on homology and exactness at every node.

    The sequence is ... -> H_n -I-> HC_n -S-> HC_{n-2} -B-> H_{n-1} -> ...
    with B[z] = [B z_0].  For each n the three nodes H_n, HC_n and the
    quotient copy of HC_{n-2} are checked.  Tot is formed exactly in every
    degree it is needed, so truncation never interferes and every node is
    verified; by default n runs up to ``top + 2``, past which S is an
    isomorphism and the pattern repeats.
    """
    report = validate(m)
    if not report.ok:
        raise InvalidComplexError(str(report))
    if max_degree is None:
        max_degree = m.top + 2
    tot = totalize(m, max_degree + 1)
    empty = HomologyGroup(0, 0, [], [])
    H = {n: _column_homology(m, n) if n >= 0 else empty for n in range(-2, max_degree + 2)}
    HC = {n: _tot_homology(tot, n) for n in range(-2, max_degree + 1)}

    def I_map(n):  # H_n -> HC_n, inclusion as the i = 0 summand
        if n < 0:
            return la.zeros(0, 0)
        inc = la.zeros(tot.dim(n), m.dim(n))
        for r, (i, k, j) in enumerate(tot.labels[n]):
            if i == 0:
                inc[r][j] = Fraction(1)
        return _induced(inc, H[n], HC[n])

    def S_map(n):  # HC_n -> HC_{n-2}, drop the i = 0 summand
        if n < 2:
            return la.zeros(0, HC[n].dim)
        proj = la.zeros(tot.dim(n - 2), tot.dim(n))
        pos = {(i, j): r for r, (i, k, j) in enumerate(tot.labels[n - 2])}
        for c, (i, k, j) in enumerate(tot.labels[n]):
            if i >= 1:
                proj[pos[(i - 1, j)]][c] = Fraction(1)
        return _induced(proj, HC[n], HC[n - 2])

    def B_map(n):  # HC_n -> H_{n+1}
        if n < 0:
            return la.zeros(H[n + 1].dim, 0)
        conn = la.zeros(m.dim(n + 1), tot.dim(n))
        Bn = m.B_at(n)
        for c, (i, k, j) in enumerate(tot.labels[n]):
            if i == 0:
                for r in range(m.dim(n + 1)):
                    conn[r][c] = Bn[r][j]
        return _induced(conn, HC[n], H[n + 1])

    maps: dict[tuple[str, int], la.Matrix] = {}
    for n in range(-1, max_degree + 1):
        maps[("I", n)] = I_map(n)
        maps[("S", n)] = S_map(n)
        maps[("B", n)] = B_map(n)

    nodes = []
    for n in range(0, max_degree + 1):
        # H_n: im(B: HC_{n-1} -> H_n) = ker I
        nodes.append(LESNode("H", n, H[n].dim,
                             _exact_at(maps[("B", n - 1)], HC[n - 1].dim, maps[("I", n)], H[n].dim)))
        # HC_n: im I = ker S
        nodes.append(LESNode("HC", n, HC[n].dim,
                             _exact_at(maps[("I", n)], H[n].dim, maps[("S", n)], HC[n].dim)))
        # HC_{n-2} as the target of S: im S = ker(B: HC_{n-2} -> H_{n-1})
        if n >= 2:
            nodes.append(LESNode("HC'", n - 2, HC[n - 2].dim,
                                 _exact_at(maps[("S", n)], HC[n].dim, maps[("B", n - 2)], HC[n - 2].dim)))
    return LESReport(nodes, maps,
                     {n: H[n].dim for n in range(0, max_degree + 1)},
                     {n: HC[n].dim for n in range(0, max_degree + 1)})


# complexes from cycles


def span_builder(seeds: Sequence[FormalCycle], n_cap: int = 6) -> tuple[MixedComplex, dict[int, list[FormalCycle]]]:
    """Finite mixed complex spanned by ``seeds`` under d' and delta.

    Returns the complex (with B = (-1)^n delta on degree n, so that bB + Bb = 0
    follows from d' delta = delta d') and the basis cycles per degree.
    """
    seeds = [s for s in seeds if s]
    if not seeds:
        return MixedComplex(GradedSpace({})), {}
    rings = {s.ring for s in seeds}
    if len(rings) != 1 or next(iter(rings)).e != 1:
        raise ValueError("seeds must share one embedding-dimension-1 ring")
    for s in seeds:
        if not is_reduced(s):
            raise ValueError(f"seed {s} is not in the reduced subcomplex")
        if s.n > n_cap:
            raise CapExceededError(f"seed in degree {s.n} above cap {n_cap}")

    generated: dict[int, list[FormalCycle]] = {}
    queue = list(seeds)
    seen: list[FormalCycle] = []
    while queue:
        c = queue.pop()
        if any(c == s for s in seen):
            continue
        seen.append(c)
        generated.setdefault(c.n, []).append(c)
        if c.n >= 1:
            bc = boundary(c, "reduced")
            if bc:
                queue.append(bc)
        dc = delta(c)
        if dc:
            if dc.n > n_cap:
                raise CapExceededError(f"delta leaves the cap {n_cap} at degree {dc.n}")
            queue.append(dc)

    # per degree: coordinates over the terms that occur, then an independent subset
    basis: dict[int, list[FormalCycle]] = {}
    term_index: dict[int, dict] = {}
    for n, cycles in generated.items():
        terms = sorted({t for c in cycles for t in c.terms}, key=lambda t: t.sort_key())
        index = {t: i for i, t in enumerate(terms)}
        vecs = [_vector(c, index) for c in cycles]
        keep = la.independent_columns(vecs, len(terms))
        basis[n] = [cycles[i] for i in keep]
        term_index[n] = index

    def coords(c: FormalCycle, n: int) -> la.Vector:
        vecs = [_vector(x, term_index[n]) for x in basis[n]]
        x = la.solve(la.from_columns(vecs, len(term_index[n])), _vector(c, term_index[n]), len(vecs))
        if x is None:
            raise AssertionError(f"{c} escaped the span in degree {n}")
        return x

    dims = {n: len(v) for n, v in basis.items()}
    bmaps, Bmaps = {}, {}
    for n, cycles in basis.items():
        if n >= 1 and dims.get(n - 1):
            cols = []
            for c in cycles:
                bc = boundary(c, "reduced")
                cols.append(coords(bc, n - 1) if bc else [Fraction(0)] * dims[n - 1])
            bmaps[n] = la.from_columns(cols, dims[n - 1])
        if dims.get(n + 1):
            cols = []
            for c in cycles:
                dc = delta(c) * (-1) ** n
                cols.append(coords(dc, n + 1) if dc else [Fraction(0)] * dims[n + 1])
            Bmaps[n] = la.from_columns(cols, dims[n + 1])
    labels = {n: [str(c) for c in cs] for n, cs in basis.items()}
    return MixedComplex(GradedSpace(dims, labels), bmaps, Bmaps), basis


def _vector(c: FormalCycle, index: dict) -> la.Vector:
    v = [Fraction(0)] * len(index)
    for t, k in c.terms.items():
        v[index[t]] = Fraction(k)
    return v


# random fixtures


def random_mixed_complex(rng: random.Random, max_total_dim: int = 40, max_degree: int = 5) -> MixedComplex:
    """Direct sum of small indecomposable pieces under a random change of basis.

    Pieces: a lone line; b: V_n ~ V_{n-1}; B: V_n ~ V_{n+1}; and the square
    x, bx, Bx, bBx = -Bbx.
    """
    pieces: list[list[tuple[int, str]]] = []
    total = 0
    budget = rng.randint(0, max_total_dim)
    while total < budget:
        kind = rng.choice(["line", "b", "B", "square"])
        n = rng.randint(0, max_degree)
        size = {"line": 1, "b": 2, "B": 2, "square": 4}[kind]
        if total + size > max_total_dim:
            break
        if kind in ("b", "square") and n < 1:
            continue
        if kind in ("B", "square") and n + 1 > max_degree:
            continue
        pieces.append([(n, kind)])
        total += size

    dims: dict[int, int] = {}
    elems = []  # (degree, index) of each basis element per piece
    bmap, Bmap = [], []  # entries (src elem, dst elem, coeff)

    def new(n):
        idx = dims.get(n, 0)
        dims[n] = idx + 1
        elems.append((n, idx))
        return len(elems) - 1

    for (n, kind), in pieces:
        if kind == "line":
            new(n)
        elif kind == "b":
            x, y = new(n), new(n - 1)
            bmap.append((x, y, 1))
        elif kind == "B":
            x, z = new(n), new(n + 1)
            Bmap.append((x, z, 1))
        else:
            x, y, z, w = new(n), new(n - 1), new(n + 1), new(n)
            bmap.append((x, y, 1))
            Bmap.append((x, z, 1))
            bmap.append((z, w, 1))
            Bmap.append((y, w, -1))

    def mat(entries, shift):
        out = {}
        for src, dst, c in entries:
            (n, i), (k, j) = elems[src], elems[dst]
            assert k == n + shift
            out.setdefault(n, la.zeros(dims[k], dims[n]))[j][i] += Fraction(c)
        return out

    b, B = mat(bmap, -1), mat(Bmap, 1)
    # random invertible change of basis per degree
    P, Pinv = {}, {}
    for n, dn in dims.items():
        while True:
            p = [[Fraction(rng.randint(-2, 2)) for _ in range(dn)] for _ in range(dn)]
            if la.rank(p, dn) == dn:
                break
        P[n] = p
        aug = [row + [Fraction(int(i == j)) for j in range(dn)] for i, row in enumerate(p)]
        r, _ = la.rref(aug, 2 * dn)
        Pinv[n] = [row[dn:] for row in r]

    def conj(maps, shift):
        out = {}
        for n, m_ in maps.items():
            k = n + shift
            out[n] = la.matmul(la.matmul(P[k], m_, dims[k], dims[n]), Pinv[n], dims[n], dims[n])
        return out

    return MixedComplex(GradedSpace(dict(dims)), conj(b, -1), conj(B, 1))


# file format


def dump_complex(m: MixedComplex) -> str:
    def enc(mat):
        return [[str(x) for x in row] for row in mat]

    doc = {
        "dims": {str(n): d for n, d in sorted(m.space.dims.items())},
        "b": {str(n): enc(x) for n, x in sorted(m.b.items())},
        "B": {str(n): enc(x) for n, x in sorted(m.B.items())},
    }
    if m.space.labels:
        doc["labels"] = {str(n): v for n, v in sorted(m.space.labels.items())}
    return json.dumps(doc, indent=2)


def load_complex(text: str) -> MixedComplex:
    try:
        doc = json.loads(text)
        dims = {int(n): int(d) for n, d in doc["dims"].items()}
        b = {int(n): la.as_matrix(x) for n, x in doc.get("b", {}).items()}
        B = {int(n): la.as_matrix(x) for n, x in doc.get("B", {}).items()}
        labels = {int(n): list(v) for n, v in doc.get("labels", {}).items()}
    except (KeyError, ValueError, TypeError, AttributeError) as exc:
        raise InvalidComplexError(f"malformed complex file: {exc}") from None
    return MixedComplex(GradedSpace(dims, labels), b, B)
