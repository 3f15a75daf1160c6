"""Verification suites: the symbolic corpus and every identity check, as
small picklable tasks so they can be fanned out to worker processes.

Each task runs one check and returns a ``CheckResult``.  Some suites also
need a run-wide property (one global sign for all cases); those are added
by ``finish`` after the per-case results are in.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from . import linalg as la
from .cycles import (
    FormalCycle,
    MobiusCurve,
    ModulusRing,
    SlotSpace,
    act,
    boundary,
    concat,
    connes_derivation_check,
    delta,
    face,
    is_reduced,
    point,
    shuffle_product,
    totaro_c2,
    wedge,
)
from .field import Mobius, var
from .forms import form_wedge, reg, reg_delta_factor_check
from .mixedcx import (
    MixedComplex,
    _column_homology,
    _tot_homology,
    connes_sequence,
    random_mixed_complex,
    span_builder,
    totalize,
    validate,
)
from .perm import Permutation, enumerate_shuffles, phi_domain, phi_map, shuffle_count, shuffle_lemma_check

__all__ = [
    "SUITES",
    "CheckResult",
    "Task",
    "RunConfig",
    "build_suite",
    "run_suite",
    "point_corpus",
    "curve_corpus",
    "reduced_corpus",
    "span_fixtures",
    "homology_oracle",
]

SUITES = ("shuffle", "delta", "leibniz", "derivation", "forms", "mixedcx")
DERIVATION_CASES = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1))


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    ok: bool
    detail: str = ""
    value: int | None = None

    @property
    def status(self) -> str:
        return "PASS" if self.ok else "FAIL"


@dataclass(frozen=True)
class Task:
    check_id: str
    func: Callable
    args: tuple = ()

    def run(self) -> CheckResult:
        try:
            ok, detail, value = self.func(*self.args)
        except Exception as exc:  # a crash is a failed check, not a crashed run
            return CheckResult(self.check_id, False, f"error: {type(exc).__name__}: {exc}")
        return CheckResult(self.check_id, ok, detail, value)


@dataclass(frozen=True)
class RunConfig:
    max_n: int | None = None
    r1: int | None = None
    r2: int | None = None
    fixtures: int = 100
    seed: int = 0
    jobs: int = 1


# corpus


def _ring() -> ModulusRing:
    return ModulusRing((2,))


def point_corpus(max_n: int = 3, prefix: str = "t", a: str = "x") -> list[FormalCycle]:
    """(x; t1, ..., tn) for n = 0..max_n with independent symbols."""
    return [FormalCycle.of(point(var(a), *(var(f"{prefix}{i}") for i in range(1, n + 1))), _ring())
            for n in range(max_n + 1)]


def reduced_curve() -> FormalCycle:
    """(a; s, 1 - s, (s + beta)/(s - 1)): only the last zero face survives."""
    c = MobiusCurve((var("a"),), (Mobius.identity(), Mobius(-1, 1, 0, 1), Mobius(1, var("beta"), 1, -1)))
    return FormalCycle.of(c, _ring())


def curve_corpus(max_n: int = 4) -> list[tuple[str, FormalCycle]]:
    """Named Mobius-curve cycles with at most ``max_n`` box slots."""
    a, b1, b2 = var("a"), var("b1"), var("b2")
    t3, t4 = var("t3"), var("t4")
    out = [
        ("C2", totaro_c2(a, b1, b2)),
        ("C2 x (t3)", totaro_c2(a, b1, b2, (t3,))),
        ("C2 x (t3, t4)", totaro_c2(a, b1, b2, (t3, t4))),
        ("(t3) x C2", act(Permutation((2, 3, 1)), totaro_c2(a, b1, b2, (t3,)))),
        ("(c; s, (s-p)/(s-q))", FormalCycle.of(
            MobiusCurve((var("c"),), (Mobius.identity(), Mobius(1, -var("p"), 1, -var("q")))), _ring())),
        ("R", reduced_curve()),
    ]
    return [(name, c) for name, c in out if c.n <= max_n]


def reduced_corpus() -> list[tuple[str, FormalCycle]]:
    """Reduced cycles: points, the reduced curve, and delta-images of both."""
    out = [(f"point n={c.n}", c) for c in point_corpus(3)]
    r = reduced_curve()
    out.append(("R", r))
    out.append(("delta (a; t1, t2)", delta(FormalCycle.of(point(var("a"), var("t1"), var("t2")), _ring()))))
    out.append(("R + delta (a; t1, t2)", r + delta(FormalCycle.of(point(var("a"), var("t1"), var("t2")), _ring()))))
    return out


def span_fixtures() -> list[tuple[str, list[FormalCycle]]]:
    u = var("u")
    pts = point_corpus(2, a="u")
    return [
        ("seed (u)", [FormalCycle.of(point(u), _ring())]),
        ("seed (u; t1)", [pts[1]]),
        ("seeds (u), (u; t1), (u; t1, t2)", pts),
        ("seed R", [reduced_curve()]),
        ("seeds (u), R", [pts[0], reduced_curve()]),
        ("seeds (u; t1), R, (a; t1, t2)", [pts[1], reduced_curve(),
                                           FormalCycle.of(point(var("a"), var("t1"), var("t2")), _ring())]),
    ]


# shuffle suite


def _shuffle_lemma(which: int, r: int, s: int):
    rep = shuffle_lemma_check(which, r, s)
    return rep.equal, f"{len(rep.rhs.terms)} terms", None


def _phi_bijection(kind: str, r: int, s: int):
    sig_t, tau_t = phi_domain(kind, r, s)
    image = [phi_map(kind, sg, tu, r, s) for sg in enumerate_shuffles(sig_t) for tu in enumerate_shuffles(tau_t)]
    target = set(enumerate_shuffles((1, r, s)))
    expected = shuffle_count((1, r, s))
    ok = len(set(image)) == len(image) == expected and set(image) == target
    return ok, f"|image| = {len(set(image))}, |Perm(1,{r},{s})| = {expected}", None


def _shuffle_tasks(cfg: RunConfig) -> list[Task]:
    max_n = 6 if cfg.max_n is None else cfg.max_n
    tasks = []
    for total in range(max_n + 1):
        for r in range(total + 1):
            s = total - r
            for which in (1, 2, 3):
                tasks.append(Task(f"Lemma multiple-shuffle {which}, (r,s)=({r},{s})", _shuffle_lemma, (which, r, s)))
            for k in (1, 2, 3):
                tasks.append(Task(f"phi{k} bijection, (r,s)=({r},{s})", _phi_bijection, (f"phi{k}", r, s)))
    return tasks


# delta suite


def _delta_squared(n: int):
    c = point_corpus(n)[n]
    return delta(delta(c)).is_zero(), f"n={n}", None


def _delta_identity(n: int):
    c = point_corpus(n)[n]
    bad = []
    for j in range(1, n + 2):
        for i in range(1, n + 3):
            lhs = delta(delta(c, j), i)
            rhs = delta(delta(c, i), j + 1) if i <= j else delta(delta(c, i - 1), j)
            if lhs != rhs:
                bad.append((i, j))
    return not bad, f"n={n}" + (f", failing (i,j): {bad}" if bad else ""), None


def _partial_delta(name: str, max_n: int):
    c = dict(curve_corpus(max_n))[name]
    n = c.n
    bad = []
    for k in range(1, n + 2):
        dk = delta(c, k)
        for i in range(1, n + 2):
            for j in ("0", "inf"):
                lhs = face(dk, i, j)
                if i < k:
                    rhs = delta(face(c, i, j), k - 1)
                elif i == k:
                    rhs = None
                else:
                    rhs = delta(face(c, i - 1, j), k)
                if (rhs is None and lhs) or (rhs is not None and lhs != rhs):
                    bad.append((i, j, k))
    return not bad, f"n={n}" + (f", failing (i,j,k): {bad}" if bad else ""), None


def _descension(name: str):
    """delta_k keeps a reduced cycle reduced for k <= n; for k = n+1 exactly
    when d'c = 0, since d_n^0 delta_{n+1} = delta_n d_n^0."""
    c = dict(reduced_corpus())[name]
    if not is_reduced(c):
        return False, "corpus element is not reduced", None
    bad = [k for k in range(1, c.n + 1) if not is_reduced(delta(c, k))]
    last_reduced = is_reduced(delta(c, c.n + 1))
    killed = c.n == 0 or boundary(c, "reduced").is_zero()
    if last_reduced != killed:
        bad.append(c.n + 1)
    detail = f"delta_{c.n + 1} c reduced: {last_reduced}, d'c = 0: {killed}"
    return not bad, detail if not bad else f"{detail}; unexpected k in {bad}", None


def _commutation(name: str):
    c = dict(reduced_corpus())[name]
    if c.n == 0:
        return boundary(delta(c), "reduced").is_zero(), "n=0: d' delta c = 0", None
    lhs = boundary(delta(c), "reduced")
    rhs = delta(boundary(c, "reduced"))
    return lhs == rhs, f"n={c.n}", None


def _delta_as_shuffle(n: int):
    c = point_corpus(n)[n]
    d1 = delta(c, 1)
    alt = FormalCycle.zero(d1.space)
    for tau in enumerate_shuffles((1, n)):
        alt = alt + tau.sign() * act(tau, d1)
    return delta(c) == -alt, f"n={n}", None


def _delta_tasks(cfg: RunConfig) -> list[Task]:
    max_n = 5 if cfg.max_n is None else cfg.max_n
    tasks = []
    for n in range(max_n + 1):
        tasks.append(Task(f"Corollary delta-squared, n={n}", _delta_squared, (n,)))
        tasks.append(Task(f"Lemma delta-identity, n={n}", _delta_identity, (n,)))
    for n in range(min(max_n, 4) + 1):
        tasks.append(Task(f"Remark delta-as-shuffle-sum, n={n}", _delta_as_shuffle, (n,)))
    for name, _ in curve_corpus(min(max_n, 4)):
        tasks.append(Task(f"Lemma partial-delta, {name}", _partial_delta, (name, min(max_n, 4))))
    for name, _ in reduced_corpus():
        tasks.append(Task(f"Lemma descension (k = n+1 iff d'c = 0), {name}", _descension, (name,)))
        tasks.append(Task(f"Theorem delta-commutes, {name}", _commutation, (name,)))
    return tasks


# leibniz suite


def _leibniz_pairs() -> list[tuple[str, FormalCycle, FormalCycle]]:
    pts = point_corpus(2, prefix="u", a="y")
    out = []
    for cname, c in curve_corpus(3):
        for p in pts:
            out.append((f"{cname} * (y; {p.n} slots)", c, p))
            out.append((f"(y; {p.n} slots) * {cname}", p, c))
    return out


def _leibniz(label: str, product: str):
    x, y = next((x, y) for lab, x, y in _leibniz_pairs() if lab == label)
    mul = concat if product == "x" else shuffle_product
    lhs = boundary(mul(x, y))
    bx, by = boundary(x), boundary(y)
    rhs = FormalCycle.zero(lhs.space, True)
    if x.n:
        rhs = rhs + mul(bx, y)
    if y.n:
        rhs = rhs + (-1) ** x.n * mul(x, by)
    if lhs == rhs:
        return True, f"{len(lhs)} terms", None
    return False, f"lhs - rhs = {lhs - rhs}", None


def _graded_commutativity(label: str):
    x, y = next((x, y) for lab, x, y in _leibniz_pairs() if lab == label)
    lhs = mu_swap(shuffle_product(x, y))
    rhs = shuffle_product(y, x) * (-1) ** (x.n * y.n)
    return lhs == rhs, f"r1={x.n}, r2={y.n}", None


def mu_swap(c: FormalCycle) -> FormalCycle:
    """Swap the two affine factors so x *sh y and y *sh x live in one space."""
    terms = {type(t)((t.a[1], t.a[0]), t.box): k for t, k in c}
    return FormalCycle(SlotSpace(ModulusRing(c.ring.m[::-1]), c.n), terms, c.decomposable)


def _leibniz_tasks(cfg: RunConfig) -> list[Task]:
    tasks = []
    for label, x, y in _leibniz_pairs():
        tasks.append(Task(f"Proposition Leibniz (concatenation), {label}", _leibniz, (label, "x")))
        tasks.append(Task(f"Proposition Leibniz (shuffle), {label}", _leibniz, (label, "sh")))
        tasks.append(Task(f"Remark graded-commutativity, {label}", _graded_commutativity, (label,)))
    return tasks


# derivation suite


def _totaro_boundary():
    a, b1, b2 = var("a"), var("b1"), var("b2")
    got = boundary(totaro_c2(a, b1, b2))
    pts = lambda *box: FormalCycle.of(point(1 / a, *box), _ring())  # noqa: E731
    want = pts(b1) + pts(b2) - pts(b1 * b2)
    return got == want, str(got), None


def _derivation(r1: int, r2: int):
    xi = FormalCycle.of(point(var("x"), *(var(f"t{i}") for i in range(1, r1 + 1))), _ring())
    eta = FormalCycle.of(point(var("y"), *(var(f"u{i}") for i in range(1, r2 + 1))), _ring())
    rep = connes_derivation_check(xi, eta)
    if rep.global_sign is None:
        return False, f"lhs and rhs differ beyond sign ({len(rep.lhs)} vs {len(rep.rhs)} terms)", None
    return True, f"lhs = {rep.global_sign:+d} * rhs, {len(rep.lhs)} terms", rep.global_sign


def _derivation_tasks(cfg: RunConfig) -> list[Task]:
    tasks = [Task("Lemma cycle-C2 boundary", _totaro_boundary)]
    if cfg.r1 is not None or cfg.r2 is not None:
        cases = [(cfg.r1 or 0, cfg.r2 or 0)]
    else:
        cases = list(DERIVATION_CASES)
    for r1, r2 in cases:
        tasks.append(Task(f"Proposition Connes-derivation, (r1,r2)=({r1},{r2})", _derivation, (r1, r2)))
    return tasks


# forms suite


def _reg_boundary(name: str):
    c = dict(curve_corpus(4))[name]
    w = reg(boundary(c))
    return w.is_zero(), str(w), None


def _reg_delta(n: int):
    c = point_corpus(n, a="u", prefix="v")[n]
    rep = reg_delta_factor_check(c)
    if not rep.ok:
        return False, f"factor {rep.factor}, expected {n + 1}", None
    return True, f"reg(delta c) = {rep.sign * rep.factor:+d} d reg(c)", rep.sign


def _r_relation(n: int):
    a = var("a")
    extra = [var(f"b{i}") for i in range(1, n)]
    c1 = FormalCycle.of(point(1 / a, a, *extra), _ring())
    c2 = FormalCycle.of(point(1 / (1 - a), 1 - a, *extra), _ring())
    w = reg(c1 + c2)
    return w.is_zero(), f"n={n}: {w}", None


def _reg_wedge(r1: int, r2: int):
    xi = FormalCycle.of(point(var("x"), *(var(f"t{i}") for i in range(1, r1 + 1))), _ring())
    eta = FormalCycle.of(point(var("y"), *(var(f"u{i}") for i in range(1, r2 + 1))), _ring())
    lhs = reg(wedge(xi, eta))
    rhs = form_wedge(reg(xi), reg(eta)).scale(comb(r1 + r2, r1))
    return lhs == rhs, f"factor binomial({r1 + r2},{r1}) = {comb(r1 + r2, r1)}", None


def _forms_tasks(cfg: RunConfig) -> list[Task]:
    max_n = 4 if cfg.max_n is None else cfg.max_n
    tasks = [Task(f"reg kills boundaries, {name}", _reg_boundary, (name,)) for name, _ in curve_corpus(4)]
    tasks += [Task(f"Corollary (n+1)d, n={n}", _reg_delta, (n,)) for n in range(max_n + 1)]
    tasks += [Task(f"Lemma differential R-relation, n={n}", _r_relation, (n,)) for n in range(1, max_n + 1)]
    tasks += [Task(f"reg of wedge, (r1,r2)=({r1},{r2})", _reg_wedge, (r1, r2))
              for r1 in range(3) for r2 in range(3) if r1 + r2 <= max_n]
    return tasks


# mixed complex suite


def homology_oracle(m: MixedComplex, degrees: Sequence[int], tot=None) -> tuple[dict[int, int], dict[int, int]]:
    """Column and cyclic homology dimensions by rank-nullity.

    Ranks come from sympy's domain matrices over QQ, independent of the
    elimination code in ``linalg``.
    """

    def rk(mat, cols):
        if not mat or not cols:
            return 0
        rows = [[QQ(x.numerator, x.denominator) for x in row] for row in mat]
        return DomainMatrix(rows, (len(rows), cols), QQ).rank()

    col = {n: m.dim(n) - rk(m.b_at(n), m.dim(n)) - rk(m.b_at(n + 1), m.dim(n + 1)) for n in degrees}
    if tot is None:
        tot = totalize(m, max(degrees) + 1)
    cyc = {n: tot.dim(n) - rk(tot.d.get(n), tot.dim(n)) - rk(tot.d.get(n + 1), tot.dim(n + 1)) for n in degrees}
    return col, cyc


def check_mixed_complex(m: MixedComplex) -> tuple[bool, str]:
    v = validate(m)
    if not v.ok:
        return False, str(v)
    top = m.top + 2
    tot = totalize(m, top + 1)
    for n in range(2, top + 2):
        if not la.is_zero(la.matmul(tot.d[n - 1], tot.d[n], tot.dim(n - 1), tot.dim(n))):
            return False, f"d^2 != 0 on Tot at degree {n}"
    degrees = list(range(0, top + 1))
    col, cyc = homology_oracle(m, degrees, tot)
    for n in degrees:
        if _column_homology(m, n).dim != col[n]:
            return False, f"column homology mismatch at degree {n}"
        if _tot_homology(tot, n).dim != cyc[n]:
            return False, f"cyclic homology mismatch at degree {n}"
    rep = connes_sequence(m, top)
    bad = [f"{nd.name}[{nd.degree}]" for nd in rep.nodes if not nd.exact]
    if bad:
        return False, f"not exact at {', '.join(bad)}"
    return True, f"dims {dict(sorted(m.space.dims.items()))}, {len(rep.nodes)} nodes exact"


def _random_fixture(seed: int, index: int):
    rng = random.Random(seed * 1_000_003 + index)
    m = random_mixed_complex(rng, max_total_dim=40)
    ok, detail = check_mixed_complex(m)
    return ok, detail, None


def _span_fixture(label: str):
    seeds = dict(span_fixtures())[label]
    m, _ = span_builder(seeds)
    ok, detail = check_mixed_complex(m)
    return ok, detail, None


def _mixedcx_tasks(cfg: RunConfig) -> list[Task]:
    tasks = [Task(f"Theorem Connes-periodicity, span {label}", _span_fixture, (label,)) for label, _ in span_fixtures()]
    tasks += [Task(f"Theorem Connes-periodicity, random fixture {i}", _random_fixture, (cfg.seed, i))
              for i in range(cfg.fixtures)]
    return tasks


# driving


_BUILDERS = {
    "shuffle": _shuffle_tasks,
    "delta": _delta_tasks,
    "leibniz": _leibniz_tasks,
    "derivation": _derivation_tasks,
    "forms": _forms_tasks,
    "mixedcx": _mixedcx_tasks,
}

_SIGNED = {"derivation": "global sign epsilon", "forms": "global sign epsilon'"}


def build_suite(name: str, cfg: RunConfig) -> list[Task]:
    if name not in _BUILDERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _BUILDERS[name](cfg)


def _run(task: Task) -> CheckResult:
    return task.run()


def finish(name: str, results: list[CheckResult]) -> list[CheckResult]:
    """Append run-wide checks, e.g. that a sign is the same in every case."""
    if name not in _SIGNED:
        return results
    signs = {r.value for r in results if r.value is not None}
    ok = len(signs) == 1 and all(r.ok for r in results if r.value is not None)
    detail = f"epsilon = {next(iter(signs)):+d}" if len(signs) == 1 else f"signs seen: {sorted(signs)}"
    return results + [CheckResult(f"{_SIGNED[name]}, {name} suite", ok, detail, next(iter(signs)) if len(signs) == 1 else None)]


def run_suite(name: str, cfg: RunConfig = RunConfig()) -> list[CheckResult]:
    """Run a suite; results come back in task order whatever ``cfg.jobs`` is."""
    tasks = build_suite(name, cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_run, tasks, chunksize=max(1, len(tasks) // (4 * cfg.jobs))))
    else:
        results = [t.run() for t in tasks]
    return finish(name, results)
