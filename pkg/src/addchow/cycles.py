"""Additive cycles at the level of rational points and Mobius curves.

A cycle lives in A^e x box^n, box = P^1 - {1}.  Terms are either
``PointCycle`` (a k-rational point) or ``MobiusCurve`` (a rational curve
whose A^e coordinates are constant and whose box coordinates are constants
or degree-one maps of one parameter).  A ``FormalCycle`` is an integer
combination of terms sharing one ``SlotSpace``.

Face maps intersect with {t_i = 0} or {t_i = inf}.  A face point with a box
coordinate equal to 1 lies outside box^(n-1) and contributes nothing; one
landing on 0 or inf means the curve meets a deeper face and is rejected as
an improper intersection.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .field import INF, Mobius, ProjValue, RatFunc, mobius_eval, mobius_solve
from .perm import Permutation, act_on_slots, enumerate_shuffles

__all__ = [
    "ModulusRing",
    "SlotSpace",
    "PointCycle",
    "MobiusCurve",
    "FormalCycle",
    "AdmissibilityError",
    "ImproperIntersectionError",
    "UnsupportedProductError",
    "admissible",
    "face",
    "boundary",
    "delta_k",
    "delta",
    "is_reduced",
    "act",
    "concat",
    "shuffle_product",
    "mu_push",
    "wedge",
    "totaro_c2",
    "extra_degenerate_concat",
    "cyclic_shuffle",
    "block_permutation",
    "connes_derivation_check",
    "DerivationReport",
    "point",
]

ZERO, INFINITY = "0", "inf"


class AdmissibilityError(ValueError):
    pass


class ImproperIntersectionError(ValueError):
    pass


class UnsupportedProductError(ValueError):
    pass


@dataclass(frozen=True)
class ModulusRing:
    """k[x_1..x_e]/(x_1^m_1, ..., x_e^m_e), recorded by its exponents."""

    m: tuple[int, ...] = (2,)

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        if any(k < 1 for k in self.m):
            raise ValueError("modulus exponents must be >= 1")

    @property
    def e(self) -> int:
        return len(self.m)

    def tensor(self, other: "ModulusRing") -> "ModulusRing":
        return ModulusRing(self.m + other.m)

    def min_with(self, other: "ModulusRing") -> "ModulusRing":
        if self.e != 1 or other.e != 1:
            raise ValueError("min{A1, A2} needs embedding dimension 1 on both sides")
        return ModulusRing((min(self.m[0], other.m[0]),))

    def __str__(self):
        return " ".join(map(str, self.m))


def modulus_ring_ops(op: str, r1: ModulusRing, r2: ModulusRing) -> ModulusRing:
    if op == "tensor":
        return r1.tensor(r2)
    if op == "min":
        return r1.min_with(r2)
    raise ValueError(f"unknown ring operation {op!r}")


@dataclass(frozen=True)
class SlotSpace:
    ring: ModulusRing
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("number of box slots must be >= 0")


# terms


@dataclass(frozen=True)
class PointCycle:
    a: tuple[RatFunc, ...]
    box: tuple[RatFunc, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(RatFunc.coerce(x) for x in self.a))
        box = []
        for t in self.box:
            if isinstance(t, ProjValue):
                if t.is_infinite:
                    raise AdmissibilityError("point with a box coordinate at infinity")
                t = t.value
            box.append(RatFunc.coerce(t))
        object.__setattr__(self, "box", tuple(box))

    @property
    def is_curve(self) -> bool:
        return False

    def with_box(self, box: Sequence) -> "PointCycle":
        return PointCycle(self.a, tuple(box))

    def sort_key(self):
        return (0, tuple(map(str, self.a)), tuple(map(str, self.box)))

    def __str__(self):
        return f"({', '.join(map(str, self.a))}; {', '.join(map(str, self.box))})"


BoxCoord = Union[RatFunc, Mobius]


@dataclass(frozen=True)
class MobiusCurve:
    """Rational curve s -> (a; m_1(s), ..., m_n(s)).

    Stored in the canonical parametrization where the first non-constant
    box coordinate is the identity map, so equal curves compare equal.
    """

    a: tuple[RatFunc, ...]
    box: tuple[BoxCoord, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(RatFunc.coerce(x) for x in self.a))
        box: list[BoxCoord] = []
        for t in self.box:
            if isinstance(t, Mobius) and t.is_constant:
                t = t.beta
            elif isinstance(t, ProjValue):
                if t.is_infinite:
                    raise AdmissibilityError("constant box coordinate at infinity")
                t = t.value
            elif not isinstance(t, Mobius):
                t = RatFunc.coerce(t)
            box.append(t)
        moving = [t for t in box if isinstance(t, Mobius)]
        if not moving:
            raise AdmissibilityError("curve with no moving box coordinate")
        first = moving[0]
        if not first.is_identity():
            inv = first.inverse()
            box = [t.compose(inv) if isinstance(t, Mobius) else t for t in box]
        object.__setattr__(self, "box", tuple(box))

    @property
    def is_curve(self) -> bool:
        return True

    def with_box(self, box: Sequence) -> "MobiusCurve":
        return MobiusCurve(self.a, tuple(box))

    def at(self, s: ProjValue) -> list[ProjValue]:
        return [mobius_eval(t, s) if isinstance(t, Mobius) else ProjValue(t) for t in self.box]

    def box_strings(self, param: str = "s") -> list[str]:
        return [t.to_string(param) if isinstance(t, Mobius) else str(t) for t in self.box]

    def sort_key(self):
        return (1, tuple(map(str, self.a)), tuple(self.box_strings("s")))

    def __str__(self):
        return f"({', '.join(map(str, self.a))}; {', '.join(self.box_strings('s'))})"


Term = Union[PointCycle, MobiusCurve]


def point(a, *box) -> PointCycle:
    """``point(x, t1, t2)`` or ``point((x, y), t1)`` for e = 2."""
    a = tuple(a) if isinstance(a, (tuple, list)) else (a,)
    return PointCycle(a, tuple(box))


def admissible(term: Term, ring: ModulusRing | None = None) -> tuple[bool, str]:
    """Check the point/curve admissibility conditions, with a diagnostic."""
    if ring is not None and len(term.a) != ring.e:
        return False, f"expected {ring.e} affine coordinates, got {len(term.a)}"
    for x in term.a:
        if x.is_zero():
            return False, "affine coordinate 0: modulus check unsupported/violated"
    for i, t in enumerate(term.box, start=1):
        if isinstance(t, Mobius):
            # a non-constant Mobius map meets 0 and inf exactly once each
            continue
        if t.is_zero():
            return False, f"box coordinate {i} is 0: point meets a face"
        if t.is_one():
            return False, f"box coordinate {i} is 1: outside box"
    return True, "ok"


# formal sums


@dataclass
class FormalCycle:
    space: SlotSpace
    terms: dict = field(default_factory=dict)
    decomposable: bool = False

    def __post_init__(self):
        clean: Counter = Counter()
        for t, c in self.terms.items():
            if not c:
                continue
            if len(t.box) != self.space.n:
                raise ValueError(f"term {t} has {len(t.box)} box slots, space has {self.space.n}")
            ok, why = admissible(t, self.space.ring)
            if not ok:
                raise AdmissibilityError(f"{t}: {why}")
            clean[t] += c
        self.terms = {t: c for t, c in clean.items() if c}

    @classmethod
    def zero(cls, space: SlotSpace, decomposable: bool = False) -> "FormalCycle":
        return cls(space, {}, decomposable)

    @classmethod
    def of(cls, term: Term, ring: ModulusRing | None = None, coeff: int = 1) -> "FormalCycle":
        if ring is None:
            ring = ModulusRing((2,) * len(term.a))
        return cls(SlotSpace(ring, len(term.box)), {term: coeff})

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def ring(self) -> ModulusRing:
        return self.space.ring

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Term, int]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "FormalCycle"):
        if self.space != other.space:
            raise ValueError(f"cannot combine cycles in {self.space} and {other.space}")

    def __add__(self, other: "FormalCycle") -> "FormalCycle":
        self._check(other)
        acc = Counter(self.terms)
        acc.update(other.terms)
        return FormalCycle(self.space, dict(acc), self.decomposable and other.decomposable)

    def __neg__(self):
        return FormalCycle(self.space, {t: -c for t, c in self.terms.items()}, self.decomposable)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return FormalCycle(self.space, {t: k * c for t, c in self.terms.items()}, self.decomposable)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, FormalCycle):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def has_curves(self) -> bool:
        return any(t.is_curve for t in self.terms)

    def dimension(self) -> int | None:
        """Dimension of the terms (0 for points, 1 for curves); None if mixed or empty."""
        dims = {1 if t.is_curve else 0 for t in self.terms}
        return dims.pop() if len(dims) == 1 else None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t, c in self:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {mag}{t}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s

    __repr__ = __str__


def _linear(c: FormalCycle, space: SlotSpace, fn, decomposable: bool | None = None) -> FormalCycle:
    """Apply a term -> FormalCycle-or-None map linearly."""
    acc: Counter = Counter()
    for t, k in c.terms.items():
        out = fn(t)
        if out is None:
            continue
        for u, j in out.items():
            acc[u] += k * j
    dec = c.decomposable if decomposable is None else decomposable
    return FormalCycle(space, dict(acc), dec)


# faces and boundaries


def _face_term(t: Term, i: int, j: str) -> dict | None:
    if not t.is_curve:
        return None
    m = t.box[i - 1]
    target = ProjValue(0) if j == ZERO else INF
    if not isinstance(m, Mobius):
        if ProjValue(m) == target:
            raise ImproperIntersectionError(f"box coordinate {i} of {t} is constantly {j}")
        return None
    s = mobius_solve(m, target)
    values = t.at(s)
    rest = values[:i - 1] + values[i:]
    if any(v.is_one() for v in rest):
        return None
    for v in rest:
        if v.is_infinite or v.is_zero():
            raise ImproperIntersectionError(f"face ({i}, {j}) of {t} lands on a deeper face")
    return {PointCycle(t.a, tuple(v.value for v in rest)): 1}


def face(c: FormalCycle, i: int, j: str) -> FormalCycle:
    """Intersection with the face {t_i = j}, j in {"0", "inf"}."""
    if j not in (ZERO, INFINITY):
        raise ValueError("face value must be '0' or 'inf'")
    if not 1 <= i <= c.n:
        raise ValueError(f"face index {i} outside 1..{c.n}")
    return _linear(c, SlotSpace(c.ring, c.n - 1), lambda t: _face_term(t, i, j))


def boundary(c: FormalCycle, mode: str = "full") -> FormalCycle:
    """``full``: sum_i (-1)^i (d_i^0 - d_i^inf); ``reduced``: d_n^0 only."""
    if mode == "reduced":
        if c.n == 0:
            raise ValueError("no box slots to take a face of")
        return face(c, c.n, ZERO)
    if mode != "full":
        raise ValueError(f"unknown boundary mode {mode!r}")
    out = FormalCycle.zero(SlotSpace(c.ring, max(c.n - 1, 0)), c.decomposable)
    if c.n == 0:
        return out
    for i in range(1, c.n + 1):
        sign = -1 if i % 2 else 1
        out = out + sign * (face(c, i, ZERO) - face(c, i, INFINITY))
    return out


def is_reduced(c: FormalCycle) -> bool:
    """Killed by every face except the last zero face."""
    for i in range(1, c.n + 1):
        for j in (ZERO, INFINITY):
            if i == c.n and j == ZERO:
                continue
            if face(c, i, j):
                return False
    return True


# the operator delta


def delta_k(c: FormalCycle, k: int) -> FormalCycle:
    """Insert 1/x as the new k-th box coordinate."""
    if c.ring.e != 1:
        raise ValueError("delta needs embedding dimension 1")
    if not 1 <= k <= c.n + 1:
        raise ValueError(f"insertion slot {k} outside 1..{c.n + 1}")

    def ins(t: Term):
        box = list(t.box)
        box.insert(k - 1, t.a[0].inv())
        return {t.with_box(box): 1}

    return _linear(c, SlotSpace(c.ring, c.n + 1), ins)


def delta(c: FormalCycle, k: int | None = None) -> FormalCycle:
    """``delta_k`` if ``k`` is given, otherwise sum_k (-1)^k delta_k."""
    if k is not None:
        return delta_k(c, k)
    out = FormalCycle.zero(SlotSpace(c.ring, c.n + 1))
    for j in range(1, c.n + 2):
        out = out + (-1) ** j * delta_k(c, j)
    return out


# products


def act(s: Permutation, c: FormalCycle) -> FormalCycle:
    """Permute box slots: ``s . (x, t_1..t_r) = (x, t_{s^-1(1)}..t_{s^-1(r)})``."""
    return _linear(c, c.space, lambda t: {t.with_box(act_on_slots(s, t.box)): 1})


def _concat_terms(t1: Term, t2: Term) -> Term:
    if t1.is_curve and t2.is_curve:
        raise UnsupportedProductError("product of two curves is not a curve")
    cls = MobiusCurve if (t1.is_curve or t2.is_curve) else PointCycle
    return cls(t1.a + t2.a, t1.box + t2.box)


def concat(c1: FormalCycle, c2: FormalCycle) -> FormalCycle:
    """Concatenation product in A^(e1+e2) x box^(r1+r2) over A1 (x) A2."""
    space = SlotSpace(c1.ring.tensor(c2.ring), c1.n + c2.n)
    acc: Counter = Counter()
    for t1, k1 in c1.terms.items():
        for t2, k2 in c2.terms.items():
            acc[_concat_terms(t1, t2)] += k1 * k2
    return FormalCycle(space, dict(acc), decomposable=True)


def shuffle_product(c1: FormalCycle, c2: FormalCycle) -> FormalCycle:
    """sum over (r1, r2)-shuffles of sgn(sigma) sigma . (c1 x c2)."""
    prod = concat(c1, c2)
    out = FormalCycle.zero(prod.space, decomposable=True)
    for s in enumerate_shuffles((c1.n, c2.n)):
        out = out + s.sign() * act(s, prod)
    return out


def mu_push(c: FormalCycle) -> FormalCycle:
    """(x, y, t..) -> (xy, t..) on decomposable cycles, landing over min{A1, A2}."""
    if c.ring.e != 2:
        raise ValueError("mu_* needs embedding dimension 2")
    if not c.decomposable and c.terms:
        raise ValueError("mu_* is only defined on decomposable cycles")
    ring = ModulusRing(c.ring.m[:1]).min_with(ModulusRing(c.ring.m[1:]))

    def push(t: Term):
        xy = t.a[0] * t.a[1]
        if xy.is_zero():
            raise AdmissibilityError("product affine coordinate is 0")
        return {type(t)((xy,), t.box): 1}

    return _linear(c, SlotSpace(ring, c.n), push, decomposable=False)


def wedge(c1: FormalCycle, c2: FormalCycle) -> FormalCycle:
    """``mu_* o sh``."""
    if c1.ring.e != 1 or c2.ring.e != 1:
        raise ValueError("wedge needs embedding dimension 1 on both factors")
    return mu_push(shuffle_product(c1, c2))


# Totaro's cycle and the cyclic shuffle


def totaro_c2(a, b1, b2, extras: Sequence = (), ring: ModulusRing = ModulusRing((2,))) -> FormalCycle:
    """C_2^{a,(b1,b2)} = {(1/a; s, (b1 s - b1 b2)/(s - b1 b2))} x extras; 0 if a = 0."""
    a, b1, b2 = (RatFunc.coerce(x) for x in (a, b1, b2))
    if b1.is_zero() or b2.is_zero():
        raise ValueError("b1 and b2 must be nonzero")
    space = SlotSpace(ring, 2 + len(extras))
    if a.is_zero():
        return FormalCycle.zero(space)
    m = Mobius(b1, -b1 * b2, 1, -b1 * b2)
    curve = MobiusCurve((a.inv(),), (Mobius.identity(), m) + tuple(extras))
    return FormalCycle(space, {curve: 1})


def extra_degenerate_concat(c1: FormalCycle, c2: FormalCycle) -> FormalCycle:
    """(x; t..) x' (y; u..) = C_2^{1/(xy), (1/x, 1/y)} x (t.., u..)."""
    if c1.ring.e != 1 or c2.ring.e != 1:
        raise ValueError("x' needs embedding dimension 1 on both factors")
    ring = c1.ring.min_with(c2.ring)
    space = SlotSpace(ring, c1.n + c2.n + 2)
    acc: Counter = Counter()
    for t1, k1 in c1.terms.items():
        for t2, k2 in c2.terms.items():
            if t1.is_curve or t2.is_curve:
                raise UnsupportedProductError("x' is only implemented on points")
            x, y = t1.a[0], t2.a[0]
            c = totaro_c2((x * y).inv(), x.inv(), y.inv(), t1.box + t2.box, ring)
            for t, k in c.terms.items():
                acc[t] += k1 * k2 * k
    return FormalCycle(space, dict(acc))


def block_permutation(nu: Permutation) -> Permutation:
    """Expand ``nu`` on objects {(1,2), 3, ..., n+2} to a slot permutation of degree n+2."""
    slots_of = {1: (1, 2)}
    for obj in range(2, nu.degree + 1):
        slots_of[obj] = (obj + 1,)
    inv = nu.inverse()
    order = [slot for pos in range(1, nu.degree + 1) for slot in slots_of[inv(pos)]]
    images = [0] * len(order)
    for new, old in enumerate(order, start=1):
        images[old - 1] = new
    return Permutation(tuple(images))


def cyclic_shuffle(c1: FormalCycle, c2: FormalCycle, sign: str = "slot") -> FormalCycle:
    """sum over (1, r1, r2)-shuffles nu of sign(nu) nu . (c1 x' c2).

    ``nu`` moves the Totaro block (slots 1, 2) as one object.  With
    ``sign="slot"`` the coefficient is the sign of the expanded slot
    permutation; ``sign="object"`` uses the sign of ``nu`` itself.
    """
    if sign not in ("slot", "object"):
        raise ValueError("sign must be 'slot' or 'object'")
    base = extra_degenerate_concat(c1, c2)
    out = FormalCycle.zero(base.space)
    for nu in enumerate_shuffles((1, c1.n, c2.n)):
        hat = block_permutation(nu)
        eps = hat.sign() if sign == "slot" else nu.sign()
        out = out + eps * act(hat, base)
    return out


@dataclass
class DerivationReport:
    r1: int
    r2: int
    lhs: FormalCycle
    rhs: FormalCycle
    global_sign: int | None

    @property
    def equal_up_to_sign(self) -> bool:
        return self.global_sign is not None


def connes_derivation_check(xi: FormalCycle, eta: FormalCycle, sign: str = "slot") -> DerivationReport:
    """Compare delta(xi^eta) - (delta xi)^eta - (-1)^r1 xi^(delta eta) with
    -boundary(xi ^' eta) and report the sign relating them, if any."""
    r1 = xi.n
    lhs = delta(wedge(xi, eta)) - wedge(delta(xi), eta) - (-1) ** r1 * wedge(xi, delta(eta))
    rhs = -boundary(cyclic_shuffle(xi, eta, sign=sign))
    if lhs == rhs and lhs != -rhs:
        eps = 1
    elif lhs == -rhs and lhs != rhs:
        eps = -1
    else:
        eps = None
    return DerivationReport(r1, eta.n, lhs, rhs, eps)
