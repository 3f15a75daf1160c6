"""Exact rational functions over QQ, points of the projective line, and
degree-one coordinate maps in a single parameter.

Polynomials are sympy sparse ``PolyElement`` objects in graded-lex order.
Every ``RatFunc`` is kept in canonical form: numerator and denominator are
coprime and the denominator is monic with respect to grlex on the sorted
variable names, so equal functions compare and hash equal no matter which
ring they were built in.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from sympy import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, ring

__all__ = [
    "RatFunc",
    "ProjValue",
    "Mobius",
    "UnknownVariableError",
    "ImproperSolveError",
    "ParseError",
    "var",
    "const",
    "parse_ratfunc",
    "parse_proj",
]

Scalar = Union[int, Fraction]


class UnknownVariableError(ValueError):
    pass


class ImproperSolveError(ValueError):
    """A constant map equals the requested value: every parameter solves it."""


class ParseError(ValueError):
    pass


@lru_cache(maxsize=None)
def _ring(names: tuple[str, ...]):
    if not names:
        # sympy needs at least one generator; the dummy never carries a degree
        names = ("_",)
    return ring(",".join(names), QQ, grlex)[0]


def _names(R) -> tuple[str, ...]:
    names = tuple(str(s) for s in R.symbols)
    return () if names == ("_",) else names


def _unify(*polys: PolyElement) -> list[PolyElement]:
    rings = {p.ring for p in polys}
    if len(rings) == 1:
        return list(polys)
    names = tuple(sorted(set().union(*(_names(R) for R in rings))))
    R = _ring(names)
    return [p if p.ring == R else p.set_ring(R) for p in polys]


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _to_qq(c: Scalar):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


class RatFunc:
    """Element of QQ(u_1, ..., u_m), always in canonical form."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: PolyElement, den: PolyElement | None = None, *, _canonical: bool = False):
        if den is None:
            den = num.ring.one
        num, den = _unify(num, den)
        if not _canonical:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            if not num:
                den = num.ring.one
            else:
                g = num.gcd(den)
                if g != 1:
                    num = num.exquo(g)
                    den = den.exquo(g)
            lc = den.LC
            if lc != 1:
                num = num.quo_ground(lc)
                den = den.quo_ground(lc)
        self.num = num
        self.den = den
        self._key = None

    # construction helpers

    @classmethod
    def constant(cls, c: Scalar) -> "RatFunc":
        R = _ring(())
        return cls(R(_to_qq(c)), R.one, _canonical=True)

    @classmethod
    def variable(cls, name: str) -> "RatFunc":
        R = _ring((name,))
        return cls(R.gens[0], R.one, _canonical=True)

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        if isinstance(value, str):
            return parse_ratfunc(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")

    # structure

    @property
    def variables(self) -> tuple[str, ...]:
        """Names of the variables that actually occur."""
        R = self.num.ring
        names = _names(R)
        used = set()
        for p in (self.num, self.den):
            for mon in p.itermonoms():
                used.update(i for i, e in enumerate(mon) if e)
        return tuple(names[i] for i in sorted(used))

    def key(self):
        if self._key is None:
            names = _names(self.num.ring)

            def poly_key(p):
                return tuple(sorted(
                    (tuple((names[i], e) for i, e in enumerate(mon) if e), (int(c.numerator), int(c.denominator)))
                    for mon, c in p.terms()
                ))

            self._key = (poly_key(self.num), poly_key(self.den))
        return self._key

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return not self.variables

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        if not self.num:
            return Fraction(0)
        return _frac(self.num.LC) / _frac(self.den.LC)

    # arithmetic

    def __add__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        a, b, c, d = _unify(self.num, self.den, other.num, other.den)
        return RatFunc(a * d + c * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        a, b, c, d = _unify(self.num, self.den, other.num, other.den)
        return RatFunc(a * c, b * d)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _canonical=True)

    def diff(self, name: str, declared: Iterable[str] | None = None) -> "RatFunc":
        """Partial derivative with respect to the variable ``name``.

        With ``declared`` given, differentiating by a name outside it raises
        ``UnknownVariableError``.
        """
        if declared is not None and name not in declared:
            raise UnknownVariableError(name)
        R = self.num.ring
        if name not in _names(R):
            return RatFunc.constant(0)
        x = R.gens[_names(R).index(name)]
        return RatFunc(self.num.diff(x) * self.den - self.num * self.den.diff(x), self.den ** 2)

    def subs(self, name: str, value: "RatFunc") -> "RatFunc":
        """Substitute ``value`` for the variable ``name``."""
        value = RatFunc.coerce(value)
        if name not in self.variables:
            return self

        def ev(p: PolyElement) -> RatFunc:
            names = _names(p.ring)
            k = names.index(name)
            out = RatFunc.constant(0)
            powers: dict[int, RatFunc] = {}
            for mon, c in p.terms():
                e = mon[k]
                if e not in powers:
                    powers[e] = value ** e
                rest = list(mon)
                rest[k] = 0
                out = out + RatFunc(p.ring({tuple(rest): c})) * powers[e]
            return out

        return ev(self.num) / ev(self.den)

    def __eq__(self, other):
        other = _maybe(other)
        if other is NotImplemented:
            return other
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"RatFunc({str(self)!r})"

    def __str__(self):
        num = _fmt_poly(self.num)
        if self.den == 1:
            return num
        den = _fmt_poly(self.den)
        if len(self.num.terms()) > 1 or "/" in num:
            num = f"({num})"
        if not den.isidentifier() and not den.isdigit():
            den = f"({den})"
        return f"{num}/{den}"


def _maybe(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc.constant(x)
    return NotImplemented


def _fmt_poly(p: PolyElement) -> str:
    names = _names(p.ring)
    if not p:
        return "0"
    parts = []
    for mon, c in p.terms():  # grlex, leading term first
        c = _frac(c)
        factors = []
        for i, e in enumerate(mon):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}**{e}")
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = (f"{mag}" if mag.denominator == 1 else f"({mag})") + "*" + body
        else:
            body = str(mag)
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def var(name: str) -> RatFunc:
    return RatFunc.variable(name)


def const(c: Scalar) -> RatFunc:
    return RatFunc.constant(c)


# projective line


class ProjValue:
    """A point p/q of P^1 over QQ(u). Stored as a finite RatFunc or infinity."""

    __slots__ = ("value",)

    def __init__(self, p, q=None):
        p = RatFunc.coerce(p)
        if q is None:
            self.value = p
            return
        q = RatFunc.coerce(q)
        if p.is_zero() and q.is_zero():
            raise ValueError("(0, 0) is not a point of P^1")
        self.value = None if q.is_zero() else p / q

    @classmethod
    def infinity(cls) -> "ProjValue":
        obj = cls.__new__(cls)
        obj.value = None
        return obj

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def pair(self) -> tuple[RatFunc, RatFunc]:
        if self.value is None:
            return RatFunc.constant(1), RatFunc.constant(0)
        return self.value, RatFunc.constant(1)

    def is_zero(self) -> bool:
        return self.value is not None and self.value.is_zero()

    def is_one(self) -> bool:
        return self.value is not None and self.value.is_one()

    def __eq__(self, other):
        if isinstance(other, ProjValue):
            return self.value == other.value
        if isinstance(other, (RatFunc, int, Fraction)):
            return self.value is not None and self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(("P1", None if self.value is None else self.value.key()))

    def __repr__(self):
        return f"ProjValue({str(self)!r})"

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


INF = ProjValue.infinity()


# Mobius maps s -> (alpha s + beta) / (gamma s + delta)


class Mobius:
    """Degree-one map of P^1 with coefficients in QQ(u).

    The coefficient vector is only defined up to a nonzero scalar; the stored
    representative is scaled so that ``gamma == 1``, or ``delta == 1`` when
    ``gamma`` vanishes.  Maps with zero determinant are constant and are
    stored as ``(0, c, 0, 1)``.  The constant map to infinity is not
    representable.
    """

    __slots__ = ("alpha", "beta", "gamma", "delta")

    def __init__(self, alpha, beta, gamma, delta):
        a, b, c, d = (RatFunc.coerce(x) for x in (alpha, beta, gamma, delta))
        det = a * d - b * c
        if det.is_zero():
            # constant map: value is a/c or b/d, whichever is defined
            if not c.is_zero():
                val = a / c
            elif not d.is_zero():
                val = b / d
            else:
                raise ValueError("degenerate Mobius coefficients (gamma = delta = 0)")
            a, b, c, d = RatFunc.constant(0), val, RatFunc.constant(0), RatFunc.constant(1)
        elif not c.is_zero():
            a, b, d, c = a / c, b / c, d / c, RatFunc.constant(1)
        else:
            a, b, c = a / d, b / d, RatFunc.constant(0)
            d = RatFunc.constant(1)
        self.alpha, self.beta, self.gamma, self.delta = a, b, c, d

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @classmethod
    def constant(cls, c) -> "Mobius":
        return cls(0, c, 0, 1)

    @property
    def is_constant(self) -> bool:
        return self.alpha.is_zero() and self.gamma.is_zero()

    def coefficients(self) -> tuple[RatFunc, RatFunc, RatFunc, RatFunc]:
        return self.alpha, self.beta, self.gamma, self.delta

    def __call__(self, s) -> ProjValue:
        return mobius_eval(self, s)

    def solve(self, target) -> ProjValue | None:
        return mobius_solve(self, target)

    def compose(self, other: "Mobius") -> "Mobius":
        """``self o other``."""
        a, b, c, d = self.coefficients()
        e, f, g, h = other.coefficients()
        return Mobius(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "Mobius":
        if self.is_constant:
            raise ValueError("constant map has no inverse")
        a, b, c, d = self.coefficients()
        return Mobius(d, -b, -c, a)

    def is_identity(self) -> bool:
        return self == Mobius.identity()

    def __eq__(self, other):
        if not isinstance(other, Mobius):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash(("Mobius",) + tuple(x.key() for x in self.coefficients()))

    def __repr__(self):
        return f"Mobius({self.to_string('s')!r})"

    def to_string(self, param: str) -> str:
        """Expression in ``param``, e.g. ``(b1*t - b1*b2)/(t - b1*b2)``."""
        s = RatFunc.variable(param)
        a, b, c, d = self.coefficients()
        if param in set().union(*(set(x.variables) for x in (a, b, c, d))):
            raise ValueError(f"parameter {param!r} clashes with a coefficient variable")
        return str((a * s + b) / (c * s + d))

    @classmethod
    def from_ratfunc(cls, f: RatFunc, param: str) -> "Mobius":
        """Read ``f`` as a map in ``param``; numerator and denominator must be
        of degree at most one in ``param``."""
        R = f.num.ring
        names = _names(R)
        if param not in names:
            return cls.constant(f)
        k = names.index(param)
        coeffs = []
        for p in (f.num, f.den):
            lin, const_ = RatFunc.constant(0), RatFunc.constant(0)
            for mon, c in p.terms():
                e = mon[k]
                rest = list(mon)
                rest[k] = 0
                piece = RatFunc(R({tuple(rest): c}))
                if e == 0:
                    const_ = const_ + piece
                elif e == 1:
                    lin = lin + piece
                else:
                    raise ParseError(f"{f} has degree > 1 in {param}")
            coeffs += [lin, const_]
        return cls(*coeffs)


def mobius_eval(m: Mobius, s) -> ProjValue:
    """Projective evaluation; ``m(inf) = alpha/gamma``."""
    if not isinstance(s, ProjValue):
        s = ProjValue(s)
    if m.is_constant:
        return ProjValue(m.beta)
    a, b, c, d = m.coefficients()
    p, q = s.pair()
    return ProjValue(a * p + b * q, c * p + d * q)


def mobius_solve(m: Mobius, target) -> ProjValue | None:
    """The unique parameter ``s`` with ``m(s) == target``.

    Returns ``None`` when ``m`` is a constant different from ``target`` and
    raises ``ImproperSolveError`` when it is constantly equal to it.
    """
    if not isinstance(target, ProjValue):
        target = ProjValue(target)
    if m.is_constant:
        if mobius_eval(m, INF) == target:
            raise ImproperSolveError(f"constant map equals {target} identically")
        return None
    a, b, c, d = m.coefficients()
    p, q = target.pair()
    # q(a s + b) = p(c s + d)
    return ProjValue(p * d - q * b, q * a - p * c)


# parsing

_BINOPS = {
    ast.Add: lambda x, y: x + y,
    ast.Sub: lambda x, y: x - y,
    ast.Mult: lambda x, y: x * y,
    ast.Div: lambda x, y: x / y,
}


def _eval_node(node, names: Iterable[str] | None):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, names)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return RatFunc.constant(node.value)
    if isinstance(node, ast.Name):
        if names is not None and node.id not in names:
            raise UnknownVariableError(node.id)
        return var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, names)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ParseError("exponents must be integer literals")
            return _eval_node(node.left, names) ** (sign * exp.value)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ParseError(f"unsupported operator {type(node.op).__name__}")
        return op(_eval_node(node.left, names), _eval_node(node.right, names))
    raise ParseError(f"unsupported syntax: {ast.dump(node)}")


def parse_ratfunc(text: str, names: Iterable[str] | None = None) -> RatFunc:
    """Parse an expression such as ``(b1*t - b1*b2)/(t - b1*b2)``.

    If ``names`` is given, any other identifier is an ``UnknownVariableError``.
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval_node(tree, None if names is None else set(names))


def parse_proj(text: str, names: Iterable[str] | None = None) -> ProjValue:
    if text.strip() == "inf":
        return INF
    return ProjValue(parse_ratfunc(text, names))
