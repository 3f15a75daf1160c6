"""Absolute Kahler differentials over QQ(u_1, ..., u_m).

A degree-n form is stored in the basis du_{i_1} ^ ... ^ du_{i_n} with the
index tuple strictly increasing in variable-name order.  ``reg`` sends the
point (x; t_1, ..., t_n) to (1/x) dlog t_1 ^ ... ^ dlog t_n.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

from .cycles import FormalCycle, PointCycle
from .field import ParseError, RatFunc, _eval_node

__all__ = ["DiffForm", "form_d", "d", "dlog", "form_wedge", "reg", "reg_delta_factor_check",
           "FactorReport", "parse_form"]


def _sort_sign(idx: tuple[str, ...]) -> tuple[int, tuple[str, ...]]:
    """Sign of the permutation sorting ``idx``; 0 if an index repeats."""
    if len(set(idx)) != len(idx):
        return 0, idx
    lst = list(idx)
    sign = 1
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return sign, tuple(lst)


@dataclass
class DiffForm:
    degree: int
    terms: dict[tuple[str, ...], RatFunc] = field(default_factory=dict)

    def __post_init__(self):
        clean: dict[tuple[str, ...], RatFunc] = {}
        for idx, c in self.terms.items():
            if len(idx) != self.degree:
                raise ValueError(f"basis element {idx} in a degree-{self.degree} form")
            sign, key = _sort_sign(tuple(idx))
            if not sign:
                continue
            c = RatFunc.coerce(c) * sign
            clean[key] = clean[key] + c if key in clean else c
        self.terms = {k: v for k, v in clean.items() if not v.is_zero()}

    @classmethod
    def function(cls, f) -> "DiffForm":
        return cls(0, {(): RatFunc.coerce(f)})

    @classmethod
    def zero(cls, degree: int) -> "DiffForm":
        return cls(degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DiffForm") -> "DiffForm":
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return DiffForm(self.degree, terms)

    def __neg__(self):
        return DiffForm(self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DiffForm":
        f = RatFunc.coerce(f)
        return DiffForm(self.degree, {k: f * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, DiffForm):
            return form_wedge(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __xor__(self, other: "DiffForm") -> "DiffForm":
        return form_wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            c = self.terms[idx]
            basis = " ^ ".join(f"d({v})" for v in idx)
            if not basis:
                parts.append(f"({c})")
            else:
                parts.append(f"(({c}) * {basis})")
        return " + ".join(parts)

    __repr__ = __str__


def form_d(w: DiffForm) -> DiffForm:
    """Exterior derivative, coefficient by coefficient."""
    out: dict[tuple[str, ...], RatFunc] = {}
    for idx, c in w.terms.items():
        for v in c.variables:
            key = (v,) + idx
            dc = c.diff(v)
            out_w = DiffForm(w.degree + 1, {key: dc})
            for k, val in out_w.terms.items():
                out[k] = out[k] + val if k in out else val
    return DiffForm(w.degree + 1, out)


def d(f) -> DiffForm:
    if isinstance(f, DiffForm):
        return form_d(f)
    return form_d(DiffForm.function(f))


def dlog(f) -> DiffForm:
    f = RatFunc.coerce(f)
    if f.is_zero():
        raise ZeroDivisionError("dlog(0)")
    return d(f).scale(f.inv())


def form_wedge(w1: DiffForm, w2: DiffForm) -> DiffForm:
    out: dict[tuple[str, ...], RatFunc] = {}
    for i1, c1 in w1.terms.items():
        for i2, c2 in w2.terms.items():
            sign, key = _sort_sign(i1 + i2)
            if not sign:
                continue
            val = c1 * c2 * sign
            out[key] = out[key] + val if key in out else val
    return DiffForm(w1.degree + w2.degree, out)


def _reg_point(t: PointCycle) -> DiffForm:
    if len(t.a) != 1:
        raise ValueError("reg needs embedding dimension 1")
    w = DiffForm.function(t.a[0].inv())
    for b in t.box:
        w = form_wedge(w, dlog(b))
    return w


def reg(c) -> DiffForm:
    """(x; t_1..t_n) -> (1/x) dlog t_1 ^ ... ^ dlog t_n, extended linearly."""
    if isinstance(c, PointCycle):
        return _reg_point(c)
    out = DiffForm.zero(c.n)
    for t, k in c.terms.items():
        if t.is_curve:
            raise ValueError(f"reg is only defined on points, got curve {t}")
        out = out + _reg_point(t).scale(k)
    return out


@dataclass
class FactorReport:
    n: int
    reg_delta: DiffForm
    d_reg: DiffForm
    factor: int | None
    sign: int | None

    @property
    def ok(self) -> bool:
        return self.factor == self.n + 1


def reg_delta_factor_check(c: FormalCycle) -> FactorReport:
    """Find the integer k with reg(delta c) = k d(reg c) and split it as sign * |k|."""
    from .cycles import delta

    lhs = reg(delta(c))
    rhs = form_d(reg(c))
    ratio = None
    if rhs.is_zero():
        ratio = None
    else:
        idx = next(iter(rhs.terms))
        q = (lhs.terms.get(idx, RatFunc.constant(0))) / rhs.terms[idx]
        if q.is_constant() and rhs.scale(q) == lhs:
            ratio = q.constant_value()
    if ratio is None or ratio.denominator != 1:
        return FactorReport(c.n, lhs, rhs, None, None)
    k = int(ratio)
    return FactorReport(c.n, lhs, rhs, abs(k), (k > 0) - (k < 0))


# parsing: "(1/u) * dlog(v) ^ dlog(u*w)"


def _eval_form(node):
    if isinstance(node, ast.Expression):
        return _eval_form(node.body)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in ("d", "dlog"):
        if len(node.args) != 1 or node.keywords:
            raise ParseError(f"{node.func.id} takes one argument")
        arg = _eval_form(node.args[0])
        if node.func.id == "dlog":
            if isinstance(arg, DiffForm):
                raise ParseError("dlog of a form")
            return dlog(arg)
        return d(arg)
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.BitXor):
        left, right = _eval_form(node.left), _eval_form(node.right)
        return form_wedge(_as_form(left), _as_form(right))
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        left, right = _eval_form(node.left), _eval_form(node.right)
        if isinstance(node.op, ast.Div):
            if isinstance(right, DiffForm):
                raise ParseError("division by a form")
            return left.scale(right.inv()) if isinstance(left, DiffForm) else left / right
        if isinstance(node.op, ast.Mult):
            if isinstance(left, DiffForm) and isinstance(right, DiffForm):
                return form_wedge(left, right)
            if isinstance(left, DiffForm):
                return left.scale(right)
            if isinstance(right, DiffForm):
                return right.scale(left)
            return left * right
        if isinstance(left, DiffForm) or isinstance(right, DiffForm):
            left, right = _as_form(left), _as_form(right)
        return left + right if isinstance(node.op, ast.Add) else left - right
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_eval_form(node.operand)
    return _eval_node(node, None)


def _as_form(x) -> DiffForm:
    return x if isinstance(x, DiffForm) else DiffForm.function(x)


def parse_form(text: str) -> DiffForm:
    """Parse Python-style form syntax.  ``^`` binds looser than ``+`` as in
    Python, so parenthesize wedge products inside sums."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _as_form(_eval_form(tree))
