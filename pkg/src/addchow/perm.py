"""Permutations, multi-shuffles and signed sums in the integral group ring.

Permutations use the 1-based convention: ``Permutation((2, 1, 3)).images[j]``
is sigma(j + 1).  Products compose right to left, ``(s * t)(j) = s(t(j))``,
and act on slot tuples on the left by ``s . (t_1, ..., t_r) =
(t_{s^-1(1)}, ..., t_{s^-1(r)})``.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from math import factorial, prod
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Permutation",
    "GroupRingElem",
    "ShuffleReport",
    "enumerate_shuffles",
    "is_shuffle",
    "sigma_insert",
    "cyclic_shift",
    "phi_map",
    "phi_domain",
    "shuffle_lemma_check",
    "act_on_slots",
    "SizeLimitError",
    "ShuffleTypeError",
]

DEFAULT_MAX_DEGREE = 8


class SizeLimitError(ValueError):
    pass


class ShuffleTypeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation such as ``(1 3)(2 4)``; ``()`` is the identity."""
        images = list(range(1, n + 1))
        body = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s+\d+)*)?\s*\))*", body):
            raise ValueError(f"bad cycle notation {text!r}")
        seen: set[int] = set()
        for grp in re.findall(r"\(([^)]*)\)", body):
            cyc = [int(x) for x in grp.split()]
            if any(c < 1 or c > n for c in cyc) or seen & set(cyc) or len(set(cyc)) != len(cyc):
                raise ValueError(f"bad cycle {grp!r} for degree {n}")
            seen |= set(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for j, v in enumerate(self.images, start=1):
            inv[v - 1] = j
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def cross(self, other: "Permutation") -> "Permutation":
        """Block product ``self x other`` acting on disjoint consecutive blocks."""
        n = self.degree
        return Permutation(self.images + tuple(n + v for v in other.images))

    def __str__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def sign(s: Permutation) -> int:
    return s.sign()


def _check_parts(parts: Sequence[int]) -> tuple[int, ...]:
    parts = tuple(parts)
    if not parts or any(p < 0 for p in parts):
        raise ValueError(f"shuffle type needs at least one non-negative part, got {parts}")
    return parts


def enumerate_shuffles(parts: Sequence[int]) -> list[Permutation]:
    """All (p_1, ..., p_s)-shuffles, sorted.

    A shuffle is increasing on each consecutive block, so it is fixed by the
    image set of every block; we enumerate ordered set partitions.
    """
    parts = _check_parts(parts)
    n = sum(parts)

    def rec(remaining: frozenset, k: int) -> Iterator[list[tuple[int, ...]]]:
        if k == len(parts):
            yield []
            return
        for chosen in itertools.combinations(sorted(remaining), parts[k]):
            for rest in rec(remaining - set(chosen), k + 1):
                yield [chosen] + rest

    out = []
    for blocks in rec(frozenset(range(1, n + 1)), 0):
        out.append(Permutation(tuple(v for b in blocks for v in b)))
    return sorted(out)


def shuffle_count(parts: Sequence[int]) -> int:
    parts = _check_parts(parts)
    return factorial(sum(parts)) // prod(factorial(p) for p in parts)


def is_shuffle(s: Permutation, parts: Sequence[int]) -> bool:
    parts = _check_parts(parts)
    if s.degree != sum(parts):
        return False
    start = 0
    for p in parts:
        block = s.images[start:start + p]
        if any(a > b for a, b in zip(block, block[1:])):
            return False
        start += p
    return True


def sigma_insert(s: Permutation, i: int) -> Permutation:
    """``s[i]``: fix ``i`` and act as ``s`` on the complement of ``i``.

    The complement of ``i`` in {1, ..., n+1} is identified with {1, ..., n}
    order-preservingly in source and target, so the sign is unchanged.
    """
    n = s.degree
    if not 1 <= i <= n + 1:
        raise ValueError(f"insertion position {i} outside 1..{n + 1}")

    def lift(v: int) -> int:
        return v if v < i else v + 1

    images = []
    for j in range(1, n + 2):
        if j == i:
            images.append(i)
        else:
            images.append(lift(s(j if j < i else j - 1)))
    return Permutation(tuple(images))


def cyclic_shift(r: int, n: int) -> Permutation:
    """The (1, r, n-1-r)-shuffle sending 1 to r+1 and 2..r+1 to 1..r."""
    if not 0 <= r < n:
        raise ValueError("need 0 <= r < n")
    images = [r + 1] + list(range(1, r + 1)) + list(range(r + 2, n + 1))
    return Permutation(tuple(images))


def phi_domain(kind: str, r: int, s: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Shuffle types of (sigma, tau) for each bijection onto Perm_(1,r,s)."""
    if kind == "phi1":
        return (r, s), (1, r + s)
    if kind == "phi2":
        return (r + 1, s), (1, r)
    if kind == "phi3":
        return (r, s + 1), (1, s)
    raise ValueError(f"unknown map {kind!r}")


def phi_map(kind: str, sigma: Permutation, tau: Permutation, r: int, s: int) -> Permutation:
    """The bijections ``Perm_A x Perm_B -> Perm_(1,r,s)``.

    * phi1: ``sigma[tau(1)] * tau``
    * phi2: ``sigma * (tau x Id_s)``
    * phi3: ``sigma * (Id_r x tau) * c_r`` with ``c_r`` the cyclic shift
      moving the first slot behind the next ``r`` ones.
    """
    sig_t, tau_t = phi_domain(kind, r, s)
    if not is_shuffle(sigma, sig_t):
        raise ShuffleTypeError(f"{sigma} is not a {sig_t}-shuffle")
    if not is_shuffle(tau, tau_t):
        raise ShuffleTypeError(f"{tau} is not a {tau_t}-shuffle")
    if kind == "phi1":
        return sigma_insert(sigma, tau(1)) * tau
    if kind == "phi2":
        return sigma * tau.cross(Permutation.identity(s))
    return sigma * Permutation.identity(r).cross(tau) * cyclic_shift(r, r + s + 1)


@dataclass
class GroupRingElem:
    """Finite integer combination of permutations of one degree."""

    degree: int
    terms: dict[Permutation, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for p, c in self.terms.items():
            if p.degree != self.degree:
                raise ValueError("all permutations must share the element's degree")
            if c:
                clean[p] = clean.get(p, 0) + c
        self.terms = {p: c for p, c in clean.items() if c}

    @classmethod
    def signed_sum(cls, perms: Iterable[Permutation], degree: int) -> "GroupRingElem":
        acc: Counter = Counter()
        for p in perms:
            acc[p] += p.sign()
        return cls(degree, dict(acc))

    @classmethod
    def of(cls, p: Permutation, coeff: int = 1) -> "GroupRingElem":
        return cls(p.degree, {p: coeff})

    def __add__(self, other: "GroupRingElem") -> "GroupRingElem":
        acc = Counter(self.terms)
        acc.update(other.terms)
        return GroupRingElem(self.degree, dict(acc))

    def __neg__(self):
        return GroupRingElem(self.degree, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElem(self.degree, {p: c * other for p, c in self.terms.items()})
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        acc: Counter = Counter()
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                acc[p * q] += a * b
        return GroupRingElem(self.degree, dict(acc))

    __rmul__ = __mul__

    def canonical(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted((p.images, c) for p, c in self.terms.items())

    def __eq__(self, other):
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return self.degree == other.degree and self.canonical() == other.canonical()

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{p}" for p, c in
                        sorted(self.terms.items()))


@dataclass
class ShuffleReport:
    which: int
    r: int
    s: int
    lhs: GroupRingElem
    rhs: GroupRingElem

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def shuffle_lemma_check(which: int, r: int, s: int, max_degree: int = DEFAULT_MAX_DEGREE) -> ShuffleReport:
    """Build both sides of the multiple-shuffle identity ``which`` in Z[S_{r+s+1}].

    1. ``sum_sigma sgn(sigma) sum_tau sgn(tau) sigma[tau(1)] tau``
    2. ``(sum sgn(sigma) sigma) (sum sgn(tau) (tau x Id_s))``
    3. ``(-1)^r (sum sgn(sigma) sigma) (sum sgn(tau) (Id_r x tau)) c_r``

    each against ``sum_{nu in Perm_(1,r,s)} sgn(nu) nu``.
    """
    if r < 0 or s < 0:
        raise ValueError("r and s must be non-negative")
    n = r + s + 1
    if n > max_degree:
        raise SizeLimitError(f"degree {n} exceeds limit {max_degree}")
    rhs = GroupRingElem.signed_sum(enumerate_shuffles((1, r, s)), n)
    if which == 1:
        acc: Counter = Counter()
        for sigma in enumerate_shuffles((r, s)):
            for tau in enumerate_shuffles((1, r + s)):
                acc[sigma_insert(sigma, tau(1)) * tau] += sigma.sign() * tau.sign()
        lhs = GroupRingElem(n, dict(acc))
    elif which == 2:
        left = GroupRingElem.signed_sum(enumerate_shuffles((r + 1, s)), n)
        right = GroupRingElem(n, {tau.cross(Permutation.identity(s)): tau.sign()
                                  for tau in enumerate_shuffles((1, r))})
        lhs = left * right
    elif which == 3:
        left = GroupRingElem.signed_sum(enumerate_shuffles((r, s + 1)), n)
        right = GroupRingElem(n, {Permutation.identity(r).cross(tau): tau.sign()
                                  for tau in enumerate_shuffles((1, s))})
        lhs = (left * right * GroupRingElem.of(cyclic_shift(r, n))) * (-1) ** r
    else:
        raise ValueError(f"no shuffle lemma {which}")
    return ShuffleReport(which, r, s, lhs, rhs)


def act_on_slots(s: Permutation, slots: Sequence) -> tuple:
    """``s . (t_1, ..., t_r) = (t_{s^-1(1)}, ..., t_{s^-1(r)})``."""
    if s.degree != len(slots):
        raise ValueError(f"permutation of degree {s.degree} acting on {len(slots)} slots")
    out = [None] * len(slots)
    for j, v in enumerate(slots, start=1):
        out[s(j) - 1] = v
    return tuple(out)
