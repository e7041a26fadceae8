"""Symbolic elements of the multiplicative semigroup ``A+(B_n)``.

Points of ``B_n`` are ``THETA`` or pairs ``(i, j)``.  Maps are written on the
right of their argument, so ``compose(f, g)`` applies ``f`` first.

Four kinds of map make up ``A+(B_n)``:

* :class:`Zero` sends everything to θ;
* :class:`Constant` ``(p, q)`` sends every point, θ included, to ``(p, q)``;
* :class:`SingletonSupport` ``(k, l, p, q)`` sends ``(k, l)`` to ``(p, q)``
  and everything else to θ;
* :class:`NSupport` ``(p, q, sigma)`` sends ``(i, p)`` to ``(i sigma, q)``
  and everything else to θ.

For ``n = 1`` the maps ``SingletonSupport(1,1,1,1)`` and
``NSupport(1,1,id)`` coincide; the latter is the canonical form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Union

from .brandt import THETA, BrandtTriple, GroupTable, Permutation, parse_permutation, symmetric_group
from .semigroup import DomainError, FiniteSemigroup, SemigroupError

__all__ = [
    "Zero",
    "Constant",
    "SingletonSupport",
    "NSupport",
    "AffMap",
    "SupportClass",
    "ClassificationError",
    "ParseError",
    "points",
    "apply",
    "compose",
    "compose_pointwise",
    "canonical",
    "support",
    "enumerate_aplus",
    "enumerate_aff",
    "aplus_order",
    "aff_order",
    "build_cayley",
    "to_brandt",
    "parse_element",
    "parse_expression",
    "format_element",
    "MAX_TABLE_ORDER",
]

MAX_TABLE_ORDER = 600


class ClassificationError(SemigroupError):
    """A product fell outside the enumerated element universe."""


class ParseError(SemigroupError, ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Zero:
    n: int

    def __str__(self) -> str:
        return "zero"


@dataclass(frozen=True)
class Constant:
    n: int
    p: int
    q: int

    def __str__(self) -> str:
        return f"const:{self.p},{self.q}"


@dataclass(frozen=True)
class SingletonSupport:
    n: int
    k: int
    l: int
    p: int
    q: int

    def __str__(self) -> str:
        return f"ss:({self.k},{self.l})->({self.p},{self.q})"


@dataclass(frozen=True)
class NSupport:
    n: int
    p: int
    q: int
    sigma: Permutation

    def __str__(self) -> str:
        return f"ns:{self.p},{self.q};{self.sigma}"


AffMap = Union[Zero, Constant, SingletonSupport, NSupport]


def _check(f: AffMap) -> None:
    n = f.n
    if n < 1:
        raise DomainError("n must be positive")
    idx = {
        Zero: (),
        Constant: ("p", "q"),
        SingletonSupport: ("k", "l", "p", "q"),
        NSupport: ("p", "q"),
    }[type(f)]
    for name in idx:
        v = getattr(f, name)
        if not 1 <= v <= n:
            raise DomainError(f"{name}={v} out of range 1..{n} in {f}")
    if isinstance(f, NSupport) and f.sigma.degree != n:
        raise DomainError(f"permutation degree {f.sigma.degree} != n={n}")


def canonical(f: AffMap) -> AffMap:
    _check(f)
    if isinstance(f, SingletonSupport) and f.n == 1:
        return NSupport(1, 1, 1, Permutation.identity(1))
    return f


def points(n: int) -> list:
    """All points of ``B_n``: θ then pairs in lexicographic order."""
    return [THETA] + [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def apply(f: AffMap, x):
    """The image of the point ``x`` under ``f``."""
    if isinstance(f, Constant):
        return (f.p, f.q)
    if isinstance(f, Zero) or x is THETA:
        return THETA
    i, j = x
    if isinstance(f, SingletonSupport):
        return (f.p, f.q) if (i, j) == (f.k, f.l) else THETA
    if j == f.p:
        return (f.sigma(i), f.q)
    return THETA


def _same_n(f: AffMap, g: AffMap) -> int:
    if f.n != g.n:
        raise DomainError(f"degree mismatch: {f.n} vs {g.n}")
    return f.n


def compose(f: AffMap, g: AffMap) -> AffMap:
    """``f`` followed by ``g``, in closed form."""
    n = _same_n(f, g)
    if isinstance(g, Constant):
        return g
    if isinstance(g, Zero) or isinstance(f, Zero):
        return Zero(n)
    if isinstance(f, Constant):
        y = apply(g, (f.p, f.q))
        return Zero(n) if y is THETA else Constant(n, *y)
    if isinstance(f, SingletonSupport):
        y = apply(g, (f.p, f.q))
        return Zero(n) if y is THETA else canonical(SingletonSupport(n, f.k, f.l, *y))
    # f is an n-support map
    if isinstance(g, NSupport):
        if f.q != g.p:
            return Zero(n)
        return NSupport(n, f.p, g.q, f.sigma.then(g.sigma))
    if f.q != g.l:
        return Zero(n)
    return canonical(SingletonSupport(n, f.sigma.preimage(g.k), f.p, g.p, g.q))


def _graph(f: AffMap) -> tuple:
    return tuple(apply(f, x) for x in points(f.n))


def compose_pointwise(f: AffMap, g: AffMap) -> tuple:
    """Graph of ``f`` then ``g`` evaluated point by point (an independent check on :func:`compose`)."""
    n = _same_n(f, g)
    return tuple(apply(g, apply(f, x)) for x in points(n))


@dataclass(frozen=True)
class SupportClass:
    tag: str
    size: int


def support(f: AffMap) -> SupportClass:
    """Number of points not sent to θ, with the kind of map.

    Constants at a non-zero value have full support ``n*n + 1``: θ itself is
    sent to a non-zero point.
    """
    n = f.n
    if isinstance(f, Zero):
        return SupportClass("zero", 0)
    if isinstance(f, Constant):
        return SupportClass("full", n * n + 1)
    if isinstance(f, SingletonSupport):
        return SupportClass("singleton", 1)
    return SupportClass("n-support", n)


def aplus_order(n: int) -> int:
    if n == 1:
        return 3
    return (math.factorial(n) + 1) * n * n + n**4 + 1


def aff_order(n: int) -> int:
    return (math.factorial(n) + 1) * n * n + 1


def _enumerate(n: int, singletons: bool, max_order: int) -> list[AffMap]:
    if n < 1:
        raise DomainError("n must be positive")
    size = aplus_order(n) if singletons else aff_order(n)
    if size > max_order:
        raise DomainError(f"universe of order {size} exceeds the cap {max_order}")
    rng = range(1, n + 1)
    out: list[AffMap] = [Zero(n)]
    out.extend(Constant(n, p, q) for p, q in product(rng, rng))
    if singletons and n > 1:
        out.extend(SingletonSupport(n, k, l, p, q) for k, l, p, q in product(rng, rng, rng, rng))
    perms = symmetric_group(n).elements
    out.extend(NSupport(n, p, q, s) for p, q in product(rng, rng) for s in perms)
    return out


def enumerate_aplus(n: int, max_order: int = MAX_TABLE_ORDER) -> list[AffMap]:
    """All of ``A+(B_n)`` in canonical order.

    Order: zero, constants, singleton-support maps, n-support maps; each
    group lexicographic in its parameters (permutations by image list).
    """
    return _enumerate(n, True, max_order)


def enumerate_aff(n: int, max_order: int = MAX_TABLE_ORDER) -> list[AffMap]:
    """The affine maps ``Aff(B_n)``: :func:`enumerate_aplus` without singleton-support maps."""
    return _enumerate(n, False, max_order)


def build_cayley(
    n: int,
    universe: str = "aplus",
    max_order: int = MAX_TABLE_ORDER,
    check_associativity: bool = True,
) -> FiniteSemigroup:
    """Composition table of ``A+(B_n)`` (``"aplus"``) or ``Aff(B_n)`` (``"aff"``)."""
    if universe == "aplus":
        elems = enumerate_aplus(n, max_order)
    elif universe == "aff":
        elems = enumerate_aff(n, max_order)
    else:
        raise DomainError(f"unknown universe {universe!r}")
    index = {f: i for i, f in enumerate(elems)}
    table = []
    for f in elems:
        row = []
        for g in elems:
            h = compose(f, g)
            try:
                row.append(index[h])
            except KeyError:
                raise ClassificationError(f"{f} . {g} = {h} is not in {universe}(B_{n})") from None
        table.append(row)
    name = "A+" if universe == "aplus" else "Aff"
    return FiniteSemigroup(
        table,
        [format_element(f) for f in elems],
        elems,
        check_associativity=check_associativity,
        name=f"{name}(B{n})",
    )


def to_brandt(f: AffMap, group: GroupTable | None = None):
    """The image of an n-support map or the zero map in ``B(S_n, n)``."""
    if isinstance(f, Zero):
        return THETA
    if not isinstance(f, NSupport):
        raise DomainError(f"{f} is neither an n-support map nor the zero map")
    group = group or symmetric_group(f.n)
    return BrandtTriple(f.p, group.index(f.sigma), f.q)


def format_element(f: AffMap) -> str:
    return str(f)


_PAIR = r"\s*(\d+)\s*,\s*(\d+)\s*"
_RULES = [
    (re.compile(r"^zero$"), "zero"),
    (re.compile(rf"^const:{_PAIR}$"), "const"),
    (re.compile(rf"^ss:\s*\({_PAIR}\)\s*->\s*\({_PAIR}\)$"), "ss"),
    (re.compile(rf"^ns:{_PAIR};\s*(.+)$"), "ns"),
]


def parse_element(text: str, n: int, offset: int = 0) -> AffMap:
    """Parse ``zero``, ``const:p,q``, ``ss:(k,l)->(p,q)`` or ``ns:p,q;[i1,...,in]``.

    The permutation of an ``ns:`` term may also be given in cycle form.
    """
    stripped = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    for pattern, kind in _RULES:
        m = pattern.match(stripped)
        if not m:
            continue
        nums = [int(x) for x in m.groups()[: {"zero": 0, "const": 2, "ss": 4, "ns": 2}[kind]]]
        try:
            if kind == "zero":
                f: AffMap = Zero(n)
            elif kind == "const":
                f = Constant(n, *nums)
            elif kind == "ss":
                f = SingletonSupport(n, *nums)
            else:
                f = NSupport(n, nums[0], nums[1], parse_permutation(m.group(3), n))
            return canonical(f)
        except DomainError as exc:
            raise ParseError(str(exc), lead) from None
    raise ParseError(f"cannot parse element {stripped!r}", lead)


def parse_expression(text: str, n: int) -> AffMap:
    """Parse ``"f . g . h"`` and compose left to right (``f`` applied first)."""
    if not text.strip():
        raise ParseError("empty expression", 0)
    result = None
    pos = 0
    for term in text.split(" . "):
        f = parse_element(term, n, pos)
        result = f if result is None else compose(result, f)
        pos += len(term) + 3
    return result
