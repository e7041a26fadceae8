"""Permutations, small symmetric groups and Brandt semigroups ``B(G, n)``.

Permutations act on the right of their argument: ``p(i)`` is the image of
``i`` and ``a.then(b)`` (also ``a * b``) applies ``a`` first.  Points are
1-based throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

from .semigroup import DomainError, FiniteSemigroup, InvalidElementError, SemigroupError

__all__ = [
    "Permutation",
    "perm_compose",
    "parse_permutation",
    "GroupTable",
    "symmetric_group",
    "trivial_group",
    "THETA",
    "BrandtTriple",
    "brandt_product",
    "build_brandt",
    "brandt_generating_set",
    "MAX_BRANDT_ORDER",
]

MAX_SYMMETRIC_DEGREE = 5
MAX_BRANDT_ORDER = 385


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{1..n}`` stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise DomainError(f"{list(self.images)} is not a permutation of 1..{len(self.images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        seen = set()
        for cycle in cycles:
            for i, a in enumerate(cycle):
                if not 1 <= a <= n or a in seen:
                    raise DomainError(f"bad cycle {tuple(cycle)} for degree {n}")
                seen.add(a)
                images[a - 1] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def then(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise DomainError(f"degree mismatch: {self.degree} vs {other.degree}")
        return Permutation(tuple(other.images[a - 1] for a in self.images))

    __mul__ = then

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, a in enumerate(self.images, start=1):
            inv[a - 1] = i
        return Permutation(tuple(inv))

    def preimage(self, j: int) -> int:
        return self.images.index(j) + 1

    def is_identity(self) -> bool:
        return all(a == i for i, a in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.images)) + "]"

    def __repr__(self) -> str:
        return f"Permutation({self})"


def perm_compose(a: Permutation, b: Permutation) -> Permutation:
    """``i(ab) = (ia)b``."""
    return a.then(b)


_IMAGE_LIST = re.compile(r"^\[\s*(\d+(?:\s*,\s*\d+)*)?\s*\]$")
_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int | None = None) -> Permutation:
    """Parse ``"[2,3,1]"`` (image list) or ``"(1 2 3)"`` / ``"(1 2)(3 4)"`` (cycles).

    Cycle notation needs ``n`` unless the largest point mentioned is the degree.
    ``"()"`` is the identity.
    """
    text = text.strip()
    match = _IMAGE_LIST.match(text)
    if match:
        body = match.group(1)
        images = tuple(int(x) for x in body.split(",")) if body else ()
        perm = Permutation(images)
        if n is not None and perm.degree != n:
            raise DomainError(f"expected degree {n}, got {perm.degree}")
        return perm
    if text.startswith("("):
        if _CYCLE.sub("", text).strip():
            raise DomainError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in _CYCLE.findall(text):
            points = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
            if points:
                cycles.append(points)
        largest = max((max(c) for c in cycles), default=1)
        degree = n if n is not None else largest
        if largest > degree:
            raise DomainError(f"cycle point {largest} exceeds degree {degree}")
        return Permutation.from_cycles(degree, cycles)
    raise DomainError(f"cannot parse permutation {text!r}")


@dataclass(frozen=True)
class GroupTable:
    """A finite group given by its multiplication table.

    ``elements`` optionally carries the underlying objects (permutations for
    symmetric groups) in table order.
    """

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    elements: tuple = ()

    def __post_init__(self):
        order = len(self.table)
        if order == 0 or any(len(row) != order for row in self.table):
            raise DomainError("group table must be non-empty and square")
        if len(self.labels) != order:
            raise DomainError("need one label per group element")
        t = self.table
        rng = range(order)
        for a in rng:
            for b in rng:
                if not 0 <= t[a][b] < order:
                    raise InvalidElementError("group table entry out of range")
        for a in rng:
            for b in rng:
                ab = t[a][b]
                for c in rng:
                    if t[ab][c] != t[a][t[b][c]]:
                        raise DomainError("group table is not associative")
        if self._identity() is None:
            raise DomainError("group table has no identity")
        e = self._identity()
        for a in rng:
            if not any(t[a][b] == e == t[b][a] for b in rng):
                raise DomainError(f"element {self.labels[a]} has no inverse")

    def _identity(self):
        t = self.table
        for e in range(len(t)):
            if all(t[e][x] == x == t[x][e] for x in range(len(t))):
                return e
        return None

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity()

    @property
    def inverse(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in range(self.order) if self.table[a][b] == e) for a in range(self.order))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def index(self, element) -> int:
        if self.elements:
            return self.elements.index(element)
        return self.labels.index(str(element))

    def subgroup_generated(self, gens: Iterable[int]) -> set[int]:
        found = {self.identity}
        frontier = list(found)
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        return found


def symmetric_group(n: int) -> GroupTable:
    """``S_n`` with elements in lexicographic order of their image lists."""
    if not 1 <= n <= MAX_SYMMETRIC_DEGREE:
        raise DomainError(f"symmetric groups are supported for 1 <= n <= {MAX_SYMMETRIC_DEGREE}")
    perms = [Permutation(p) for p in permutations(range(1, n + 1))]
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(tuple(index[a.then(b)] for b in perms) for a in perms)
    return GroupTable(table, tuple(str(p) for p in perms), tuple(perms))


def trivial_group() -> GroupTable:
    return GroupTable(((0,),), ("e",), ())


class _Theta:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "θ"

    def __reduce__(self):
        return (_Theta, ())

    # sorts before every triple / pair
    def __lt__(self, other):
        return other is not self

    def __gt__(self, other):
        return False


THETA = _Theta()


@dataclass(frozen=True, order=True)
class BrandtTriple:
    """The element ``(i, g, j)`` of ``B(G, n)``; ``g`` is a group index."""

    i: int
    g: int
    j: int


def _check_brandt(n: int, G: GroupTable, x) -> None:
    if x is THETA:
        return
    if not isinstance(x, BrandtTriple):
        raise DomainError(f"{x!r} is not a Brandt semigroup element")
    if not (1 <= x.i <= n and 1 <= x.j <= n and 0 <= x.g < G.order):
        raise DomainError(f"malformed triple {x!r} for n={n}, |G|={G.order}")


def brandt_product(n: int, G: GroupTable, x, y):
    _check_brandt(n, G, x)
    _check_brandt(n, G, y)
    if x is THETA or y is THETA or x.j != y.i:
        return THETA
    return BrandtTriple(x.i, G.mul(x.g, y.g), y.j)


def brandt_elements(G: GroupTable, n: int) -> list:
    return [THETA] + [BrandtTriple(i, g, j) for i in range(1, n + 1) for g in range(G.order) for j in range(1, n + 1)]


def brandt_label(G: GroupTable, x) -> str:
    if x is THETA:
        return "θ"
    return f"({x.i},{G.labels[x.g]},{x.j})"


def build_brandt(G: GroupTable, n: int, check_associativity: bool = True) -> FiniteSemigroup:
    """The Brandt semigroup ``B(G, n)``: θ first, then triples by ``(i, g, j)``."""
    if n < 1:
        raise DomainError("n must be positive")
    size = G.order * n * n + 1
    if size > MAX_BRANDT_ORDER:
        raise DomainError(f"|B(G,{n})| = {size} exceeds the supported maximum {MAX_BRANDT_ORDER}")
    elems = brandt_elements(G, n)
    index = {x: k for k, x in enumerate(elems)}
    table = [[index[brandt_product(n, G, x, y)] for y in elems] for x in elems]
    return FiniteSemigroup(
        table,
        [brandt_label(G, x) for x in elems],
        elems,
        check_associativity=check_associativity,
        name=f"B(G{G.order},{n})",
    )


def brandt_generating_set(G: GroupTable, group_gens: Sequence[int], n: int) -> list[BrandtTriple]:
    """A generating set of ``B(G, n)`` of size ``r + n - 1`` built from ``r`` group generators.

    The result is ``(1,g_1,1), ..., (1,g_{r-1},1), (1,g_r,2), (2,e,3), ...,
    (n-1,e,n), (n,e,1)``.  The trivial group may be passed with no generators.
    """
    if n < 2:
        raise DomainError("the construction needs n >= 2")
    gens = list(group_gens)
    if not gens and G.order == 1:
        gens = [G.identity]
    if not gens or G.subgroup_generated(gens) != set(range(G.order)):
        raise DomainError("group_gens do not generate G")
    e = G.identity
    out = [BrandtTriple(1, g, 1) for g in gens[:-1]]
    out.append(BrandtTriple(1, gens[-1], 2))
    out.extend(BrandtTriple(i, e, i + 1) for i in range(2, n))
    out.append(BrandtTriple(n, e, 1))
    S = build_brandt(G, n, check_associativity=False)
    if S.closure_mask(S.mask_of(S.index(x) for x in out)) != S.full_mask:
        raise SemigroupError("constructed set does not generate B(G, n)")  # pragma: no cover
    return out
