"""Finite semigroups given by a Cayley table.

Subsets of a semigroup are handled as Python ``int`` bit masks internally
(bit ``i`` set means element ``i`` is a member).  :class:`ElementSet` wraps
such a mask together with the semigroup it belongs to and is what the public
functions return.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "SemigroupError",
    "InvalidElementError",
    "AssociativityError",
    "DomainError",
    "FiniteSemigroup",
    "ElementSet",
    "Witness",
    "WITNESS_KINDS",
    "closure",
    "is_generating",
    "is_independent",
    "is_band",
    "is_prime_subset",
    "is_decomposable",
    "idempotents",
    "iter_bits",
    "write_cache",
    "read_cache",
]


class SemigroupError(Exception):
    """Base class for errors raised by this package."""


class InvalidElementError(SemigroupError, IndexError):
    pass


class AssociativityError(SemigroupError, ValueError):
    pass


class DomainError(SemigroupError, ValueError):
    """An argument lies outside the domain of an operation."""


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Multiplier:
    """Chunked lookup tables giving ``a * M`` and ``M * a`` as bit masks.

    For every element ``a`` and every ``bits``-wide chunk of the element
    range, a table maps the chunk's sub-mask to the OR of the product bits.
    Tables are built lazily, one element at a time.
    """

    def __init__(self, rows: Sequence[Sequence[int]], cols: Sequence[Sequence[int]]):
        m = len(rows)
        self.m = m
        self.bits = 8 if m <= 64 else 4
        self.nchunks = (m + self.bits - 1) // self.bits
        self.chunk_mask = (1 << self.bits) - 1
        self._rows = rows
        self._cols = cols
        self._left: list = [None] * m
        self._right: list = [None] * m

    def _build(self, products: Sequence[int]) -> list[list[int]]:
        tables = []
        width = 1 << self.bits
        for k in range(self.nchunks):
            base = k * self.bits
            table = [0] * width
            for v in range(1, width):
                low = v & -v
                j = base + low.bit_length() - 1
                if j >= self.m:
                    table[v] = table[v ^ low]
                else:
                    table[v] = table[v ^ low] | (1 << products[j])
            tables.append(table)
        return tables

    def left_image(self, a: int, mask: int) -> int:
        """Return the mask of ``{a * x : x in mask}``."""
        tables = self._left[a]
        if tables is None:
            tables = self._left[a] = self._build(self._rows[a])
        out = 0
        bits, cm = self.bits, self.chunk_mask
        k = 0
        while mask:
            chunk = mask & cm
            if chunk:
                out |= tables[k][chunk]
            mask >>= bits
            k += 1
        return out

    def right_image(self, a: int, mask: int) -> int:
        """Return the mask of ``{x * a : x in mask}``."""
        tables = self._right[a]
        if tables is None:
            tables = self._right[a] = self._build(self._cols[a])
        out = 0
        bits, cm = self.bits, self.chunk_mask
        k = 0
        while mask:
            chunk = mask & cm
            if chunk:
                out |= tables[k][chunk]
            mask >>= bits
            k += 1
        return out


class FiniteSemigroup:
    """A finite semigroup on the indices ``0 .. m-1``.

    Parameters
    ----------
    table
        ``m x m`` array; ``table[a][b]`` is the index of the product ``ab``
        (row is the left factor).
    labels
        Human-readable names, one per element.  Defaults to ``"0" .. "m-1"``.
    elements
        Optional symbolic objects, one per index, kept for callers that
        need to map indices back to e.g. affine maps.
    check_associativity
        Verify the associative law on construction.  Constructors in this
        package always leave it on; pass ``False`` only for tables whose
        provenance you trust, or when deliberately studying broken tables.
    """

    def __init__(
        self,
        table,
        labels: Sequence[str] | None = None,
        elements: Sequence | None = None,
        check_associativity: bool = True,
        name: str = "",
    ):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise DomainError(f"table must be a non-empty square array, got shape {arr.shape}")
        m = arr.shape[0]
        if arr.min() < 0 or arr.max() >= m:
            raise InvalidElementError("table entries must be valid element indices")
        self.table = arr
        self.table.setflags(write=False)
        self.size = m
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(m))
        if len(self.labels) != m:
            raise DomainError("need exactly one label per element")
        self.elements = tuple(elements) if elements is not None else None
        self.name = name
        if check_associativity:
            bad = self.associativity_violation()
            if bad is not None:
                a, b, c = bad
                raise AssociativityError(f"(ab)c != a(bc) for a={a}, b={b}, c={c}")

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        name = f" {self.name}" if self.name else ""
        return f"<FiniteSemigroup{name} of order {self.size}>"

    def __getstate__(self):
        state = self.__dict__.copy()
        for key in ("rows", "cols", "multiplier", "_index"):
            state.pop(key, None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    @cached_property
    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    @cached_property
    def cols(self) -> list[list[int]]:
        return self.table.T.tolist()

    @cached_property
    def multiplier(self) -> _Multiplier:
        return _Multiplier(self.rows, self.cols)

    @cached_property
    def _index(self) -> dict:
        if self.elements is None:
            return {}
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def product(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def index(self, element) -> int:
        """Index of a symbolic element (requires ``elements``)."""
        try:
            return self._index[element]
        except KeyError:
            raise InvalidElementError(f"{element!r} is not an element of {self!r}") from None

    def associativity_violation(self) -> tuple[int, int, int] | None:
        t = self.table
        for a in range(self.size):
            lhs = t[t[a]]  # lhs[b, c] = (ab)c
            rhs = t[a][t]  # rhs[b, c] = a(bc)
            diff = np.argwhere(lhs != rhs)
            if len(diff):
                b, c = diff[0]
                return a, int(b), int(c)
        return None

    def is_associative(self) -> bool:
        return self.associativity_violation() is None

    def mask_of(self, items: "SubsetLike") -> int:
        """Convert an iterable of indices (or an ElementSet) to a bit mask."""
        if isinstance(items, ElementSet):
            if items.semigroup is not self and items.semigroup.size != self.size:
                raise InvalidElementError("element set belongs to a different semigroup")
            return items.mask
        if isinstance(items, int):
            raise TypeError("pass an iterable of indices; use ElementSet.from_mask for raw masks")
        mask = 0
        for i in items:
            i = int(i)
            if not 0 <= i < self.size:
                raise InvalidElementError(f"index {i} out of range for order {self.size}")
            mask |= 1 << i
        return mask

    def subset(self, items: "SubsetLike") -> "ElementSet":
        return ElementSet(self, self.mask_of(items))

    def all_elements(self) -> "ElementSet":
        return ElementSet(self, self.full_mask)

    # Raw mask primitives used by the search code.

    def extend_closed(self, closed: int, extra: int) -> int:
        """Closure of ``closed | extra`` given that ``closed`` is already closed."""
        result = closed
        work = []
        new = extra & ~closed
        while new:
            low = new & -new
            work.append(low.bit_length() - 1)
            new ^= low
        result |= extra
        left = self.multiplier.left_image
        right = self.multiplier.right_image
        while work:
            e = work.pop()
            fresh = (left(e, result) | right(e, result)) & ~result
            if fresh:
                result |= fresh
                while fresh:
                    low = fresh & -fresh
                    work.append(low.bit_length() - 1)
                    fresh ^= low
        return result

    def closure_mask(self, mask: int) -> int:
        return self.extend_closed(0, mask)

    def is_closed_mask(self, mask: int) -> bool:
        left = self.multiplier.left_image
        for a in iter_bits(mask):
            if left(a, mask) & ~mask:
                return False
        return True

    def independent_mask(self, mask: int) -> bool:
        for a in iter_bits(mask):
            if (self.closure_mask(mask & ~(1 << a)) >> a) & 1:
                return False
        return True


SubsetLike = Union["ElementSet", Iterable[int]]


@dataclass(frozen=True)
class ElementSet:
    """A subset of a :class:`FiniteSemigroup`, stored as a bit mask."""

    semigroup: FiniteSemigroup
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.semigroup.size:
            raise InvalidElementError("mask has bits outside the element range")

    @classmethod
    def from_mask(cls, semigroup: FiniteSemigroup, mask: int) -> "ElementSet":
        return cls(semigroup, mask)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, i) -> bool:
        return isinstance(i, int) and 0 <= i < self.semigroup.size and bool((self.mask >> i) & 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, ElementSet):
            return self.mask == other.mask and self.semigroup.size == other.semigroup.size
        if isinstance(other, (set, frozenset)):
            return set(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.semigroup.size, self.mask))

    def __repr__(self) -> str:
        return f"ElementSet({sorted(self)})"

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.semigroup, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.semigroup, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.semigroup, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet(self.semigroup, self.semigroup.full_mask & ~self.mask)

    def sorted(self) -> list[int]:
        return list(iter_bits(self.mask))

    def labels(self) -> list[str]:
        return [self.semigroup.labels[i] for i in self]


def _mask(S: FiniteSemigroup, U: SubsetLike) -> int:
    return S.mask_of(U)


def closure(S: FiniteSemigroup, U: SubsetLike) -> ElementSet:
    """The subsemigroup generated by ``U``; the empty set generates itself."""
    return ElementSet(S, S.closure_mask(_mask(S, U)))


def is_generating(S: FiniteSemigroup, U: SubsetLike) -> bool:
    return S.closure_mask(_mask(S, U)) == S.full_mask


def is_independent(S: FiniteSemigroup, U: SubsetLike) -> bool:
    """True iff no member of ``U`` lies in the subsemigroup generated by the others."""
    return S.independent_mask(_mask(S, U))


def idempotents(S: FiniteSemigroup) -> ElementSet:
    diag = S.table[np.arange(S.size), np.arange(S.size)]
    mask = 0
    for i in np.flatnonzero(diag == np.arange(S.size)):
        mask |= 1 << int(i)
    return ElementSet(S, mask)


def is_band(S: FiniteSemigroup) -> bool:
    return idempotents(S).mask == S.full_mask


def is_prime_subset(S: FiniteSemigroup, U: SubsetLike) -> bool:
    """True iff ``ab in U`` forces ``a in U`` or ``b in U``.

    Equivalently the complement of ``U`` is closed under multiplication.
    """
    mask = _mask(S, U)
    if not mask:
        raise DomainError("prime subsets are non-empty by definition")
    return S.is_closed_mask(S.full_mask & ~mask)


def is_decomposable(S: FiniteSemigroup, a: int) -> bool:
    """True iff ``a = bc`` for some ``b, c`` both different from ``a``."""
    if not 0 <= a < S.size:
        raise InvalidElementError(f"index {a} out of range for order {S.size}")
    others = np.ones(S.size, dtype=bool)
    others[a] = False
    return bool((S.table[np.ix_(others, others)] == a).any())


WITNESS_KINDS = (
    "generating-set",
    "independent-set",
    "independent-generating-set",
    "prime-subset",
    "proper-subsemigroup",
    "dependent-set",
)


@dataclass(frozen=True)
class Witness:
    """A subset together with the property it is claimed to have."""

    kind: str
    elements: ElementSet

    def __post_init__(self):
        if self.kind not in WITNESS_KINDS:
            raise DomainError(f"unknown witness kind {self.kind!r}")

    def check(self) -> bool:
        S, U = self.elements.semigroup, self.elements
        if self.kind == "generating-set":
            return is_generating(S, U)
        if self.kind == "independent-set":
            return is_independent(S, U)
        if self.kind == "independent-generating-set":
            return is_generating(S, U) and is_independent(S, U)
        if self.kind == "prime-subset":
            return bool(U.mask) and U.mask != S.full_mask and is_prime_subset(S, U)
        if self.kind == "proper-subsemigroup":
            return bool(U.mask) and U.mask != S.full_mask and S.is_closed_mask(U.mask)
        return not is_independent(S, U)

    def labels(self) -> list[str]:
        return self.elements.labels()

    def __len__(self) -> int:
        return len(self.elements)


_MAGIC = b"SGP1"


def write_cache(S: FiniteSemigroup, path: str | Path) -> bytes:
    """Write ``S`` in the SGP1 binary format and return the bytes written.

    Layout: ``b"SGP1"``, ``m`` as u32 LE, the ``m*m`` table entries as u32 LE
    in row-major order, then ``m`` labels, each a u16 LE byte length followed
    by UTF-8 bytes.
    """
    m = S.size
    parts = [_MAGIC, struct.pack("<I", m), S.table.astype("<u4").tobytes(order="C")]
    for label in S.labels:
        raw = label.encode("utf-8")
        if len(raw) > 0xFFFF:
            raise DomainError("label too long for the cache format")
        parts.append(struct.pack("<H", len(raw)))
        parts.append(raw)
    data = b"".join(parts)
    Path(path).write_bytes(data)
    return data


def read_cache(path: str | Path, check_associativity: bool = True) -> FiniteSemigroup:
    data = Path(path).read_bytes()
    if data[:4] != _MAGIC:
        raise DomainError(f"{path}: not an SGP1 cache file")
    (m,) = struct.unpack_from("<I", data, 4)
    offset = 8
    nbytes = 4 * m * m
    if len(data) < offset + nbytes:
        raise DomainError(f"{path}: truncated table")
    table = np.frombuffer(data, dtype="<u4", count=m * m, offset=offset).reshape(m, m)
    offset += nbytes
    labels = []
    for _ in range(m):
        if len(data) < offset + 2:
            raise DomainError(f"{path}: truncated label section")
        (length,) = struct.unpack_from("<H", data, offset)
        offset += 2
        labels.append(data[offset : offset + length].decode("utf-8"))
        offset += length
    return FiniteSemigroup(table.astype(np.int64), labels, check_associativity=check_associativity)
