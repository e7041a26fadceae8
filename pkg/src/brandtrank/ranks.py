"""The five ranks of a finite semigroup.

``r1`` small rank
    largest ``k`` such that every ``k``-subset is independent;
``r2`` lower rank
    size of a smallest generating set;
``r3`` intermediate rank
    size of a largest independent generating set;
``r4`` upper rank
    size of a largest independent set;
``r5`` large rank
    smallest ``k`` such that every ``k``-subset generates.

All searches are exact when they finish inside their :class:`SearchBudget`;
otherwise they return the best bound found with an honest status.  Witnesses
are the lexicographically smallest optimal subsets (comparing sorted index
sequences), independent of the number of worker processes.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .semigroup import (
    DomainError,
    ElementSet,
    FiniteSemigroup,
    SemigroupError,
    Witness,
    is_band,
    is_decomposable,
    iter_bits,
)

__all__ = [
    "RankReport",
    "SearchBudget",
    "CertificationError",
    "small_rank",
    "lower_rank",
    "certified_lower_rank_aplus",
    "independent_set_search",
    "intermediate_rank",
    "upper_rank",
    "smallest_prime_subset",
    "large_rank",
    "all_ranks",
]

STATUSES = ("exact", "lower-bound", "upper-bound", "formula")


class CertificationError(SemigroupError):
    """A structural sub-check failed; this signals a bug, not a hard input."""


@dataclass(frozen=True)
class SearchBudget:
    """Limits for one search call.  ``None`` means unlimited."""

    max_seconds: float | None = None
    max_nodes: int | None = None
    workers: int = 1

    def __post_init__(self):
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise DomainError("max_seconds must be positive")
        if self.max_nodes is not None and self.max_nodes <= 0:
            raise DomainError("max_nodes must be positive")
        if self.workers < 1:
            raise DomainError("workers must be at least 1")


@dataclass
class RankReport:
    rank: str
    value: int
    status: str
    witness: Witness | None
    method: str
    elapsed: float = 0.0
    bounds: tuple[int, int] | None = None
    nodes: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise DomainError(f"unknown status {self.status!r}")

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def witness_indices(self) -> list[int] | None:
        return None if self.witness is None else self.witness.elements.sorted()

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "value": self.value,
            "status": self.status,
            "witness": None if self.witness is None else self.witness.labels(),
            "witness_kind": None if self.witness is None else self.witness.kind,
            "method": self.method,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "bounds": list(self.bounds) if self.bounds is not None else None,
        }


class _BudgetExhausted(Exception):
    pass


class _Clock:
    def __init__(self, deadline: float | None, max_nodes: int | None):
        self.deadline = deadline
        self.max_nodes = max_nodes
        self.nodes = 0
        self._polls = 0

    def poll(self) -> None:
        """Deadline check for work that is not a search node."""
        self._polls += 1
        if self.deadline is not None and not self._polls & 63 and time.monotonic() > self.deadline:
            raise _BudgetExhausted

    def expired(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _BudgetExhausted
        if self.deadline is not None and not self.nodes & 255 and time.monotonic() > self.deadline:
            raise _BudgetExhausted


def _deadline(budget: SearchBudget, start: float) -> float | None:
    return None if budget.max_seconds is None else start + budget.max_seconds


def _run_branches(
    func: Callable,
    argsets: Sequence[tuple],
    workers: int,
    stop: Callable | None = None,
    max_nodes: int | None = None,
) -> tuple[list, bool]:
    """Run ``func(*args)`` for each argset, in argset order.

    Every branch returns a tuple whose first item is its status and whose
    last item is its node count.  Results are read in order and cut off
    after the first branch that satisfies ``stop``, ran out of budget, or
    pushed the running node total past ``max_nodes``; later entries are
    ``None``.  The second return value says whether the cut was forced by the
    budget.  The same rule applies whatever the worker count, so the
    surviving prefix never depends on parallelism.
    """
    out: list = []
    total = 0

    def accept(res) -> str | None:
        nonlocal total
        out.append(res)
        total += res[-1]
        if res[0] == "budget":
            return "budget"
        if stop is not None and stop(res):
            return "stop"
        if max_nodes is not None and total > max_nodes and len(out) < len(argsets):
            return "budget"
        return None

    reason = None
    if workers <= 1 or len(argsets) <= 1:
        for args in argsets:
            reason = accept(func(*args))
            if reason:
                break
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(func, *args) for args in argsets]
            for f in futures:
                reason = accept(f.result())
                if reason:
                    for rest in futures:
                        rest.cancel()
                    break
    out.extend([None] * (len(argsets) - len(out)))
    return out, reason == "budget"


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _es(S: FiniteSemigroup, mask: int) -> ElementSet:
    return ElementSet(S, mask)


# --------------------------------------------------------------------- r1


def small_rank(S: FiniteSemigroup, budget: SearchBudget | None = None) -> RankReport:
    """Small rank.

    A semigroup with at least two elements that is not a band has small
    rank 1: ``{a, a*a}`` is dependent for any non-idempotent ``a``.  Bands
    are searched by increasing subset size for a dependent subset.
    """
    budget = budget or SearchBudget()
    start = time.monotonic()
    m = S.size
    if m == 1:
        return RankReport("r1", 1, "exact", None, "search", time.monotonic() - start, (1, 1))
    if not is_band(S):
        a = next(i for i in range(m) if S.product(i, i) != i)
        w = Witness("dependent-set", _es(S, (1 << a) | (1 << S.product(a, a))))
        return RankReport("r1", 1, "exact", w, "theorem-certified", time.monotonic() - start, (1, 1))
    clock = _Clock(_deadline(budget, start), budget.max_nodes)
    lo = 1
    try:
        for k in range(2, m + 1):
            for combo in combinations(range(m), k):
                clock.tick()
                mask = 0
                for i in combo:
                    mask |= 1 << i
                if not S.independent_mask(mask):
                    w = Witness("dependent-set", _es(S, mask))
                    return RankReport("r1", k - 1, "exact", w, "search", time.monotonic() - start, (k - 1, k - 1), clock.nodes)
            lo = k
    except _BudgetExhausted:
        return RankReport("r1", lo, "lower-bound", None, "search", time.monotonic() - start, (lo, m), clock.nodes)
    return RankReport("r1", m, "exact", None, "search", time.monotonic() - start, (m, m), clock.nodes)


# --------------------------------------------------------------------- r2


def _required_mask(S: FiniteSemigroup) -> int:
    """Elements outside the subsemigroup generated by all other elements."""
    full = S.full_mask
    req = 0
    for a in range(S.size):
        if is_decomposable(S, a):
            continue
        if not (S.closure_mask(full & ~(1 << a)) >> a) & 1:
            req |= 1 << a
    return req


def _greedy_generating(S: FiniteSemigroup, base: int) -> int:
    full = S.full_mask
    mask, closed = base, S.closure_mask(base)
    for a in range(S.size):
        if closed == full:
            break
        if not (closed >> a) & 1:
            mask |= 1 << a
            closed = S.extend_closed(closed, 1 << a)
    for a in reversed(list(iter_bits(mask & ~base))):
        if S.closure_mask(mask & ~(1 << a)) == full:
            mask &= ~(1 << a)
    return mask


def _generating_dfs(S: FiniteSemigroup, closed: int, start: int, picks: int, clock: _Clock) -> list[int] | None:
    """Lexicographically first ``picks`` indices ``>= start`` completing ``closed`` to everything.

    Two prunings keep this small: an index already in the current closure is
    never picked (a minimum generating set is irredundant), and an index
    inside the closure reached through an earlier, failed sibling is skipped
    (whatever it could complete, that sibling could complete too).
    """
    full = S.full_mask
    m = S.size
    if picks == 0:
        return [] if closed == full else None
    above = full & ~((1 << start) - 1)
    if S.extend_closed(closed, above) != full:
        return None
    dominated = closed
    for x in range(start, m - picks + 1):
        if (dominated >> x) & 1:
            continue
        clock.tick()
        grown = S.extend_closed(closed, 1 << x)
        if picks == 1:
            if grown == full:
                return [x]
        else:
            rest = _generating_dfs(S, grown, x + 1, picks - 1, clock)
            if rest is not None:
                return [x] + rest
        dominated |= grown
    return None


def _generating_branch(S, closed, start, picks, deadline, max_nodes):
    clock = _Clock(deadline, max_nodes)
    if clock.expired():
        return ("budget", None, 0)
    try:
        return ("done", _generating_dfs(S, closed, start, picks, clock), clock.nodes)
    except _BudgetExhausted:
        return ("budget", None, clock.nodes)


def _generating_set_of_size(S, base_closed, k_extra, budget, deadline):
    """Search for ``k_extra`` additional generators; returns (picks|None, exhausted, nodes)."""
    full = S.full_mask
    m = S.size
    if k_extra == 0:
        return ([] if base_closed == full else None), True, 0
    above_ok = S.extend_closed(base_closed, full)
    if above_ok != full:
        return None, True, 0
    argsets = []
    heads = []
    dominated = base_closed
    for x in range(0, m - k_extra + 1):
        if (dominated >> x) & 1:
            continue
        grown = S.extend_closed(base_closed, 1 << x)
        argsets.append((S, grown, x + 1, k_extra - 1, deadline, budget.max_nodes))
        heads.append(x)
        dominated |= grown
    results, truncated = _run_branches(
        _generating_branch,
        argsets,
        budget.workers,
        stop=lambda r: r[1] is not None,
        max_nodes=budget.max_nodes,
    )
    nodes = sum(r[2] for r in results if r is not None)
    for head, res in zip(heads, results):
        if res is not None and res[1] is not None:
            return [head] + res[1], True, nodes
    return None, not truncated, nodes


def lower_rank(
    S: FiniteSemigroup,
    budget: SearchBudget | None = None,
    seed: Sequence[int] | None = None,
) -> RankReport:
    """Lower rank by iterative deepening on the size of a generating set.

    Elements that no other elements can produce are placed in every
    candidate up front.  ``seed`` may supply a known generating set; it only
    tightens the starting upper bound.
    """
    budget = budget or SearchBudget()
    start = time.monotonic()
    deadline = _deadline(budget, start)
    full = S.full_mask
    required = _required_mask(S)
    lo = max(1, _popcount(required))
    best = _greedy_generating(S, required)
    if seed is not None:
        smask = S.mask_of(seed)
        if S.closure_mask(smask) == full and _popcount(smask) < _popcount(best):
            best = smask
    hi = _popcount(best)
    base_closed = S.closure_mask(required)
    others = required
    nodes = 0
    exact = False
    for k in range(lo, hi + 1):
        picks, finished, used = _generating_set_of_size(S, base_closed, k - _popcount(required), budget, deadline)
        nodes += used
        if not finished:
            break
        if picks is not None:
            mask = others
            for x in picks:
                mask |= 1 << x
            best, hi, exact = mask, k, True
            break
        lo = k + 1
    elapsed = time.monotonic() - start
    w = Witness("generating-set", _es(S, best))
    if exact:
        return RankReport("r2", hi, "exact", w, "search", elapsed, (hi, hi), nodes)
    return RankReport("r2", hi, "upper-bound", w, "search", elapsed, (lo, hi), nodes)


def certified_lower_rank_aplus(n: int, budget: SearchBudget | None = None) -> RankReport:
    """Lower rank of ``A+(B_n)`` by machine-checking the structural argument.

    Checks, on the actual composition table:

    1. products of non-zero maps: the result is n-support exactly when both
       factors are, is constant exactly when a factor is, and is
       singleton-support only if a factor is;
    2. dropping all singleton-support maps, or all constants, leaves a
       non-generating set;
    3. the n-support maps with the zero map form a copy of ``B(S_n, n)``
       (via :func:`to_brandt`), whose lower rank is found by exhaustive search;
    4. the explicit minimum generating set generates and has exactly two
       more elements than that lower rank.

    For ``n >= 4`` the closed form ``n + 3`` is reported with status
    ``"formula"``.
    """
    from . import affine, brandt, verify

    start = time.monotonic()
    if n < 2:
        raise DomainError("certified lower rank applies to n >= 2")
    if n >= 4:
        return RankReport("r2", n + 3, "formula", None, "formula", time.monotonic() - start, (n + 3, n + 3))
    S = affine.build_cayley(n, "aplus")
    kinds = [affine.support(f).tag for f in S.elements]
    zero = kinds.index("zero")
    rows = S.rows
    for a in range(S.size):
        if a == zero:
            continue
        for b in range(S.size):
            if b == zero:
                continue
            c = rows[a][b]
            if c == zero:
                continue
            ka, kb, kc = kinds[a], kinds[b], kinds[c]
            if (kc == "n-support") != (ka == kb == "n-support"):
                raise CertificationError(f"n-support propagation fails at {S.labels[a]} . {S.labels[b]}")
            if (kc == "full") != ("full" in (ka, kb)):
                raise CertificationError(f"full-support propagation fails at {S.labels[a]} . {S.labels[b]}")
            if kc == "singleton" and "singleton" not in (ka, kb):
                raise CertificationError(f"singleton propagation fails at {S.labels[a]} . {S.labels[b]}")
    for tag in ("singleton", "full"):
        rest = S.mask_of(i for i, k in enumerate(kinds) if k != tag)
        if S.closure_mask(rest) == S.full_mask:
            raise CertificationError(f"everything but the {tag} maps generates")
    G = brandt.symmetric_group(n)
    B = brandt.build_brandt(G, n)
    part = [i for i, k in enumerate(kinds) if k in ("zero", "n-support")]
    to_b = {i: B.index(affine.to_brandt(S.elements[i], G)) for i in part}
    if sorted(to_b.values()) != list(range(B.size)):
        raise CertificationError("to_brandt is not a bijection onto B(S_n, n)")
    for a in part:
        for b in part:
            if to_b.get(rows[a][b]) != B.rows[to_b[a]][to_b[b]]:
                raise CertificationError("to_brandt is not a homomorphism")
    brandt_report = lower_rank(B, budget)
    if not brandt_report.exact:
        raise CertificationError("lower rank of B(S_n, n) not settled within budget")
    Q = [S.index(f) for f in verify.minimum_generating_set(n)]
    qmask = S.mask_of(Q)
    if S.closure_mask(qmask) != S.full_mask:
        raise CertificationError("the explicit minimum generating set does not generate")
    value = brandt_report.value + 2
    if len(Q) != value:
        raise CertificationError(f"explicit generating set has {len(Q)} elements, bound is {value}")
    w = Witness("generating-set", _es(S, qmask))
    return RankReport("r2", value, "exact", w, "theorem-certified", time.monotonic() - start, (value, value), brandt_report.nodes)


# ------------------------------------------------------------------ r3 / r4


class _IndependentSearch:
    """Depth-first search over independent sets in increasing index order.

    Every prefix of an independent set is independent, so extending sets one
    element at a time reaches all of them.  Each node keeps the closure of
    the whole set and of the set minus each member, so testing a candidate
    costs one closure extension per member.
    """

    def __init__(self, S, require_generating, best, found, clock, memo_limit=200_000):
        self.S = S
        self.full = S.full_mask
        self.require_generating = require_generating
        self.best = best
        self.found = found
        self.witness: list[int] | None = None
        self.clock = clock
        self.memo: dict = {}
        self.memo_limit = memo_limit

    def extend(self, closed: int, x: int) -> int:
        key = (closed, x)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.S.extend_closed(closed, 1 << x)
            if len(self.memo) >= self.memo_limit:
                self.memo.clear()
            self.memo[key] = hit
        return hit

    def fits(self, members, closed_minus, closed_all, z) -> bool:
        self.clock.poll()
        if (closed_all >> z) & 1:
            return False
        for a, cm in zip(members, closed_minus):
            if (self.extend(cm, z) >> a) & 1:
                return False
        return True

    def record(self, members) -> None:
        size = len(members)
        if size > self.best or (size == self.best and not self.found):
            self.best = size
            self.found = True
            self.witness = list(members)

    def run(self, members, closed_minus, closed_all, cands) -> None:
        S = self.S
        if self.require_generating and cands:
            pool = 0
            for z in cands:
                pool |= 1 << z
            if S.extend_closed(closed_all, pool) != self.full:
                return
        size = len(members)
        for idx, y in enumerate(cands):
            bound = size + len(cands) - idx
            if bound < self.best or (bound == self.best and self.found):
                return
            self.clock.tick()
            new_members = members + [y]
            new_minus = [self.extend(cm, y) for cm in closed_minus] + [closed_all]
            new_all = self.extend(closed_all, y)
            if not self.require_generating or new_all == self.full:
                self.record(new_members)
            if new_all == self.full:
                continue
            nxt = [z for z in cands[idx + 1 :] if self.fits(new_members, new_minus, new_all, z)]
            if nxt:
                self.run(new_members, new_minus, new_all, nxt)


def _independent_branch(S, head, cands, require_generating, best, deadline, max_nodes):
    clock = _Clock(deadline, max_nodes)
    search = _IndependentSearch(S, require_generating, best, False, clock)
    closed_head = S.closure_mask(1 << head)
    if clock.expired():
        return "budget", -1, None, 0
    try:
        clock.tick()
        if not require_generating or closed_head == S.full_mask:
            search.record([head])
        if closed_head != S.full_mask:
            nxt = [z for z in cands if search.fits([head], [0], closed_head, z)]
            if nxt:
                search.run([head], [0], closed_head, nxt)
        status = "done"
    except _BudgetExhausted:
        status = "budget"
    return status, search.best if search.found else -1, search.witness, clock.nodes


def independent_set_search(
    S: FiniteSemigroup,
    require_generating: bool = False,
    budget: SearchBudget | None = None,
    seed: Sequence[int] | None = None,
) -> RankReport:
    """Largest independent set (``r4``), or largest independent generating set (``r3``).

    ``seed`` is an independent (generating, if required) set used as the
    initial bound; the search still has to finish to report ``"exact"``.
    """
    budget = budget or SearchBudget()
    start = time.monotonic()
    deadline = _deadline(budget, start)
    rank = "r3" if require_generating else "r4"
    kind = "independent-generating-set" if require_generating else "independent-set"
    m = S.size
    seed_mask = 0
    if seed is not None:
        seed_mask = S.mask_of(seed)
        ok = S.independent_mask(seed_mask) and (not require_generating or S.closure_mask(seed_mask) == S.full_mask)
        if not ok:
            raise DomainError("seed does not have the required property")
    seed_size = _popcount(seed_mask)
    argsets = [(S, y, list(range(y + 1, m)), require_generating, seed_size, deadline, budget.max_nodes) for y in range(m)]
    results, truncated = _run_branches(_independent_branch, argsets, budget.workers, max_nodes=budget.max_nodes)
    exhausted = not truncated
    results = [r for r in results if r is not None]
    nodes = sum(r[3] for r in results)
    best_size, best_w = (seed_size, sorted(iter_bits(seed_mask))) if seed_mask else (0, None)
    for status, size, wit, _ in results:
        if wit is not None and (size > best_size or (size == best_size and (best_w is None or wit < best_w))):
            best_size, best_w = size, wit
    elapsed = time.monotonic() - start
    if best_w is None:
        if exhausted:
            return RankReport(rank, 0, "exact", None, "search", elapsed, (0, 0), nodes)
        return RankReport(rank, 0, "lower-bound", None, "search", elapsed, (0, m), nodes)
    w = Witness(kind, _es(S, S.mask_of(best_w)))
    if exhausted:
        return RankReport(rank, best_size, "exact", w, "search", elapsed, (best_size, best_size), nodes)
    return RankReport(rank, best_size, "lower-bound", w, "search", elapsed, (best_size, m), nodes)


def intermediate_rank(S, budget=None, seed=None) -> RankReport:
    return independent_set_search(S, True, budget, seed)


def upper_rank(S, budget=None, seed=None) -> RankReport:
    return independent_set_search(S, False, budget, seed)


# --------------------------------------------------------------------- r5


class _PrimeSearch:
    """Branching on violations of primality.

    A state is a pair of masks: ``inside`` (already in the prime subset) and
    ``outside`` (forbidden from it).  A violation is a product ``ab`` inside
    with ``a`` and ``b`` both not inside; one of the two factors must join.
    """

    def __init__(self, S: FiniteSemigroup, clock: _Clock):
        self.S = S
        self.m = S.size
        self.full = S.full_mask
        self.table = S.table
        self.clock = clock

    def _bools(self, mask: int) -> np.ndarray:
        return np.array([(mask >> i) & 1 for i in range(self.m)], dtype=bool)

    def violations(self, inside: int):
        out_idx = np.array([i for i in range(self.m) if not (inside >> i) & 1], dtype=np.int64)
        if out_idx.size == 0:
            return out_idx, out_idx
        in_arr = self._bools(inside)
        sub = self.table[np.ix_(out_idx, out_idx)]
        ai, bi = np.nonzero(in_arr[sub])
        return out_idx[ai], out_idx[bi]

    def propagate(self, inside: int, outside: int):
        """Add every forced factor; returns (inside, a, b) or None when infeasible."""
        while True:
            a, b = self.violations(inside)
            if a.size == 0:
                return inside, a, b
            out_arr = self._bools(outside)
            a_free = ~out_arr[a]
            b_free = ~out_arr[b]
            if np.any(~a_free & ~b_free):
                return None
            single = (a_free ^ b_free) | ((a == b) & a_free)
            if not np.any(single):
                return inside, a, b
            forced = np.unique(np.where(a_free, a, b)[single])
            for x in forced.tolist():
                inside |= 1 << x

    @staticmethod
    def matching_bound(a: np.ndarray, b: np.ndarray, need: int) -> int:
        """Greedy count of violations with pairwise disjoint factor pairs (stops at ``need``)."""
        used = set()
        count = 0
        for x, y in zip(a.tolist()[:4000], b.tolist()[:4000]):
            if x in used or y in used:
                continue
            used.add(x)
            used.add(y)
            count += 1
            if count >= need:
                break
        return count


class _SmallestPrime(_PrimeSearch):
    """Finds the minimum size; branches on the factor occurring in most violations."""

    def __init__(self, S, clock, best):
        super().__init__(S, clock)
        self.best = best
        self.witness: int | None = None

    def run(self, inside: int, outside: int) -> None:
        self.clock.tick()
        state = self.propagate(inside, outside)
        if state is None:
            return
        inside, a, b = state
        size = _popcount(inside)
        if size >= self.best:
            return
        if a.size == 0:
            if inside and inside != self.full:
                self.best = size
                self.witness = inside
            return
        if size + self.matching_bound(a, b, self.best - size) >= self.best:
            return
        counts = np.bincount(np.concatenate([a, b[a != b]]), minlength=self.m)
        x = int(np.argmax(counts))
        self.run(inside | (1 << x), outside)
        self.run(inside, outside | (1 << x))


class _FirstPrime(_PrimeSearch):
    """Lexicographically first prime subset of at most ``cap`` elements."""

    def __init__(self, S, clock, cap):
        super().__init__(S, clock)
        self.cap = cap

    def run(self, inside: int, outside: int) -> int | None:
        self.clock.tick()
        state = self.propagate(inside, outside)
        if state is None:
            return None
        inside, a, b = state
        size = _popcount(inside)
        if size > self.cap:
            return None
        if a.size == 0:
            return inside if inside and inside != self.full else None
        if size + self.matching_bound(a, b, self.cap - size + 1) > self.cap:
            return None
        undecided = self.full & ~inside & ~outside
        if not undecided:
            return None
        low = undecided & -undecided
        found = self.run(inside | low, outside)
        if found is not None:
            return found
        return self.run(inside, outside | low)


def _greedy_prime(S: FiniteSemigroup) -> tuple[int, int]:
    """Quick upper bound: from each seed, keep adding the commonest violating factor."""
    search = _PrimeSearch(S, _Clock(None, None))
    best, best_mask = S.size, 0
    for seed in range(S.size):
        inside = 1 << seed
        while True:
            state = search.propagate(inside, 0)
            inside, a, b = state
            if a.size == 0 or _popcount(inside) >= best:
                break
            counts = np.bincount(np.concatenate([a, b]), minlength=S.size)
            inside |= 1 << int(np.argmax(counts))
        size = _popcount(inside)
        if a.size == 0 and inside != S.full_mask and size < best:
            best, best_mask = size, inside
    return best, best_mask


def _smallest_prime_branch(S, seed, best, deadline, max_nodes):
    clock = _Clock(deadline, max_nodes)
    if clock.expired():
        return "budget", best, None, 0
    search = _SmallestPrime(S, clock, best)
    outside = (1 << seed) - 1
    try:
        search.run(1 << seed, outside)
        status = "done"
    except _BudgetExhausted:
        status = "budget"
    return status, search.best, search.witness, clock.nodes


def _first_prime_branch(S, seed, cap, deadline, max_nodes):
    clock = _Clock(deadline, max_nodes)
    if clock.expired():
        return "budget", None, 0
    search = _FirstPrime(S, clock, cap)
    try:
        found = search.run(1 << seed, (1 << seed) - 1)
        status = "done"
    except _BudgetExhausted:
        found, status = None, "budget"
    return status, found, clock.nodes


def smallest_prime_subset(S: FiniteSemigroup, budget: SearchBudget | None = None) -> RankReport:
    """Smallest proper prime subset; ``value`` is its size.

    The complement of a prime subset is a subsemigroup, so this also yields a
    largest proper subsemigroup.  A first pass finds the optimum size; a
    second pass, deciding elements in index order, returns the
    lexicographically first subset of that size.
    """
    budget = budget or SearchBudget()
    start = time.monotonic()
    deadline = _deadline(budget, start)
    m = S.size
    if m < 2:
        raise DomainError("a proper prime subset needs at least two elements")
    idem = next(i for i in range(m) if S.product(i, i) == i)
    best = m - 1
    best_mask = S.full_mask & ~(1 << idem)
    nodes = 0
    g_best, g_mask = _greedy_prime(S)
    if g_best < best:
        best, best_mask = g_best, g_mask
    # every branch starts from the same bound so results do not depend on the worker count
    argsets = [(S, seed, best, deadline, budget.max_nodes) for seed in range(m)]
    results, truncated = _run_branches(_smallest_prime_branch, argsets, budget.workers, max_nodes=budget.max_nodes)
    exhausted = not truncated
    for res in results:
        if res is None:
            break
        status, b, w, used = res
        nodes += used
        if w is not None and b < best:
            best, best_mask = b, w
    if exhausted:
        argsets = [(S, seed, best, deadline, budget.max_nodes) for seed in range(m)]
        results, truncated = _run_branches(
            _first_prime_branch, argsets, budget.workers, stop=lambda r: r[1] is not None, max_nodes=budget.max_nodes
        )
        exhausted = not truncated
        for res in results:
            if res is None:
                break
            status, found, used = res
            nodes += used
            if found is not None:
                best_mask = found
    elapsed = time.monotonic() - start
    w = Witness("prime-subset", _es(S, best_mask))
    if exhausted:
        return RankReport("prime", best, "exact", w, "search", elapsed, (best, best), nodes)
    return RankReport("prime", best, "upper-bound", w, "search", elapsed, (1, best), nodes)


def large_rank(S: FiniteSemigroup, budget: SearchBudget | None = None) -> RankReport:
    """Large rank: one more than the order of a largest proper subsemigroup."""
    start = time.monotonic()
    m = S.size
    if m == 1:
        return RankReport("r5", 1, "exact", None, "convention", time.monotonic() - start, (1, 1))
    prime = smallest_prime_subset(S, budget)
    value = m - prime.value + 1
    w = Witness("proper-subsemigroup", prime.witness.elements.complement())
    status = "exact" if prime.exact else "lower-bound"
    bounds = (value, value) if prime.exact else (value, m)
    return RankReport("r5", value, status, w, "search", time.monotonic() - start, bounds, prime.nodes)


def all_ranks(S: FiniteSemigroup, budget: SearchBudget | None = None, seeds: dict | None = None) -> dict[str, RankReport]:
    seeds = seeds or {}
    return {
        "r1": small_rank(S, budget),
        "r2": lower_rank(S, budget, seeds.get("r2")),
        "r3": independent_set_search(S, True, budget, seeds.get("r3")),
        "r4": independent_set_search(S, False, budget, seeds.get("r4")),
        "r5": large_rank(S, budget),
    }
