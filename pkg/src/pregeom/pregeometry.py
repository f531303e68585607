"""Closure, rank and pregeometry extraction from a predimension function.

The rank of a subset B is min { predim(X) : B <= X <= universe }, which is a
matroid rank function whenever the structure is in its class (submodularity
plus unit increase).  Closure is the associated matroid closure.  On
self-sufficient bases this coincides with the union-of-dependent-sets
description of the closure; the closed-set families agree everywhere, and the
test suite checks both facts against brute force.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import DomainError
from .predimension import _evaluator, _min_over
from .structures import Structure

DEFAULT_MAX_GROUND = 18
EAGER_TABLE_LIMIT = 16
ENV_MAX_GROUND = "PREGEOM_MAX_GROUND"


def max_ground_cap() -> int:
    raw = os.environ.get(ENV_MAX_GROUND)
    if raw is None:
        return DEFAULT_MAX_GROUND
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DomainError(f"{ENV_MAX_GROUND} must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise DomainError(f"{ENV_MAX_GROUND} must be non-negative, got {cap}")
    return cap


@lru_cache(maxsize=512)
def _in_class(struct: Structure) -> bool:
    ev = _evaluator(struct)
    return _min_over(ev, 0) >= 0


def _require_in_class(struct: Structure) -> None:
    if not _in_class(struct):
        raise DomainError("structure is not in its class (some subset has negative predimension)")


def _sum_over_subsets(arr: list[int], nbits: int) -> None:
    for i in range(nbits):
        bit = 1 << i
        for m in range(len(arr)):
            if m & bit:
                arr[m] += arr[m ^ bit]


def _predim_table(ev) -> list[int]:
    """predim of every subset mask, via subset-sum dynamic programming."""
    n = ev.nbits
    size = 1 << n
    if ev.rel_masks is not None:
        cnt = [0] * size
        for tm in ev.rel_masks:
            cnt[tm] += 1
        _sum_over_subsets(cnt, n)
        return [m.bit_count() - cnt[m] for m in range(size)]
    total = [0] * size
    s1 = ev.s - 1
    for kmasks in ev.cliques:
        cnt = [0] * size
        for tm in kmasks:
            cnt[tm] += 1
        _sum_over_subsets(cnt, n)
        for m in range(size):
            if cnt[m] > s1:
                total[m] += cnt[m] - s1
    return [m.bit_count() - total[m] for m in range(size)]


def _rank_table(ev) -> list[int]:
    """rank of every subset mask: min predim over supersets, filled top-down."""
    n = ev.nbits
    size = 1 << n
    table = _predim_table(ev)
    for m in sorted(range(size), key=lambda x: x.bit_count(), reverse=True):
        best = table[m]
        free = ev.full & ~m
        while free:
            bit = free & -free
            free ^= bit
            v = table[m | bit]
            if v < best:
                best = v
        table[m] = best
    return table


@dataclass(frozen=True, eq=False)
class Pregeometry:
    """Ground set plus exact rank data extracted from a predimension function.

    Small grounds store the full table; larger ones compute ranks on demand
    (memoised, idempotent under concurrent recomputation).
    """

    ground: tuple[int, ...]
    _table: Optional[list[int]] = field(repr=False)
    _source: Optional[Structure] = field(repr=False, default=None)
    _memo: dict[int, int] = field(repr=False, default_factory=dict)

    def _index(self, e: int) -> int:
        i = self.ground.index(e) if e in self.ground else -1
        if i < 0:
            raise DomainError(f"element {e} is outside the ground set")
        return i

    def _mask(self, subset: Iterable[int]) -> int:
        m = 0
        for e in subset:
            m |= 1 << self._index(e)
        return m

    def rank_of_mask(self, mask: int) -> int:
        if self._table is not None:
            return self._table[mask]
        if mask in self._memo:
            return self._memo[mask]
        ev = _evaluator(self._source)
        base = 0
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            base |= 1 << ev.index[self.ground[bit.bit_length() - 1]]
        val = _min_over(ev, base)
        self._memo[mask] = val
        return val

    def rank(self, subset: Iterable[int]) -> int:
        return self.rank_of_mask(self._mask(subset))

    def closure(self, subset: Iterable[int]) -> frozenset[int]:
        m = self._mask(subset)
        r = self.rank_of_mask(m)
        out = set()
        for i, e in enumerate(self.ground):
            if m >> i & 1 or self.rank_of_mask(m | (1 << i)) == r:
                out.add(e)
        return frozenset(out)

    def is_closed(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.closure(s) == s

    def full_table(self) -> dict[frozenset[int], int]:
        out = {}
        for m in range(1 << len(self.ground)):
            members = frozenset(e for i, e in enumerate(self.ground) if m >> i & 1)
            out[members] = self.rank_of_mask(m)
        return out


def rank(a: Structure, subset: Iterable[int]) -> int:
    """Pregeometry rank of `subset` inside `a` (the minimum over supersets)."""
    _require_in_class(a)
    ev = _evaluator(a)
    return _min_over(ev, ev.mask(subset))


def dims(a: Structure, subset: Iterable[int]) -> int:
    """Dimension of `subset`: size of a smallest subset with the same closure; equals rank."""
    return rank(a, subset)


def closure(a: Structure, subset: Iterable[int]) -> frozenset[int]:
    """Elements whose addition does not raise the rank of `subset`."""
    _require_in_class(a)
    ev = _evaluator(a)
    bmask = ev.mask(subset)
    r = _min_over(ev, bmask)
    out = set(ev.unmask(bmask))
    for e in ev.elems:
        if e in out:
            continue
        if _min_over(ev, bmask | (1 << ev.index[e])) == r:
            out.add(e)
    return frozenset(out)


def pregeometry_of(a: Structure, max_ground: Optional[int] = None) -> Pregeometry:
    """The pregeometry of an in-class structure, with its exact rank data."""
    _require_in_class(a)
    cap = max_ground_cap() if max_ground is None else max_ground
    ground = tuple(a.sorted_universe())
    if len(ground) > cap:
        raise DomainError(f"ground set has {len(ground)} elements, above the cap {cap}")
    ev = _evaluator(a)
    if len(ground) <= EAGER_TABLE_LIMIT:
        return Pregeometry(ground, _rank_table(ev), a)
    return Pregeometry(ground, None, a)


@lru_cache(maxsize=64)
def rank_table_of(a: Structure) -> tuple[int, ...]:
    """Rank of every subset mask of the sorted universe (capped to keep runs bounded)."""
    if len(a.universe) > 22:
        raise DomainError("universe too large for a full rank table")
    _require_in_class(a)
    return tuple(_rank_table(_evaluator(a)))


def same_pregeometry(a: Structure, b: Structure) -> bool:
    """Whether two in-class structures on the same universe have identical rank tables."""
    if frozenset(a.universe) != frozenset(b.universe):
        raise DomainError("structures live on different universes")
    # both evaluators sort the universe, so masks line up
    return rank_table_of(a) == rank_table_of(b)


def pg_isomorphic(p: Pregeometry, q: Pregeometry) -> Optional[dict[int, int]]:
    """A rank-preserving ground bijection, lexicographically least, or None.

    Backtracking in ground order, pruned by point rank and verified subset by
    subset as the map grows.
    """
    if len(p.ground) != len(q.ground):
        return None
    if p.rank(p.ground) != q.rank(q.ground):
        return None
    p_single = sorted(p.rank((e,)) for e in p.ground)
    q_single = sorted(q.rank((e,)) for e in q.ground)
    if p_single != q_single:
        return None

    src = list(p.ground)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def compatible(e: int, w: int) -> bool:
        dom = [x for x in src if x in mapping and x != e]
        for m in range(1 << len(dom)):
            sub = [dom[i] for i in range(len(dom)) if m >> i & 1]
            if p.rank(sub + [e]) != q.rank([mapping[x] for x in sub] + [w]):
                return False
        return True

    def rec(i: int) -> bool:
        if i == len(src):
            return True
        e = src[i]
        for w in q.ground:
            if w in used:
                continue
            mapping[e] = w
            used.add(w)
            if compatible(e, w) and rec(i + 1):
                return True
            used.discard(w)
            del mapping[e]
        return False

    if rec(0):
        return dict(mapping)
    return None
