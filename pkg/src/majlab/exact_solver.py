"""Exact game values for small instances by minimax over knowledge states.

A knowledge state is the set of colorings consistent with play so far,
stored as a bitmask over all 2^n colorings (bit c set means packed
coloring c is still possible). The questioner moves by choosing a query;
the adversary moves by choosing any answer whose class is nonempty. The
value of a state is 0 when some verdict holds in every member, else
1 + min over queries of the max over answer classes. Queries for which
some answer leaves the state unchanged can never help the questioner and
are skipped, which makes the recursion strictly shrinking; states from
which every query is useless and no verdict is forced are unsolvable.

States are memoized under the global color swap, which maps the member
set to its bit-reversed image and cannot change the value.
"""

from __future__ import annotations

import dataclasses
import itertools
import sys
from typing import Optional

import numpy as np

from . import kernels
from .core import (
    CM,
    GM,
    CapacityError,
    Coloring,
    GmResponse,
    InputError,
    LogicError,
    Verdict,
)

DEFAULT_GM_CAP = 12
DEFAULT_CM_CAP = 8

UNSOLVABLE = None  # game value sentinel inside SolveResult


@dataclasses.dataclass
class SolveResult:
    model: str
    n: int
    k: int
    value: Optional[int]  # None when no strategy can force a verdict
    states_expanded: int
    optimal_first_query: Optional[tuple[int, ...]]

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "n": self.n,
            "k": self.k,
            "value": self.value if self.value is not None else "unsolvable",
            "states_expanded": self.states_expanded,
            "optimal_first_query":
                list(self.optimal_first_query) if self.optimal_first_query else None,
        }


class GameTables:
    """Shared per-(model, n, k) precomputation and memoization."""

    def __init__(self, model: str, n: int, k: int, cap: Optional[int] = None):
        if model not in (GM, CM):
            raise InputError(f"unknown model {model!r}")
        if k < 2 or k > n:
            raise InputError("need 2 <= k <= n")
        cap = cap if cap is not None else (DEFAULT_GM_CAP if model == GM else DEFAULT_CM_CAP)
        if n > cap:
            raise CapacityError(f"n={n} above solver cap {cap}")
        self.model, self.n, self.k = model, n, k
        self.width = 1 << n
        self.full_mask = (1 << self.width) - 1
        codes = kernels.all_colorings(n)
        pops = kernels.popcount(codes)
        self.tie = pops * 2 == n
        maxmask = (1 << n) - 1
        self.maj = np.where(pops * 2 > n, codes.astype(np.int64),
                            np.where(self.tie, 0, (~codes.astype(np.int64)) & maxmask))
        self.maj_list = [int(v) for v in self.maj]
        self.tie_mask = 0
        for c in np.flatnonzero(self.tie):
            self.tie_mask |= 1 << int(c)
        self.queries = list(itertools.combinations(range(1, n + 1), k))
        self.answer_masks: list[list[int]] = [
            self._masks_for(q) for q in self.queries]
        self.memo: dict[int, Optional[int]] = {}
        self._raw_memo: dict[int, Optional[int]] = {}
        self._lower: dict[int, int] = {}
        self.states_expanded = 0
        # byte-wise bit reversal table for the color-swap image
        self._rev = bytes.maketrans(
            bytes(range(256)),
            bytes(int(f"{b:08b}"[::-1], 2) for b in range(256)))

    def _masks_for(self, query: tuple[int, ...]) -> list[int]:
        qm = kernels.query_mask(query)
        codes = kernels.all_colorings(self.n)
        if self.model == GM:
            ans = kernels.gm_answer_codes(codes, qm, len(query))
            groups = [np.flatnonzero(ans == 0), np.flatnonzero(ans == 1)]
        else:
            ans = kernels.cm_answer_codes(codes, qm, len(query))
            groups = [np.flatnonzero(ans == v) for v in range(len(query) // 2 + 1)]
        out = []
        for idx in groups:
            m = 0
            for c in idx:
                m |= 1 << int(c)
            out.append(m)
        return out

    # -- state helpers -------------------------------------------------------

    def members(self, mask: int) -> np.ndarray:
        data = np.frombuffer(
            mask.to_bytes((self.width + 7) // 8, "little"), dtype=np.uint8)
        return np.flatnonzero(np.unpackbits(data, bitorder="little"))

    def swap_mask(self, mask: int) -> int:
        if self.width < 8:
            out = 0
            for c in range(self.width):
                if (mask >> c) & 1:
                    out |= 1 << (self.width - 1 - c)
            return out
        data = mask.to_bytes(self.width // 8, "little")
        return int.from_bytes(data.translate(self._rev)[::-1], "little")

    def canonical(self, mask: int) -> int:
        return min(mask, self.swap_mask(mask))

    def forced_verdict(self, mask: int) -> Optional[Verdict]:
        if not mask:
            raise LogicError("empty knowledge state")
        ties = (mask & self.tie_mask).bit_count()
        if ties:
            return Verdict.no_majority() if ties == mask.bit_count() else None
        common = (1 << self.n) - 1
        m = mask
        maj = self.maj_list
        while m:
            low = m & -m
            common &= maj[low.bit_length() - 1]
            if not common:
                return None
            m ^= low
        return Verdict.majority_ball((common & -common).bit_length())

    def children(self, mask: int, query_index: int) -> list[int]:
        return [mask & am for am in self.answer_masks[query_index]
                if mask & am]

    # -- minimax -------------------------------------------------------------

    def upper_bound(self) -> Optional[int]:
        """Closed-form upper bound on the game value, when one applies."""
        if self.k == 2:
            return self.n - 1
        out = None
        if 2 * self.k - 1 <= self.n:
            import math as _math
            out = self.n - self.k + _math.comb(2 * self.k - 1, self.k)
        witness_vertices = 7 if self.k == 3 else 2 * self.k - 1
        if self.model == GM and self.n >= witness_vertices:
            from .questioners import witness_edge_count
            cand = self.n - self.k + witness_edge_count(self.k)
            out = cand if out is None else min(out, cand)
        if self.model == CM:
            # the coarse bound above is a yes/no-model strategy; counting
            # answers only reveal more, so it still applies
            pass
        return out

    INF = float("inf")

    def value(self, mask: int, beta: float = INF) -> Optional[int]:
        """Exact value when it is below beta, else any number >= beta.

        Children are subsets of their parent and the value is monotone
        under set inclusion, so a beta above a known upper bound keeps
        every reachable evaluation exact. With beta infinite the search
        is exhaustive and None means no strategy ever forces a verdict.
        """
        hit = self._raw_memo.get(mask, -1)
        if hit != -1:
            return self.INF if hit is None else hit
        key = self.canonical(mask)
        if key in self.memo:
            v = self.memo[key]
            self._raw_memo[mask] = v
            return self.INF if v is None else v
        known_floor = self._lower.get(key, 0)
        if known_floor >= beta:
            return known_floor
        # children are strict subsets, so the recursion cannot revisit a
        # state of equal cardinality and no cycle guard is needed
        self.states_expanded += 1
        if self.forced_verdict(mask) is not None:
            self.memo[key] = 0
            self._raw_memo[mask] = 0
            return 0
        best = None
        seen_partitions: set[tuple[int, ...]] = set()
        query_range = range(len(self.queries))
        if mask == self.full_mask:
            # relabeling balls is a game automorphism of the untouched
            # start position and acts transitively on size-k queries, so
            # one representative query suffices
            query_range = range(1)
        for qi in query_range:
            kids = self.children(mask, qi)
            if any(kid == mask for kid in kids):
                continue
            sig = tuple(sorted(kids))
            if sig in seen_partitions:
                continue
            seen_partitions.add(sig)
            kids.sort(key=lambda kid: -kid.bit_count())
            limit = beta if best is None else min(beta, best)
            if limit <= 1:
                break
            worst = 0
            dead = False
            for kid in kids:
                v = self.value(kid, limit - 1)
                if v >= limit - 1:
                    dead = True
                    break
                worst = max(worst, v)
            if dead:
                continue
            best = worst + 1
        if best is not None:
            best = int(best)
            self.memo[key] = best
            self._raw_memo[mask] = best
            return best
        if beta is self.INF or beta == self.INF:
            self.memo[key] = None  # exhaustive search: truly unsolvable
            self._raw_memo[mask] = None
            return self.INF
        self._lower[key] = max(self._lower.get(key, 0), int(beta))
        return beta

    def exact_value(self, mask: int) -> Optional[int]:
        """Game value by iterative deepening; None when unsolvable.

        Raising the bound one step at a time keeps every search window
        tight; the lower bounds proven by failed iterations persist in
        the memo, so re-exploration stays cheap.
        """
        ub = self.upper_bound()
        if ub is None:
            v = self.value(mask, self.INF)
            return None if v == self.INF else int(v)
        beta = 1
        while beta <= ub + 1:
            v = self.value(mask, beta)
            if v < beta:
                return int(v)
            beta = int(v) + 1
        raise LogicError("value exceeded its closed-form upper bound")

    def optimal_query(self, mask: int) -> tuple[int, ...]:
        v = self.exact_value(mask)
        if v is None:
            raise LogicError("state is unsolvable; no useful query exists")
        if v == 0:
            raise LogicError("state is terminal; no query is needed")
        if mask == self.full_mask:
            return self.queries[0]
        for qi, q in enumerate(self.queries):
            kids = self.children(mask, qi)
            if any(kid == mask for kid in kids):
                continue
            if all(self.value(kid, v) <= v - 1 for kid in kids):
                return q
        raise LogicError("no query achieves the computed value")


_TABLES: dict[tuple, GameTables] = {}


def tables_for(model: str, n: int, k: int, cap: Optional[int] = None) -> GameTables:
    key = (model, n, k, cap)
    if key not in _TABLES:
        _TABLES[key] = GameTables(model, n, k, cap)
    return _TABLES[key]


def children(codes: np.ndarray, n: int, query, model: str) -> dict:
    """Partition an explicit coloring-code set by the answer to a query.

    Returns {answer: sorted code array}; empty classes are dropped.
    """
    q = tuple(sorted(query))
    qm = kernels.query_mask(q)
    arr = np.asarray(codes, dtype=np.uint32)
    out = {}
    if model == GM:
        ans = kernels.gm_answer_codes(arr, qm, len(q))
        for val, resp in ((1, GmResponse.SAME), (0, GmResponse.MIXED)):
            part = arr[ans == val]
            if part.size:
                out[resp] = part
    else:
        ans = kernels.cm_answer_codes(arr, qm, len(q))
        for val in range(len(q) // 2 + 1):
            part = arr[ans == val]
            if part.size:
                out[val] = part
    return out


def solve(model: str, n: int, k: int, cap: Optional[int] = None) -> SolveResult:
    """Exact worst-case query count, or unsolvable, for the full game."""
    t = tables_for(model, n, k, cap)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * t.width + 100))
    try:
        v = t.exact_value(t.full_mask)
    finally:
        sys.setrecursionlimit(old_limit)
    first = None
    if v is not None and v > 0:
        first = t.optimal_query(t.full_mask)
    return SolveResult(model=model, n=n, k=k, value=v,
                       states_expanded=t.states_expanded,
                       optimal_first_query=first)


class OptimalAdversary:
    """Solver-backed adversary: answers to maximize the remaining value."""

    def __init__(self, model: str, n: int, k: int, cap: Optional[int] = None):
        self.tables = tables_for(model, n, k, cap)
        self.model, self.n, self.k = model, n, k
        self.mask = self.tables.full_mask

    def respond(self, query):
        q = tuple(sorted(query))
        qm = kernels.query_mask(q)
        t = self.tables
        if self.model == GM:
            labels = [GmResponse.MIXED, GmResponse.SAME]
            codes = kernels.gm_answer_codes(
                kernels.all_colorings(t.n), qm, len(q))
            masks = []
            for v in (0, 1):
                m = 0
                for c in np.flatnonzero(codes == v):
                    m |= 1 << int(c)
                masks.append(m & self.mask)
        else:
            if len(q) != self.k:
                raise InputError(f"need queries of exactly {self.k} balls")
            labels = list(range(len(q) // 2 + 1))
            codes = kernels.cm_answer_codes(
                kernels.all_colorings(t.n), qm, len(q))
            masks = []
            for v in labels:
                m = 0
                for c in np.flatnonzero(codes == v):
                    m |= 1 << int(c)
                masks.append(m & self.mask)
        best = None
        for label, child in zip(labels, masks):
            if not child:
                continue
            v = self.tables.exact_value(child)
            score = float("inf") if v is None else v
            if best is None or score > best[0]:
                best = (score, label, child)
        _, label, child = best
        self.mask = child
        return label, []

    def refute(self, verdict: Verdict) -> Optional[Coloring]:
        for code in self.tables.members(self.mask):
            c = Coloring(self.n, int(code))
            if not verdict.valid_in(c):
                return c
        return None

    def witness(self) -> Coloring:
        return Coloring(self.n, int(self.tables.members(self.mask)[0]))
