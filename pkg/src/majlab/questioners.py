"""Questioner-side algorithms.

The upper-bound solver plays a monochromatic-forcing opening: it asks the
edges of a k-uniform hypergraph that cannot be properly two-colored, so
some edge must come back monochromatic; one ball of that edge is then
compared against every remaining ball, which pins the two color classes
up to the global swap. Random and greedy baselines are used to exercise
the adversaries; both claim a verdict only when it holds in every
consistent coloring.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .core import (
    CM,
    GM,
    CapacityError,
    GmResponse,
    InputError,
    LogicError,
    Transcript,
    Verdict,
    enum_cap,
)
from .knowledge import EnumKnowledge, knowledge_for

Move = Union[tuple[int, ...], Verdict]

FANO_LINES = ((1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6),
              (2, 5, 7), (3, 4, 7), (3, 5, 6))


@dataclasses.dataclass(frozen=True)
class Hypergraph:
    """Uniform hypergraph on vertices 1..n_vertices."""

    n_vertices: int
    edges: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.edges[0]) if self.edges else 0

    def validate(self) -> None:
        if not self.edges:
            raise InputError("hypergraph has no edges")
        k = self.k
        for e in self.edges:
            if len(set(e)) != k:
                raise InputError(f"edge {e} is not {k}-uniform")
            if any(v < 1 or v > self.n_vertices for v in e):
                raise InputError(f"edge {e} leaves 1..{self.n_vertices}")

    def to_file_text(self) -> str:
        lines = [f"{self.k} {self.n_vertices} {len(self.edges)}"]
        lines += [" ".join(map(str, e)) for e in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_file_text(cls, text: str) -> "Hypergraph":
        rows = [r.split() for r in text.strip().splitlines() if r.strip()]
        if not rows or len(rows[0]) != 3:
            raise InputError("expected a 'k v e' header line")
        k, v, e = (int(x) for x in rows[0])
        if len(rows) - 1 != e:
            raise InputError(f"expected {e} edge lines, found {len(rows) - 1}")
        edges = tuple(tuple(sorted(int(x) for x in row)) for row in rows[1:])
        h = cls(v, edges)
        h.validate()
        if h.k != k:
            raise InputError("edges do not match the declared size")
        return h


def has_property_b(h: Hypergraph, cap: Optional[int] = None) -> bool:
    """True iff some two-coloring leaves no edge monochromatic."""
    h.validate()
    cap = enum_cap() if cap is None else cap
    if h.n_vertices > cap:
        raise CapacityError(f"{h.n_vertices} vertices above cap {cap}")
    masks = [kernels.query_mask(e) for e in h.edges]
    sizes = [len(e) for e in h.edges]
    return kernels.proper_two_coloring(masks, sizes, h.n_vertices) >= 0


def non_property_b_hypergraph(k: int) -> Hypergraph:
    """A k-uniform hypergraph with no proper two-coloring.

    Size-two edges need an odd cycle (the triangle); for size three the
    seven-line plane on seven points works; for larger k every k-subset
    of 2k-1 points forces a monochromatic edge by pigeonhole.
    """
    if k < 2:
        raise InputError("edges need at least two vertices")
    if k == 2:
        return Hypergraph(3, ((1, 2), (1, 3), (2, 3)))
    if k == 3:
        return Hypergraph(7, FANO_LINES)
    verts = 2 * k - 1
    edges = tuple(itertools.combinations(range(1, verts + 1), k))
    return Hypergraph(verts, edges)


def witness_edge_count(k: int) -> int:
    """Edge count of the stock non-two-colorable witness."""
    return len(non_property_b_hypergraph(k).edges)


# ---------------------------------------------------------------------------
# questioner policies
# ---------------------------------------------------------------------------

class RandomQuestioner:
    """Uniformly random queries; claims as soon as a verdict is forced."""

    def __init__(self, n: int, k: int, seed: int, model: str = GM,
                 cap: Optional[int] = None):
        import random
        self.n, self.k, self.model = n, k, model
        self.rng = random.Random(seed)
        self.cap = cap
        self._kn = None
        self._seen = 0

    def _knowledge(self, transcript: Transcript):
        if self._kn is None or self._seen > len(transcript.rounds):
            self._kn = knowledge_for(
                Transcript(self.model, self.n, self.k), self.cap)
            self._seen = 0
            for r in transcript.rounds:
                self._kn.add_round(r.query, r.answer, r.disclosures)
                self._seen += 1
            return self._kn
        for r in transcript.rounds[self._seen:]:
            self._kn.add_round(r.query, r.answer, r.disclosures)
            self._seen += 1
        return self._kn

    def next_move(self, transcript: Transcript) -> Move:
        verdict = self._knowledge(transcript).forced_verdict()
        if verdict is not None:
            return verdict
        return tuple(sorted(self.rng.sample(range(1, self.n + 1), self.k)))


class GreedyQuestioner:
    """Minimizes the worst answer-class size of the consistent set."""

    def __init__(self, n: int, k: int, model: str = GM,
                 cap: Optional[int] = None):
        self.n, self.k, self.model = n, k, model
        self.cap = enum_cap() if cap is None else cap
        if n > self.cap:
            raise CapacityError(f"greedy needs enumeration, n={n} above cap")
        self._kn: Optional[EnumKnowledge] = None
        self._seen = 0
        self._qmasks: Optional[np.ndarray] = None
        self._queries: Optional[list[tuple[int, ...]]] = None

    def _knowledge(self, transcript: Transcript) -> EnumKnowledge:
        if self._kn is None or self._seen > len(transcript.rounds):
            self._kn = EnumKnowledge(self.model, self.n, self.cap)
            self._seen = 0
        for r in transcript.rounds[self._seen:]:
            self._kn.add_round(r.query, r.answer, r.disclosures)
            self._seen += 1
        return self._kn

    def _candidates(self):
        if self._queries is None:
            self._queries = list(
                itertools.combinations(range(1, self.n + 1), self.k))
            self._qmasks = np.array(
                [kernels.query_mask(q) for q in self._queries], dtype=np.uint32)
        return self._queries, self._qmasks

    def next_move(self, transcript: Transcript) -> Move:
        kn = self._knowledge(transcript)
        verdict = kn.forced_verdict()
        if verdict is not None:
            return verdict
        codes = kn.cs.codes
        if len(codes) == (1 << self.n):
            # fully symmetric start: every size-k query ties, the
            # lexicographically first one wins the tie-break
            return tuple(range(1, self.k + 1))
        queries, qmasks = self._candidates()
        sizes = np.full(len(queries), self.k, dtype=np.int64)
        worst = kernels.worst_split_sizes(codes, qmasks, sizes, self.model)
        return queries[int(np.argmin(worst))]


class PropertyBQuestioner:
    """Monochromatic-forcing opening, then one comparison per ball."""

    def __init__(self, n: int, k: int, witness: Optional[Hypergraph] = None):
        self.n, self.k = n, k
        self.witness = witness if witness is not None else non_property_b_hypergraph(k)
        self.witness.validate()
        if self.witness.k != k:
            raise InputError("witness edge size does not match k")
        if self.witness.n_vertices > n:
            raise InputError(
                f"need at least {self.witness.n_vertices} balls for the witness")
        self.max_rounds = len(self.witness.edges) + (n - k)

    def next_move(self, transcript: Transcript) -> Move:
        if transcript.model != GM:
            raise InputError("this policy plays the yes/no model only")
        rounds = transcript.rounds
        mono_edge = None
        for r in rounds:
            if r.answer is GmResponse.SAME and tuple(r.query) in self.witness.edges:
                mono_edge = tuple(r.query)
                break
        if mono_edge is None:
            asked = {tuple(r.query) for r in rounds}
            for e in sorted(self.witness.edges):
                if e not in asked:
                    return e
            raise LogicError(
                "every witness edge was answered mixed; that admits no coloring")
        probe = mono_edge[: self.k - 1]
        outside = [b for b in range(1, self.n + 1) if b not in mono_edge]
        answered: dict[int, GmResponse] = {}
        start = next(i for i, r in enumerate(rounds)
                     if tuple(r.query) == mono_edge
                     and r.answer is GmResponse.SAME)
        for r in rounds[start + 1:]:
            q = tuple(r.query)
            if set(probe) < set(q) and len(q) == self.k:
                (extra,) = set(q) - set(probe)
                answered[extra] = r.answer
        for b in outside:
            if b not in answered:
                return tuple(sorted(probe + (b,)))
        same_class = set(mono_edge) | {b for b, a in answered.items()
                                       if a is GmResponse.SAME}
        diff_class = set(range(1, self.n + 1)) - same_class
        if 2 * len(same_class) > self.n:
            return Verdict.majority_ball(min(same_class))
        if 2 * len(diff_class) > self.n:
            return Verdict.majority_ball(min(diff_class))
        return Verdict.no_majority()
