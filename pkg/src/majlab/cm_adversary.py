"""Counting-model adversary: open/closed query bookkeeping.

Queries have exactly k balls and the answer reveals min(#red, #blue)
inside the query. With x = floor((k-1)/3), the adversary keeps a query
"open" while more than k-x of its balls still have degree one in the
query hypergraph, always answering x for such queries and deferring the
actual colors. Whenever a ball reaches degree two its color is fixed;
when a query drops to k-x or fewer degree-one balls it closes and all of
its balls get colors, choosing between the two completions (x red or x
blue in the query) so that the global class imbalance g = ||R|-|B||
stays small; g never exceeds k-2x.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

from .core import (
    CM,
    Color,
    Coloring,
    Disclosure,
    InputError,
    InvariantViolation,
    Transcript,
    Verdict,
    ceil_div,
    normalize_query,
)
from .knowledge import StructuredKnowledge


@dataclasses.dataclass
class _CmQueryRec:
    balls: tuple[int, ...]
    answer: Optional[int] = None
    open: bool = False


class CmAdversaryState:
    def __init__(self, n: int, k: int):
        if k < 3:
            raise InputError("counting adversary needs query size at least 3")
        if k > n:
            raise InputError("query size cannot exceed the ball count")
        self.n = n
        self.k = k
        self.x = (k - 1) // 3
        self.red: set[int] = set()
        self.blue: set[int] = set()
        self.degree = [0] * (n + 1)  # 1-based
        self.queries: list[_CmQueryRec] = []
        self.rounds = 0
        self.rounds_log: list[tuple[tuple[int, ...], int, list[Disclosure]]] = []

    @property
    def g(self) -> int:
        return abs(len(self.red) - len(self.blue))

    def color_of(self, ball: int) -> Optional[Color]:
        if ball in self.red:
            return Color.RED
        if ball in self.blue:
            return Color.BLUE
        return None

    def _color(self, ball: int, color: Color, out: list[Disclosure]) -> None:
        if self.color_of(ball) is not None:
            raise InvariantViolation(f"ball {ball} colored twice")
        (self.red if color is Color.RED else self.blue).add(ball)
        out.append((ball, color))

    def _scarcer(self) -> Color:
        if len(self.red) < len(self.blue):
            return Color.RED
        if len(self.blue) < len(self.red):
            return Color.BLUE
        return Color.RED  # ties go red first

    def _deg1_count(self, rec: _CmQueryRec) -> int:
        return sum(1 for b in rec.balls if self.degree[b] == 1)

    def _query_counts(self, rec: _CmQueryRec) -> tuple[int, int]:
        r = sum(1 for b in rec.balls if b in self.red)
        b = sum(1 for b in rec.balls if b in self.blue)
        return r, b


def new_cm_adversary(n: int, k: int) -> CmAdversaryState:
    return CmAdversaryState(n, k)


def _close_query(state: CmAdversaryState, rec: _CmQueryRec,
                 out: list[Disclosure]) -> None:
    """Color every remaining ball of a closing query.

    Two completions are possible: x red in the query, or x blue. Both are
    feasible because an open query holds fewer than x balls of each
    color. The adversary picks the completion minimizing g, ties going to
    the red-enlarging one; inside the query the minority color lands on
    the lowest free indices.
    """
    k, x = state.k, state.x
    r0, b0 = state._query_counts(rec)
    if r0 >= x or b0 >= x:
        raise InvariantViolation("open query collected too much color")
    free = sorted(b for b in rec.balls if state.color_of(b) is None)
    diff = len(state.red) - len(state.blue)
    # option: total x red (reds become x, blues k-x), or x blue
    add_r_a, add_b_a = x - r0, (k - x) - b0
    add_r_b, add_b_b = (k - x) - r0, x - b0
    g_a = abs(diff + add_r_a - add_b_a)
    g_b = abs(diff + add_r_b - add_b_b)
    if g_b <= g_a:  # prefer enlarging red on ties
        add_r, add_b = add_r_b, add_b_b
        minority = Color.BLUE
    else:
        add_r, add_b = add_r_a, add_b_a
        minority = Color.RED
    if add_r < 0 or add_b < 0 or add_r + add_b != len(free):
        raise InvariantViolation("closing completion does not fit")
    minor_count = add_r if minority is Color.RED else add_b
    for i, ball in enumerate(free):
        state._color(ball, minority if i < minor_count else minority.other, out)
    rec.open = False


def respond(state: CmAdversaryState, query) -> tuple[int, list[Disclosure]]:
    q = normalize_query(query, state.n, min_size=2)
    if len(q) != state.k:
        raise InputError(f"counting queries must have exactly {state.k} balls")
    state.rounds += 1
    out: list[Disclosure] = []
    touched: dict[int, list[int]] = {}
    for ball in q:
        was = state.degree[ball]
        state.degree[ball] += 1
        if was == 1 and state.color_of(ball) is None:
            owners = [idx for idx, rec in enumerate(state.queries)
                      if rec.open and ball in rec.balls]
            if len(owners) != 1:
                raise InvariantViolation(
                    f"degree-one ball {ball} not in exactly one open query")
            touched.setdefault(owners[0], []).append(ball)

    # settle previously open queries that this query touched
    for idx in sorted(touched):
        rec = state.queries[idx]
        if state._deg1_count(rec) > state.k - state.x:
            for ball in sorted(touched[idx]):
                state._color(ball, state._scarcer(), out)
        else:
            _close_query(state, rec, out)

    fresh = [b for b in q if state.degree[b] == 1]
    rec = _CmQueryRec(balls=q)
    state.queries.append(rec)
    if len(fresh) > state.k - state.x:
        rec.open = True
        answer = state.x
    else:
        rec.open = False
        for ball in sorted(b for b in q if state.color_of(b) is None):
            state._color(ball, state._scarcer(), out)
        r, b = state._query_counts(rec)
        if r + b != state.k:
            raise InvariantViolation("closed query left a ball uncolored")
        answer = min(r, b)
    rec.answer = answer
    state.rounds_log.append((q, answer, list(out)))
    if state.g > state.k - 2 * state.x:
        raise InvariantViolation("imbalance exceeded k-2x")
    return answer, out


def abc_partition(state: CmAdversaryState) -> tuple[set[int], set[int], set[int]]:
    """Balls split by degree: untouched, degree one, everything else."""
    a = {b for b in range(1, state.n + 1) if state.degree[b] == 0}
    b1 = {b for b in range(1, state.n + 1)
          if state.degree[b] == 1 and state.color_of(b) is None}
    c = set(range(1, state.n + 1)) - a - b1
    return a, b1, c


def check_cm_invariants(state: CmAdversaryState) -> list[str]:
    out = []
    if state.g > state.k - 2 * state.x:
        out.append(f"imbalance g={state.g} above k-2x={state.k - 2 * state.x}")
    for rec in state.queries:
        deg1 = state._deg1_count(rec)
        uncolored = [b for b in rec.balls if state.color_of(b) is None]
        if rec.open:
            if deg1 <= state.k - state.x:
                out.append("open query with too few degree-one balls")
            r, bl = state._query_counts(rec)
            if state.x and (r >= state.x or bl >= state.x):
                out.append("open query holds x or more of a color")
            if rec.answer != state.x:
                out.append("open query answered something else than x")
        else:
            if uncolored:
                out.append("closed query with uncolored balls")
            else:
                r, bl = state._query_counts(rec)
                if min(r, bl) != rec.answer:
                    out.append("closed query answer mismatch")
        for b in rec.balls:
            if state.degree[b] >= 2 and state.color_of(b) is None:
                out.append(f"ball {b} has degree two but no color")
    return out


def _knowledge(state: CmAdversaryState) -> StructuredKnowledge:
    kn = StructuredKnowledge(CM, state.n)
    for q, ans, discl in state.rounds_log:
        kn.add_round(q, ans, discl)
    return kn


def refute_verdict(state: CmAdversaryState, verdict: Verdict) -> Optional[Coloring]:
    """A coloring consistent with all answers in which the verdict fails."""
    return _knowledge(state).refute(verdict)


@dataclasses.dataclass
class CmCertificate:
    rounds: int
    implied_bound: int

    @property
    def ok(self) -> bool:
        return self.rounds >= self.implied_bound


def cm_lower_bound_certificate(transcript: Transcript, n: int, k: int) -> CmCertificate:
    if transcript.model != CM:
        raise InputError("counting-model certificate needs a cm transcript")
    bound = ceil_div(6 * n - (5 * k + 6), 5 * k + 6)
    return CmCertificate(rounds=len(transcript.rounds), implied_bound=bound)
