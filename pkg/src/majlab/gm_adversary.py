"""General-model adversary: the two-phase disclosure strategy.

The adversary answers monochromatic-or-not queries while voluntarily
disclosing ball colors, keeping the known red and blue classes balanced
and the unknown balls locked in rigid structures: "parts" hanging off
one color class (the still-unknown remainder of a query that touched
known balls of a single color) and star-shaped components of fully
unknown queries. A round is booked as a (j,k)-step when it colors j
balls and retires k queries into the inert class; the bookkeeping drives
the lower-bound certificate.

All case logic is written once against a color-role view (the "red" role
is the weakly larger class with no parts of its own); disclosures map
roles back to concrete colors. Phase two starts when answering "no"
would let the questioner finish: the adversary flips that answer to
"yes" and plays the endgame over the remaining size-two parts.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Optional

from .core import (
    Color,
    Disclosure,
    GmResponse,
    InputError,
    InvariantViolation,
    ceil_div,
    normalize_query,
)

STRATEGY1 = "strategy1"
STRATEGY2 = "strategy2"

END_NONE = "none"
END_COND1 = "cond1"
END_COND2 = "cond2"

CASE_IDS = (
    "1A", "1B", "1C", "1D", "1E",
    "2A", "2B", "2C", "2Da", "2Db",
    "3A", "3B", "4A", "4Ba", "4Bb",
    "5A", "5B", "5C", "6",
    "S2_Aa", "S2_Ab", "S2_Ac", "S2_Ba", "S2_Bb", "S2_Bc",
)

# preference order for breaking orientation ties (both roles legal only
# when the classes tie and no parts exist). The one materially ambiguous
# pair is 1C versus 2Da: coloring one ball now (1C) measurably outlasts
# parking the query as a harvestable part (2Da) against random play, so
# 2Da is ranked below it.
_CASE_COST = {
    "6": 0, "5A": 0, "5B": 0, "1A": 0, "2A": 0, "1B": 0,
    "2Db": 1, "1C": 1, "2Da": 2,
    "1D": 3, "1E": 3, "2B": 3, "2C": 3, "3B": 3, "4A": 3, "4Ba": 3,
    "3A": 4, "4Bb": 4, "5C": 4,
}


@dataclasses.dataclass(frozen=True)
class StepRecord:
    j: int  # balls newly colored this round
    k: int  # queries newly retired this round

    @property
    def is_zero(self) -> bool:
        return self.j == 0 and self.k == 0

    def ratio_ok(self) -> bool:
        return self.is_zero or (self.k > 0 and 3 * self.j <= 4 * self.k)


@dataclasses.dataclass
class _QueryRec:
    balls: frozenset
    answer: Optional[GmResponse] = None
    retired_round: Optional[int] = None


@dataclasses.dataclass
class _Classes:
    """Derived partition of queries and balls given the known colors."""

    q0: list
    qr: list  # (rec, part) pairs, ask order; part = balls minus red
    qb: list
    qd: list  # recs, ask order
    x_r: set
    x_b: set
    x_d: set
    x_0: set


class GmAdversaryState:
    def __init__(self, n: int):
        if n < 1:
            raise InputError("need at least one ball")
        self.n = n
        self.red: set[int] = set()
        self.blue: set[int] = set()
        self.queries: list[_QueryRec] = []
        self.phase = STRATEGY1
        self.ledger: list[StepRecord] = []
        self.rounds = 0
        self.case_trace: list[str] = []

    # -- derived structure --------------------------------------------------

    def classes(self) -> _Classes:
        q0, qr, qb, qd = [], [], [], []
        for rec in self.queries:
            balls = rec.balls
            hit_r = bool(balls & self.red)
            hit_b = bool(balls & self.blue)
            if (hit_r and hit_b) or balls <= self.red or balls <= self.blue:
                q0.append(rec)
            elif hit_r:
                qr.append((rec, frozenset(balls - self.red)))
            elif hit_b:
                qb.append((rec, frozenset(balls - self.blue)))
            else:
                qd.append(rec)
        x_r = set().union(*(p for _, p in qr)) if qr else set()
        x_b = set().union(*(p for _, p in qb)) if qb else set()
        x_d = set().union(*(r.balls for r in qd)) if qd else set()
        x_0 = set(range(1, self.n + 1)) - self.red - self.blue - x_r - x_b - x_d
        return _Classes(q0, qr, qb, qd, x_r, x_b, x_d, x_0)

    def colored_count(self) -> int:
        return len(self.red) + len(self.blue)

    def _color(self, ball: int, color: Color) -> None:
        if ball in self.red or ball in self.blue:
            raise InvariantViolation(f"ball {ball} colored twice")
        (self.red if color is Color.RED else self.blue).add(ball)

    def _retire_sweep(self) -> int:
        """Mark queries that have just become inert; returns how many."""
        fresh = 0
        for rec in self.queries:
            if rec.retired_round is not None:
                continue
            balls = rec.balls
            if (balls & self.red and balls & self.blue) \
                    or balls <= self.red or balls <= self.blue:
                rec.retired_round = self.rounds
                fresh += 1
        return fresh

    def retired_count(self) -> int:
        return sum(1 for r in self.queries if r.retired_round is not None)


def new_gm_adversary(n: int) -> GmAdversaryState:
    return GmAdversaryState(n)


# ---------------------------------------------------------------------------
# color-role view
# ---------------------------------------------------------------------------

class _View:
    """Maps the role colors of the case table onto concrete red/blue."""

    def __init__(self, state: GmAdversaryState, swap: bool):
        self.state = state
        self.swap = swap

    @property
    def red(self) -> set[int]:
        return self.state.blue if self.swap else self.state.red

    @property
    def blue(self) -> set[int]:
        return self.state.red if self.swap else self.state.blue

    def concrete(self, role: Color) -> Color:
        if self.swap:
            return role.other
        return role

    def color(self, ball: int, role: Color, out: list[Disclosure]) -> None:
        concrete = self.concrete(role)
        self.state._color(ball, concrete)
        out.append((ball, concrete))


def _candidate_swaps(state: GmAdversaryState, cls: _Classes) -> list[bool]:
    out = []
    for swap in (False, True):
        role_r_parts = cls.qb if swap else cls.qr
        v_r = len(state.blue) if swap else len(state.red)
        v_b = len(state.red) if swap else len(state.blue)
        if not role_r_parts and v_r >= v_b:
            out.append(swap)
    if not out:
        raise InvariantViolation("no orientation satisfies the part/size rule")
    return out


# ---------------------------------------------------------------------------
# case selection
# ---------------------------------------------------------------------------

def _components(qd: list[_QueryRec]) -> list[list[_QueryRec]]:
    comps: list[list[_QueryRec]] = []
    assigned: dict[int, int] = {}
    for rec in qd:
        hit = sorted({assigned[id(r)] for r in qd
                      if id(r) in assigned and r.balls & rec.balls})
        if not hit:
            comps.append([rec])
            assigned[id(rec)] = len(comps) - 1
        else:
            root = hit[0]
            for other in hit[1:]:
                comps[root].extend(comps[other])
                for r in comps[other]:
                    assigned[id(r)] = root
                comps[other] = []
            comps[root].append(rec)
            assigned[id(rec)] = root
    return [c for c in comps if c]


def _component_of(qd: list[_QueryRec], rec: _QueryRec) -> list[_QueryRec]:
    for comp in _components(qd):
        if any(r is rec for r in comp):
            return comp
    raise InvariantViolation("query missing from its own component")


def _star_center(comp: list[_QueryRec]) -> Optional[int]:
    if len(comp) < 2:
        return None
    common = set(comp[0].balls)
    for rec in comp[1:]:
        common &= rec.balls
    if len(common) != 1:
        raise InvariantViolation("unknown-query component has no star center")
    return next(iter(common))


def _match_case_s1(state: GmAdversaryState, cls: _Classes, view: _View,
                   query: frozenset) -> str:
    v_red, v_blue = view.red, view.blue
    role_qb = cls.qb if not view.swap else cls.qr
    x_b = cls.x_b if not view.swap else cls.x_r
    q_r = query & v_red
    q_b = query & v_blue
    q_xb = query & x_b
    q_xd = query & cls.x_d
    q_x0 = query & cls.x_0

    if q_r:
        if query <= v_red:
            return "1A"
        if q_b:
            return "1B"
        if q_x0:
            return "1C"
        if q_xb:
            return "1D"
        if q_xd:
            return "1E"
        raise InvariantViolation("case 1 fell through")
    if q_b:
        if query <= v_blue:
            return "2A"
        if q_xb:
            return "2B"
        if q_xd:
            return "2C"
        if q_x0:
            return "2Da" if len(q_x0) >= 2 else "2Db"
        raise InvariantViolation("case 2 fell through")
    if len(q_xd) >= 2:
        hits = [rec for rec in cls.qd if rec.balls & query]
        return "3A" if len(hits) >= 2 else "3B"
    if q_xb:
        if q_x0:
            return "4A"
        for rec, part in role_qb:
            if len(part & query) >= 2:
                return "4Ba"
        return "4Bb"
    hits = [rec for rec in cls.qd if rec.balls & query]
    if len(hits) >= 2:
        return "5A"
    if len(hits) == 1:
        comp = _component_of(cls.qd, hits[0])
        return "5B" if len(comp) == 1 else "5C"
    if query <= cls.x_0:
        return "6"
    raise InvariantViolation("no strategy-1 case matched")


def _match_case_s2(state: GmAdversaryState, cls: _Classes, view: _View,
                   query: frozenset) -> str:
    x_b = cls.x_b if not view.swap else cls.x_r
    if query & x_b:
        if query & view.red:
            return "S2_Aa"
        if query & view.blue:
            return "S2_Ab"
        return "S2_Ac"
    if query <= view.red:
        return "S2_Ba"
    if query <= view.blue:
        return "S2_Bb"
    if (query & view.red) and (query & view.blue):
        return "S2_Bc"
    raise InvariantViolation("no strategy-2 case matched")


def _s2_view(state: GmAdversaryState, cls: _Classes) -> _View:
    if cls.qr and cls.qb:
        raise InvariantViolation("parts on both sides in phase two")
    if cls.qr:
        swap = True
    elif cls.qb:
        swap = False
    else:
        swap = len(state.red) > len(state.blue)
    view = _View(state, swap)
    if len(view.blue) != len(view.red) + 1:
        raise InvariantViolation("phase-two class sizes out of step")
    return view


def _select(state: GmAdversaryState, query: frozenset):
    """Pick orientation and case for this query, lazily on ties."""
    cls = state.classes()
    if state.phase == STRATEGY2:
        view = _s2_view(state, cls)
        return cls, view, _match_case_s2(state, cls, view, query)
    best = None
    for swap in _candidate_swaps(state, cls):
        view = _View(state, swap)
        tag = _match_case_s1(state, cls, view, query)
        key = (_CASE_COST[tag], swap)
        if best is None or key < best[0]:
            best = (key, view, tag)
    _, view, tag = best
    return cls, view, tag


def classify(state: GmAdversaryState, query) -> str:
    q = frozenset(normalize_query(query, state.n, min_size=3))
    return _select(state, q)[2]


# ---------------------------------------------------------------------------
# responding
# ---------------------------------------------------------------------------

def respond(state: GmAdversaryState, query) -> tuple[GmResponse, list[Disclosure], StepRecord]:
    q = frozenset(normalize_query(query, state.n, min_size=3))
    cls, view, tag = _select(state, q)
    state.rounds += 1
    rec = _QueryRec(balls=q)
    state.queries.append(rec)
    colored_before = state.colored_count()
    retired_before = state.retired_count()
    discl: list[Disclosure] = []
    switched = False

    if state.phase == STRATEGY1:
        answer = _apply_s1(state, cls, view, tag, rec, discl)
        if answer is None:  # 2Da that ends phase one
            switched = True
            answer = GmResponse.SAME
    else:
        answer = _apply_s2(state, cls, view, tag, rec, discl)

    if state.phase == STRATEGY1:
        _rebalance(state, discl)
    state._retire_sweep()
    rec.answer = answer

    if switched:
        step = StepRecord(0, 0)
    else:
        step = StepRecord(state.colored_count() - colored_before,
                          state.retired_count() - retired_before)
    state.ledger.append(step)
    state.case_trace.append(tag)
    return answer, discl, step


def _first_part_hit(role_qb, query):
    for rec, part in role_qb:
        if part & query:
            return rec, part
    raise InvariantViolation("expected a part meeting the query")


def _apply_s1(state, cls, view, tag, rec, discl):
    query = rec.balls
    role_qb = cls.qb if not view.swap else cls.qr
    q_x0 = query & cls.x_0

    if tag == "1A" :
        return GmResponse.SAME
    if tag == "1B":
        return GmResponse.MIXED
    if tag == "1C":
        view.color(min(q_x0), Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "1D":
        prec, part = _first_part_hit(role_qb, query)
        p = min(part & query)
        q2 = min(part - {p})
        view.color(p, Color.BLUE, discl)
        view.color(q2, Color.RED, discl)
        return GmResponse.MIXED
    if tag == "1E":
        p = min(query & cls.x_d)
        prec = next(r for r in cls.qd if p in r.balls)
        comp = _component_of(cls.qd, prec)
        center = _star_center(comp)
        if center is not None and p != center:
            q2 = center
        else:
            q2 = min(prec.balls - {p})
        view.color(p, Color.BLUE, discl)
        view.color(q2, Color.RED, discl)
        return GmResponse.MIXED
    if tag == "2A":
        return GmResponse.SAME
    if tag == "2B":
        prec, part = _first_part_hit(role_qb, query)
        p = min(part & query)
        q2 = min(part - {p})
        view.color(p, Color.RED, discl)
        view.color(q2, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "2C":
        p = min(query & cls.x_d)
        prec = next(r for r in cls.qd if p in r.balls)
        q2 = min(prec.balls - {p})
        view.color(p, Color.RED, discl)
        view.color(q2, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "2Da":
        if _would_end_strategy1(state, cls, view, query):
            # flip the answer: the whole query is the role-blue color;
            # its unknown balls become known without explicit disclosure
            concrete = view.concrete(Color.BLUE)
            for ball in sorted(q_x0):
                state._color(ball, concrete)
            state.phase = STRATEGY2
            return None
        return GmResponse.MIXED
    if tag == "2Db":
        view.color(min(q_x0), Color.BLUE, discl)
        return GmResponse.SAME
    if tag == "3A":
        hits = [r for r in cls.qd if r.balls & query]
        pick = None
        for p1rec, p2rec in itertools.permutations(hits, 2):
            for p1 in sorted(p1rec.balls & query):
                cand = sorted((p2rec.balls & query) - {p1})
                if cand:
                    pick = (p1rec, p2rec, p1, cand[0])
                    break
            if pick:
                break
        if pick is None:
            raise InvariantViolation("case 3A could not split the overlap")
        p1rec, p2rec, p1, p2 = pick
        q1 = min(p1rec.balls - {p1, p2})
        q2 = min(p2rec.balls - {p1, p2, q1})
        view.color(p1, Color.RED, discl)
        view.color(q2, Color.RED, discl)
        view.color(p2, Color.BLUE, discl)
        view.color(q1, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "3B":
        prec = next(r for r in cls.qd if r.balls & query)
        inter = sorted(prec.balls & query)
        p, q2 = inter[0], inter[1]
        view.color(p, Color.RED, discl)
        view.color(q2, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "4A":
        prec, part = _first_part_hit(role_qb, query)
        p = min(part & query)
        view.color(p, Color.RED, discl)
        view.color(min(q_x0), Color.BLUE, discl)
        return GmResponse.MIXED
    if tag == "4Ba":
        for prec, part in role_qb:
            hit = sorted(part & query)
            if len(hit) >= 2:
                view.color(hit[0], Color.RED, discl)
                view.color(hit[1], Color.BLUE, discl)
                return GmResponse.MIXED
        raise InvariantViolation("case 4Ba lost its double hit")
    if tag == "4Bb":
        found = [(r, part) for r, part in role_qb if part & query]
        if len(found) < 2:
            raise InvariantViolation("case 4Bb needs two parts")
        (rec1, part1), (rec2, part2) = found[0], found[1]
        p1 = min(part1 & query)
        p2 = min(part2 & query)
        q1 = min(part1 - {p1})
        q2 = min(part2 - query)
        view.color(q1, Color.RED, discl)
        view.color(p2, Color.RED, discl)
        view.color(p1, Color.BLUE, discl)
        view.color(q2, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag in ("5A", "5B", "6"):
        return GmResponse.MIXED
    if tag == "5C":
        p1rec = next(r for r in cls.qd if r.balls & query)
        (p1,) = tuple(p1rec.balls & query)
        p2rec = next(r for r in cls.qd
                     if r is not p1rec and r.balls & p1rec.balls)
        common = p1rec.balls & p2rec.balls
        (p2,) = tuple(common)
        p3 = min(query - p1rec.balls - p2rec.balls)
        p4 = min(p2rec.balls - p1rec.balls - query)
        view.color(p1, Color.RED, discl)
        view.color(p4, Color.RED, discl)
        view.color(p2, Color.BLUE, discl)
        view.color(p3, Color.BLUE, discl)
        return GmResponse.MIXED
    raise InvariantViolation(f"unhandled case {tag}")


def _apply_s2(state, cls, view, tag, rec, discl):
    query = rec.balls
    role_qb = cls.qb if not view.swap else cls.qr
    if tag in ("S2_Aa", "S2_Ab", "S2_Ac"):
        prec, part = _first_part_hit(role_qb, query)
        p = min(part & query)
        q2 = min(part - {p})
        if tag == "S2_Aa":
            view.color(p, Color.BLUE, discl)
            view.color(q2, Color.RED, discl)
        elif tag == "S2_Ab":
            view.color(p, Color.RED, discl)
            view.color(q2, Color.BLUE, discl)
        else:
            rest = [(r, pt) for r, pt in role_qb
                    if r is not prec and pt & query]
            if not rest:
                raise InvariantViolation("case S2_Ac needs a second part")
            rec0, part0 = rest[0]
            p0 = min(part0 & query)
            q0 = min(part0 - {p0})
            view.color(p, Color.RED, discl)
            view.color(q0, Color.RED, discl)
            view.color(q2, Color.BLUE, discl)
            view.color(p0, Color.BLUE, discl)
        return GmResponse.MIXED
    if tag in ("S2_Ba", "S2_Bb"):
        return GmResponse.SAME
    if tag == "S2_Bc":
        return GmResponse.MIXED
    raise InvariantViolation(f"unhandled case {tag}")


def _would_end_strategy1(state, cls, view, query) -> bool:
    """Would answering "no" here complete end condition 2?"""
    v_r, v_b = len(view.red), len(view.blue)
    if v_r != v_b + 1:
        return False
    role_qb = cls.qb if not view.swap else cls.qr
    parts = [part for _, part in role_qb]
    parts.append(frozenset(query & cls.x_0))
    if any(len(p) != 2 for p in parts):
        return False
    covered = set(state.red) | set(state.blue)
    for p in parts:
        covered |= p
    return covered == set(range(1, state.n + 1))


# ---------------------------------------------------------------------------
# rebalancing (strategy one, property 3)
# ---------------------------------------------------------------------------

def _rebalance(state: GmAdversaryState, discl: list[Disclosure]) -> None:
    while True:
        cls = state.classes()
        if cls.qr and cls.qb:
            _, part_r = cls.qr[0]
            _, part_b = cls.qb[0]
            state._color(min(part_r), Color.BLUE)
            discl.append((min(part_r), Color.BLUE))
            state._color(min(part_b), Color.RED)
            discl.append((min(part_b), Color.RED))
        elif len(state.red) > len(state.blue) and cls.qr:
            _, part_r = cls.qr[0]
            state._color(min(part_r), Color.BLUE)
            discl.append((min(part_r), Color.BLUE))
        elif len(state.blue) > len(state.red) and cls.qb:
            _, part_b = cls.qb[0]
            state._color(min(part_b), Color.RED)
            discl.append((min(part_b), Color.RED))
        else:
            return


def rebalance(state: GmAdversaryState) -> tuple[StepRecord, list[Disclosure]]:
    """Standalone property-3 repair; returns the (j,k)-delta it cost."""
    colored_before = state.colored_count()
    retired_before = state.retired_count()
    discl: list[Disclosure] = []
    _rebalance(state, discl)
    state._retire_sweep()
    return (StepRecord(state.colored_count() - colored_before,
                       state.retired_count() - retired_before), discl)


# ---------------------------------------------------------------------------
# end conditions, invariants, certificate
# ---------------------------------------------------------------------------

def end_condition(state: GmAdversaryState) -> str:
    cls = state.classes()
    if state.phase == STRATEGY2:
        return END_COND1 if state.colored_count() == state.n else END_NONE
    if state.colored_count() >= state.n - 1:
        return END_COND1
    if abs(len(state.red) - len(state.blue)) == 1:
        small_parts = cls.qb if len(state.red) > len(state.blue) else cls.qr
        big_parts = cls.qr if len(state.red) > len(state.blue) else cls.qb
        if not big_parts and small_parts and \
                all(len(p) == 2 for _, p in small_parts):
            covered = set(state.red) | set(state.blue)
            for _, p in small_parts:
                covered |= p
            if covered == set(range(1, state.n + 1)):
                return END_COND2
    return END_NONE


def check_lemma_invariants(state: GmAdversaryState) -> list[str]:
    """Empty list when every phase-appropriate structural property holds."""
    out: list[str] = []
    cls = state.classes()
    if state.red & state.blue:
        out.append("a ball is both red and blue")
    all_parts = [p for _, p in cls.qr] + [p for _, p in cls.qb]

    if state.phase == STRATEGY1:
        if abs(len(state.red) - len(state.blue)) > 1:
            out.append("property 1: classes differ by more than one")
        for p in all_parts:
            if len(p) < 2:
                out.append("property 2: a part has fewer than two balls")
        if cls.qr and cls.qb:
            out.append("property 3: parts on both sides")
        if len(state.red) > len(state.blue) and cls.qr:
            out.append("property 3: red is larger but keeps parts")
        if len(state.blue) > len(state.red) and cls.qb:
            out.append("property 3: blue is larger but keeps parts")
        for a, b in itertools.combinations(all_parts, 2):
            if a & b:
                out.append("property 4: parts overlap")
                break
        x_parts = set().union(*all_parts) if all_parts else set()
        for rec in cls.qd:
            if rec.balls & x_parts:
                out.append("property 5: a part meets an unknown query")
                break
        for comp in _components(cls.qd):
            if len(comp) < 2:
                continue
            try:
                center = _star_center(comp)
            except InvariantViolation:
                out.append("property 6: a component is not a star")
                continue
            for a, b in itertools.combinations(comp, 2):
                if a.balls & b.balls != {center}:
                    out.append("property 6: a component is not a star")
                    break
    else:
        if cls.qd:
            out.append("phase two: unknown queries remain")
        if cls.qr and cls.qb:
            out.append("phase two: parts on both sides")
        parts_side = cls.qr or cls.qb
        anchor_is_red = bool(cls.qr)
        if parts_side:
            big, small = (state.red, state.blue) if anchor_is_red \
                else (state.blue, state.red)
            if len(big) != len(small) + 1:
                out.append("phase two: anchor side not exactly one ahead")
        elif abs(len(state.red) - len(state.blue)) != 1:
            out.append("phase two: classes not one apart")
        for _, p in parts_side:
            if len(p) != 2:
                out.append("phase two: a part is not a pair")
        covered = set(state.red) | set(state.blue)
        for _, p in parts_side:
            covered |= p
        if covered != set(range(1, state.n + 1)):
            out.append("phase two: balls outside classes and parts")
    return out


@dataclasses.dataclass
class GmCertificate:
    rounds: int
    non_zero_steps: int  # queries retired over the match
    implied_bound: int
    zero_rounds: int

    @property
    def ok(self) -> bool:
        return self.rounds >= self.implied_bound


def lower_bound_certificate(ledger: list[StepRecord], n: int) -> GmCertificate:
    """Round-count certificate for a finished match.

    Over a legal match the retired-query total dominates three quarters of
    the colored-ball total, and the match cannot end before roughly
    (3n+5)/4 rounds; the caller is expected to assert `ok`.
    """
    for step in ledger:
        if not step.ratio_ok():
            raise InvariantViolation(f"ledger step {step} breaks the 4/3 rule")
    retired = sum(s.k for s in ledger)
    zeros = sum(1 for s in ledger if s.is_zero)
    return GmCertificate(
        rounds=len(ledger),
        non_zero_steps=retired,
        implied_bound=ceil_div(3 * n + 5, 4),
        zero_rounds=zeros,
    )
