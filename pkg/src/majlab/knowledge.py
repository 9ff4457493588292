"""Exact questioner-side knowledge without full enumeration.

Both reference adversaries disclose aggressively enough that the set of
colorings consistent with a transcript factors into independent pieces:
pinned balls, per-query constraint components over the still-unknown
balls, and completely free balls. Over that product form, minimal and
maximal color-class counts (optionally with one ball's color fixed) are
computable in closed form, which is all a forced-verdict or refutation
check needs.

For small n the enumeration engine in :mod:`majlab.core` is used instead;
the structured engine kicks in above the cap, and refuses transcripts
whose constraint graph does not factor (``UnsupportedShape``).
"""

from __future__ import annotations

import dataclasses
from typing import Optional

from .core import (
    CM,
    GM,
    CapacityError,
    Color,
    Coloring,
    ColoringSet,
    GmResponse,
    LogicError,
    Transcript,
    Verdict,
    consistent_set,
    enum_cap,
    forced_verdict,
)


class UnsupportedShape(RuntimeError):
    """Constraint graph does not factor into recognized components."""


Fixed = Optional[tuple[int, Color]]


def _fix_in(balls, fixed: Fixed) -> Fixed:
    if fixed is not None and fixed[0] in balls:
        return fixed
    return None


class _Component:
    balls: frozenset

    def min_count(self, color: Color, fixed: Fixed) -> Optional[int]:
        raise NotImplementedError

    def assign_min(self, color: Color, fixed: Fixed) -> dict[int, Color]:
        """Concrete assignment achieving min_count(color, fixed)."""
        raise NotImplementedError


@dataclasses.dataclass
class _PartComponent(_Component):
    """Unknown part of one query whose known balls are all `anchor` colored.

    The query was answered "mixed", so at least one part ball must take
    the opposite color of the anchor.
    """

    balls: frozenset
    need: Color  # at least one ball of this color

    def min_count(self, color, fixed):
        size = len(self.balls)
        fixed = _fix_in(self.balls, fixed)
        if fixed is None:
            return 1 if self.need is color else 0
        ball, fcolor = fixed
        if fcolor is self.need:
            return 1 if color is fcolor else 0
        # fixed ball takes the non-required color; one other must flip
        if size < 2:
            return None
        return (1 if color is fcolor else 0) + (1 if color is self.need else 0)

    def assign_min(self, color, fixed):
        out = {b: color.other for b in self.balls}
        fixed = _fix_in(self.balls, fixed)
        carrier = None
        if fixed is not None:
            out[fixed[0]] = fixed[1]
            if fixed[1] is self.need:
                carrier = fixed[0]
        if carrier is None:
            for b in sorted(self.balls):
                if fixed is None or b != fixed[0]:
                    out[b] = self.need
                    break
        return out


@dataclasses.dataclass
class _StarComponent(_Component):
    """Component of all-unknown "mixed" queries forming a star.

    Every query contains the center (when the component has two or more
    queries) and the legs are pairwise disjoint; each query must avoid
    being monochromatic.
    """

    balls: frozenset
    center: Optional[int]  # None for a single-query component
    legs: list[frozenset]  # query minus center; single query -> its full set

    def _min_for_gamma(self, gamma: Color, color: Color, fixed: Fixed) -> Optional[int]:
        # center colored gamma; each leg needs >= 1 ball of gamma.other
        total = 0
        if self.center is not None:
            if fixed is not None and fixed[0] == self.center and fixed[1] is not gamma:
                return None
            if color is gamma:
                total += 1
        for leg in self.legs:
            lf = _fix_in(leg, fixed)
            need = gamma.other
            if lf is None:
                # fill leg with `need` fully when it helps minimization?
                # minimal count of `color`: put one ball on `need`, rest on
                # the color we are *not* counting.
                if color is need:
                    total += 1
                else:
                    # one ball must be `need` (not counted); rest can avoid
                    # `color` entirely by also taking `need`.
                    total += 0
            else:
                ball, fcolor = lf
                cnt = 1 if fcolor is color else 0
                if fcolor is need:
                    rest_need = 0
                else:
                    if len(leg) < 2:
                        return None
                    rest_need = 1
                if rest_need and color is need:
                    cnt += 1
                total += cnt
        return total

    def min_count(self, color, fixed):
        fixed = _fix_in(self.balls, fixed)
        if self.center is None:
            # single mixed query needs one ball of each color; with size
            # >= 2 any fixation stays feasible and the minimum is one.
            (leg,) = self.legs
            return 1 if len(leg) >= 2 else None
        best = None
        for gamma in (Color.RED, Color.BLUE):
            v = self._min_for_gamma(gamma, color, fixed)
            if v is not None and (best is None or v < best):
                best = v
        return best

    def assign_min(self, color, fixed):
        fixed = _fix_in(self.balls, fixed)
        if self.center is None:
            (leg,) = self.legs
            out = {b: color.other for b in leg}
            if fixed is not None:
                out[fixed[0]] = fixed[1]
            for want in (color, color.other):
                if want not in set(out.values()):
                    for b in sorted(leg):
                        if fixed is None or b != fixed[0]:
                            out[b] = want
                            break
            assert len(set(out.values())) == 2
            return out
        best_gamma = None
        best_val = None
        for gamma in (Color.RED, Color.BLUE):
            v = self._min_for_gamma(gamma, color, fixed)
            if v is not None and (best_val is None or v < best_val):
                best_val, best_gamma = v, gamma
        assert best_gamma is not None
        gamma = best_gamma
        out = {self.center: gamma}
        if fixed is not None and fixed[0] == self.center:
            out[self.center] = fixed[1]
        for leg in self.legs:
            lf = _fix_in(leg, fixed)
            need = gamma.other
            fill = need if color is not need else gamma
            # fill minimizes `color`: prefer the non-counted color, but one
            # ball must carry `need`.
            for b in sorted(leg):
                out[b] = fill
            carrier = None
            if lf is not None:
                out[lf[0]] = lf[1]
                if lf[1] is need:
                    carrier = lf[0]
            if carrier is None:
                for b in sorted(leg):
                    if lf is None or b != lf[0]:
                        out[b] = need
                        break
        return out


@dataclasses.dataclass
class _MonoComponent(_Component):
    """Balls tied together by "same" answers with no known color yet."""

    balls: frozenset

    def min_count(self, color, fixed):
        fixed = _fix_in(self.balls, fixed)
        if fixed is None:
            return 0
        return len(self.balls) if fixed[1] is color else 0

    def assign_min(self, color, fixed):
        fixed = _fix_in(self.balls, fixed)
        pick = color.other if fixed is None else fixed[1]
        return {b: pick for b in self.balls}


@dataclasses.dataclass
class _CountComponent(_Component):
    """Unknown part of a counting-model query: red count in a fixed set."""

    balls: frozenset
    red_options: tuple[int, ...]  # attainable numbers of red balls

    def min_count(self, color, fixed):
        size = len(self.balls)
        fixed = _fix_in(self.balls, fixed)
        opts = self.red_options
        if fixed is not None:
            if fixed[1] is Color.RED:
                opts = tuple(f for f in opts if f >= 1)
            else:
                opts = tuple(f for f in opts if f <= size - 1)
        if not opts:
            return None
        if color is Color.RED:
            return min(opts)
        return size - max(opts)

    def assign_min(self, color, fixed):
        size = len(self.balls)
        fixed = _fix_in(self.balls, fixed)
        opts = self.red_options
        if fixed is not None:
            if fixed[1] is Color.RED:
                opts = tuple(f for f in opts if f >= 1)
            else:
                opts = tuple(f for f in opts if f <= size - 1)
        reds = min(opts) if color is Color.RED else max(opts)
        out = {}
        remaining_red = reds
        order = sorted(self.balls)
        if fixed is not None:
            out[fixed[0]] = fixed[1]
            if fixed[1] is Color.RED:
                remaining_red -= 1
            order = [b for b in order if b != fixed[0]]
        for b in order:
            if remaining_red > 0:
                out[b] = Color.RED
                remaining_red -= 1
            else:
                out[b] = Color.BLUE
        return out


class StructuredKnowledge:
    """Product-form consistent-set model built from a transcript prefix."""

    def __init__(self, model: str, n: int):
        self.model = model
        self.n = n
        self.pinned: dict[int, Color] = {}
        self.gm_rounds: list[tuple[tuple[int, ...], GmResponse]] = []
        self.cm_rounds: list[tuple[tuple[int, ...], int]] = []
        self._components: Optional[list[_Component]] = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_transcript(cls, transcript: Transcript) -> "StructuredKnowledge":
        kn = cls(transcript.model, transcript.n)
        for r in transcript.rounds:
            kn.add_round(r.query, r.answer, r.disclosures)
        return kn

    def add_round(self, query, answer, disclosures=()) -> None:
        if self.model == GM:
            self.gm_rounds.append((tuple(query), answer))
        else:
            self.cm_rounds.append((tuple(query), int(answer)))
        for ball, color in disclosures:
            self.pin(ball, color)
        self._components = None

    def pin(self, ball: int, color: Color) -> None:
        old = self.pinned.get(ball)
        if old is not None and old is not color:
            raise LogicError(f"ball {ball} pinned both colors")
        self.pinned[ball] = color
        self._components = None

    # -- closure and component extraction ----------------------------------

    def _close_pins(self) -> None:
        if self.model == CM:
            return
        changed = True
        while changed:
            changed = False
            for q, ans in self.gm_rounds:
                colors = {self.pinned[b] for b in q if b in self.pinned}
                unknown = [b for b in q if b not in self.pinned]
                if ans is GmResponse.SAME:
                    if len(colors) == 2:
                        raise LogicError("monochromatic query pinned both colors")
                    if len(colors) == 1 and unknown:
                        c = next(iter(colors))
                        for b in unknown:
                            self.pinned[b] = c
                        changed = True
                else:
                    if len(colors) == 1 and len(unknown) == 1:
                        c = next(iter(colors))
                        if self.pinned.get(unknown[0]) is None:
                            self.pinned[unknown[0]] = c.other
                            changed = True
                    if not unknown and len(colors) < 2:
                        raise LogicError("mixed query fully pinned to one color")

    def _build(self) -> list[_Component]:
        if self._components is not None:
            return self._components
        self._close_pins()
        raw: list[tuple[str, frozenset, object]] = []
        if self.model == GM:
            for q, ans in self.gm_rounds:
                colors = {self.pinned[b] for b in q if b in self.pinned}
                unknown = frozenset(b for b in q if b not in self.pinned)
                if not unknown:
                    continue
                if ans is GmResponse.SAME:
                    raw.append(("mono", unknown, None))
                elif len(colors) == 2:
                    continue  # already satisfied
                elif len(colors) == 1:
                    raw.append(("part", unknown, next(iter(colors)).other))
                else:
                    raw.append(("mixed", frozenset(q), None))
        else:
            for q, ans in self.cm_rounds:
                unknown = frozenset(b for b in q if b not in self.pinned)
                r0 = sum(1 for b in q if self.pinned.get(b) is Color.RED)
                k = len(q)
                opts = sorted({ans - r0, (k - ans) - r0})
                opts = tuple(f for f in opts if 0 <= f <= len(unknown))
                if not unknown:
                    if min(r0, k - r0) != ans:
                        raise LogicError("count answer contradicts pinned colors")
                    continue
                if not opts:
                    raise LogicError("count answer admits no completion")
                raw.append(("count", unknown, opts))

        # union-find over raw constraints sharing balls
        parent = list(range(len(raw)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        ball_owner: dict[int, int] = {}
        for i, (_, balls, _) in enumerate(raw):
            for b in balls:
                if b in ball_owner:
                    ri, rj = find(i), find(ball_owner[b])
                    if ri != rj:
                        parent[ri] = rj
                else:
                    ball_owner[b] = i
        groups: dict[int, list[int]] = {}
        for i in range(len(raw)):
            groups.setdefault(find(i), []).append(i)

        comps: list[_Component] = []
        for idxs in groups.values():
            kinds = {raw[i][0] for i in idxs}
            if kinds == {"mixed"}:
                comps.append(self._star_from(
                    [raw[i][1] for i in idxs]))
            elif len(idxs) == 1:
                kind, balls, extra = raw[idxs[0]]
                if kind == "part":
                    comps.append(_PartComponent(balls, extra))
                elif kind == "mono":
                    comps.append(_MonoComponent(balls))
                elif kind == "count":
                    comps.append(_CountComponent(balls, extra))
                else:  # single mixed query
                    comps.append(_StarComponent(balls, None, [balls]))
            else:
                raise UnsupportedShape(
                    f"entangled constraints of kinds {sorted(kinds)}")
        self._components = comps
        return comps

    def _star_from(self, queries: list[frozenset]) -> _StarComponent:
        if len(queries) == 1:
            return _StarComponent(queries[0], None, [queries[0]])
        center_candidates = set(queries[0])
        for q in queries[1:]:
            center_candidates &= q
        if len(center_candidates) != 1:
            raise UnsupportedShape("mixed-query component is not a star")
        center = next(iter(center_candidates))
        legs = []
        seen: set[int] = set()
        for q in queries:
            leg = frozenset(q - {center})
            if leg & seen:
                raise UnsupportedShape("star legs overlap")
            seen |= leg
            legs.append(leg)
        balls = frozenset().union(*queries)
        return _StarComponent(balls, center, legs)

    # -- queries over the product form --------------------------------------

    def free_balls(self) -> set[int]:
        comps = self._build()
        covered = set(self.pinned)
        for c in comps:
            covered |= set(c.balls)
        return set(range(1, self.n + 1)) - covered

    def min_count(self, color: Color, fixed: Fixed = None) -> Optional[int]:
        comps = self._build()
        if fixed is not None and fixed[0] in self.pinned:
            if self.pinned[fixed[0]] is not fixed[1]:
                return None
            fixed = None
        total = sum(1 for c in self.pinned.values() if c is color)
        if fixed is not None and fixed[0] in self.free_balls():
            if fixed[1] is color:
                total += 1
            fixed = None
        for comp in comps:
            v = comp.min_count(color, fixed)
            if v is None:
                return None
            total += v
        return total

    def max_count(self, color: Color, fixed: Fixed = None) -> Optional[int]:
        m = self.min_count(color.other, fixed)
        return None if m is None else self.n - m

    def forced_verdict(self) -> Optional[Verdict]:
        n = self.n
        min_red = self.min_count(Color.RED)
        min_blue = self.min_count(Color.BLUE)
        if min_red is None or min_blue is None:
            raise LogicError("inconsistent transcript")
        forced_red = 2 * min_red > n
        forced_blue = 2 * min_blue > n
        for y in range(1, n + 1):
            c = self.pinned.get(y)
            if c is Color.RED and forced_red:
                return Verdict.majority_ball(y)
            if c is Color.BLUE and forced_blue:
                return Verdict.majority_ball(y)
            if c is None:
                mr = self.min_count(Color.RED, (y, Color.RED))
                mb = self.min_count(Color.BLUE, (y, Color.BLUE))
                ok_r = mr is None or 2 * mr > n
                ok_b = mb is None or 2 * mb > n
                if ok_r and ok_b and not (mr is None and mb is None):
                    return Verdict.majority_ball(y)
        if min_red == self.max_count(Color.RED) and 2 * min_red == n:
            return Verdict.no_majority()
        return None

    def witness(self, minimize: Color = Color.RED, fixed: Fixed = None) -> Optional[Coloring]:
        """A consistent coloring minimizing the given color class."""
        comps = self._build()
        if fixed is not None and fixed[0] in self.pinned:
            if self.pinned[fixed[0]] is not fixed[1]:
                return None
            fixed = None
        assign: dict[int, Color] = dict(self.pinned)
        for comp in comps:
            if comp.min_count(minimize, fixed) is None:
                return None
            assign.update(comp.assign_min(minimize, fixed))
        for b in self.free_balls():
            assign[b] = minimize.other
        if fixed is not None:
            assign[fixed[0]] = fixed[1]
        red = [b for b, c in assign.items() if c is Color.RED]
        return Coloring.from_red_set(self.n, red)

    def refute(self, verdict: Verdict) -> Optional[Coloring]:
        """A consistent coloring in which the verdict is invalid."""
        n = self.n
        if verdict.kind == "none":
            w = self.witness(Color.RED)
            if w is not None and 2 * w.red_count() != n:
                return w
            w = self.witness(Color.BLUE)
            if w is not None and 2 * (n - w.red_count()) != n:
                return w
            return None
        y = verdict.ball
        pinned = self.pinned.get(y)
        for ycolor in (Color.RED, Color.BLUE):
            if pinned is not None and pinned is not ycolor:
                continue
            m = self.min_count(ycolor, (y, ycolor))
            if m is not None and 2 * m <= n:
                return self.witness(ycolor, (y, ycolor))
        return None


# ---------------------------------------------------------------------------
# engine selection
# ---------------------------------------------------------------------------

class EnumKnowledge:
    """Enumeration-backed twin of StructuredKnowledge (small n)."""

    def __init__(self, model: str, n: int, cap: Optional[int] = None):
        self.model = model
        self.n = n
        self.cs = ColoringSet.full(n, cap)

    @classmethod
    def from_transcript(cls, transcript: Transcript, cap: Optional[int] = None):
        kn = cls(transcript.model, transcript.n, cap)
        for r in transcript.rounds:
            kn.add_round(r.query, r.answer, r.disclosures)
        return kn

    def add_round(self, query, answer, disclosures=()) -> None:
        self.cs = self.cs.restrict_answer(self.model, tuple(query), answer)
        for ball, color in disclosures:
            self.cs = self.cs.restrict_color(ball, color)

    def forced_verdict(self) -> Optional[Verdict]:
        return forced_verdict(self.cs)

    def witness(self) -> Optional[Coloring]:
        if len(self.cs) == 0:
            return None
        return Coloring(self.n, int(self.cs.codes[0]))

    def refute(self, verdict: Verdict) -> Optional[Coloring]:
        for c in self.cs.members():
            if not verdict.valid_in(c):
                return c
        return None


def knowledge_for(transcript: Transcript, cap: Optional[int] = None):
    """Pick the exact engine: enumeration under the cap, product form above."""
    cap = enum_cap() if cap is None else cap
    if transcript.n <= cap:
        return EnumKnowledge.from_transcript(transcript, cap)
    return StructuredKnowledge.from_transcript(transcript)


def structured_audit(transcript: Transcript):
    """Audit via the product form; exact for factoring transcripts.

    Mirrors core.audit_transcript for instances too large to enumerate.
    Raises UnsupportedShape when the constraint graph does not factor.
    """
    from .core import AuditReport, gm_answer_of, cm_answer_of
    violations: list[str] = []
    kn = StructuredKnowledge(transcript.model, transcript.n)
    prefix_ok = True
    discl_ok = True
    seen: set[int] = set()
    for i, r in enumerate(transcript.rounds, start=1):
        kn.add_round(r.query, r.answer, [])
        for ball, color in r.disclosures:
            if ball in seen:
                discl_ok = False
                violations.append(f"round {i}: ball {ball} disclosed twice")
            seen.add(ball)
            try:
                kn.pin(ball, color)
            except LogicError:
                discl_ok = False
                violations.append(
                    f"round {i}: disclosure ball {ball}={color.value} "
                    "contradicts an earlier disclosure")
        # the product shape is only guaranteed between full rounds: a
        # round's own disclosures may be what disentangles its constraints
        try:
            kn._build()
        except LogicError:
            if prefix_ok:
                prefix_ok = False
                violations.append(
                    f"round {i}: answers and disclosures have no "
                    "consistent coloring")
    verdict_valid = None
    if transcript.verdict is not None:
        verdict_valid = kn.refute(transcript.verdict) is None
        if not verdict_valid:
            violations.append("verdict not valid in every consistent coloring")
    final_ok = None
    if transcript.final_coloring is not None:
        c = transcript.final_coloring
        final_ok = True
        for r in transcript.rounds:
            if transcript.model == GM:
                good = gm_answer_of(r.query, c) is r.answer
            else:
                good = cm_answer_of(r.query, c) == r.answer
            if not good or any(c.color_of(b) is not col for b, col in r.disclosures):
                final_ok = False
                break
        if not final_ok:
            violations.append("final coloring inconsistent with the transcript")
    return AuditReport(
        rounds=len(transcript.rounds),
        prefix_consistent=prefix_ok,
        disclosures_sound=discl_ok,
        verdict_valid=verdict_valid,
        final_coloring_consistent=final_ok,
        violations=violations,
    )
