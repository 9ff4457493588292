"""Domain model for the two-color majority query game.

Balls are 1..n, colored red or blue. A questioner asks ball sets; in the
general model (gm) the answer says whether the set is monochromatic, in
the counting model (cm) it gives min(#red, #blue) inside the set. The
questioner must name a ball of the strictly larger color class, or state
that the classes tie.

This module holds the shared value types, the answer semantics, the
brute-force consistency machinery (packed enumeration up to a size cap)
and the transcript auditor used by every other part of the package.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels

DEFAULT_ENUM_CAP = 22

GM = "gm"
CM = "cm"


class InputError(ValueError):
    """Malformed input: bad ball index, wrong query size, bad config."""


class CapacityError(RuntimeError):
    """Instance too large for the enumeration-backed code path."""


class LogicError(RuntimeError):
    """A state that a correct adversary/questioner can never produce."""


class InvariantViolation(RuntimeError):
    """Internal strategy invariant broke; signals an implementation bug."""


def enum_cap() -> int:
    """Current 2^n enumeration cap (MAJLAB_ENUM_CAP overrides the default)."""
    raw = os.environ.get("MAJLAB_ENUM_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError as exc:
            raise InputError(f"bad MAJLAB_ENUM_CAP {raw!r}") from exc
    return DEFAULT_ENUM_CAP


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


class GmResponse(enum.Enum):
    SAME = "same"
    MIXED = "mixed"


Answer = Union[GmResponse, int]
Disclosure = tuple[int, Color]


def normalize_query(balls: Iterable[int], n: int, min_size: int = 2) -> tuple[int, ...]:
    """Sorted duplicate-free query; validates range and size."""
    q = tuple(sorted(set(int(b) for b in balls)))
    if any(b < 1 or b > n for b in q):
        raise InputError(f"query {q} has balls outside 1..{n}")
    if len(q) < min_size:
        raise InputError(f"query {q} smaller than {min_size}")
    return q


@dataclasses.dataclass(frozen=True)
class Coloring:
    """Full assignment of red/blue to balls 1..n, packed into red_mask."""

    n: int
    red_mask: int

    @classmethod
    def from_string(cls, s: str) -> "Coloring":
        mask = 0
        for i, ch in enumerate(s.upper()):
            if ch == "R":
                mask |= 1 << i
            elif ch != "B":
                raise InputError(f"bad coloring string {s!r}")
        return cls(len(s), mask)

    @classmethod
    def from_red_set(cls, n: int, red: Iterable[int]) -> "Coloring":
        mask = 0
        for b in red:
            if b < 1 or b > n:
                raise InputError(f"ball {b} outside 1..{n}")
            mask |= 1 << (b - 1)
        return cls(n, mask)

    def color_of(self, ball: int) -> Color:
        if ball < 1 or ball > self.n:
            raise InputError(f"ball {ball} outside 1..{self.n}")
        return Color.RED if (self.red_mask >> (ball - 1)) & 1 else Color.BLUE

    def red_count(self) -> int:
        return self.red_mask.bit_count()

    def swap(self) -> "Coloring":
        return Coloring(self.n, self.red_mask ^ ((1 << self.n) - 1))

    def to_string(self) -> str:
        return "".join("R" if (self.red_mask >> i) & 1 else "B" for i in range(self.n))

    def __str__(self) -> str:  # pragma: no cover - debugging nicety
        return self.to_string()


@dataclasses.dataclass(frozen=True)
class Verdict:
    """Questioner's final claim: a majority ball, or that no majority exists."""

    kind: str  # "ball" | "none"
    ball: Optional[int] = None

    @classmethod
    def majority_ball(cls, ball: int) -> "Verdict":
        return cls("ball", ball)

    @classmethod
    def no_majority(cls) -> "Verdict":
        return cls("none")

    def valid_in(self, coloring: Coloring) -> bool:
        reds = coloring.red_count()
        n = coloring.n
        if self.kind == "none":
            return 2 * reds == n
        if coloring.color_of(self.ball) is Color.RED:
            return 2 * reds > n
        return 2 * (n - reds) > n

    def to_json(self) -> dict:
        if self.kind == "ball":
            return {"type": "ball", "ball": self.ball}
        return {"type": "none"}

    @classmethod
    def from_json(cls, obj: dict) -> "Verdict":
        if obj["type"] == "ball":
            return cls.majority_ball(int(obj["ball"]))
        if obj["type"] == "none":
            return cls.no_majority()
        raise InputError(f"bad verdict {obj!r}")


@dataclasses.dataclass
class Round:
    query: tuple[int, ...]
    answer: Answer
    disclosures: list[Disclosure] = dataclasses.field(default_factory=list)


@dataclasses.dataclass
class Transcript:
    """Ordered record of a match; the interchange format between modules."""

    model: str
    n: int
    k: int
    rounds: list[Round] = dataclasses.field(default_factory=list)
    verdict: Optional[Verdict] = None
    final_coloring: Optional[Coloring] = None

    def add_round(self, query: Sequence[int], answer: Answer,
                  disclosures: Sequence[Disclosure] = ()) -> None:
        if self.model == GM and not isinstance(answer, GmResponse):
            raise InputError("gm transcript needs GmResponse answers")
        if self.model == CM and not isinstance(answer, int):
            raise InputError("cm transcript needs integer answers")
        for ball, _ in disclosures:
            if ball < 1 or ball > self.n:
                raise InputError(f"disclosure ball {ball} outside 1..{self.n}")
        self.rounds.append(Round(tuple(query), answer, list(disclosures)))

    def to_json(self) -> dict:
        rounds = []
        for r in self.rounds:
            if self.model == GM:
                ans = {"gm": r.answer.value}
            else:
                ans = {"cm": int(r.answer)}
            rounds.append({
                "query": list(r.query),
                "answer": ans,
                "disclosures": [[b, c.value] for b, c in r.disclosures],
            })
        return {
            "model": self.model,
            "n": self.n,
            "k": self.k,
            "rounds": rounds,
            "verdict": self.verdict.to_json() if self.verdict else None,
            "final_coloring": self.final_coloring.to_string() if self.final_coloring else None,
        }

    def to_json_str(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_json(), indent=indent)

    @classmethod
    def from_json(cls, obj: dict) -> "Transcript":
        model = obj["model"]
        if model not in (GM, CM):
            raise InputError(f"bad model {model!r}")
        t = cls(model=model, n=int(obj["n"]), k=int(obj["k"]))
        for r in obj["rounds"]:
            ans_obj = r["answer"]
            if model == GM:
                ans: Answer = GmResponse(ans_obj["gm"])
            else:
                ans = int(ans_obj["cm"])
            discl = [(int(b), Color(c)) for b, c in r.get("disclosures", [])]
            t.add_round(tuple(int(b) for b in r["query"]), ans, discl)
        if obj.get("verdict"):
            t.verdict = Verdict.from_json(obj["verdict"])
        if obj.get("final_coloring"):
            t.final_coloring = Coloring.from_string(obj["final_coloring"])
        return t

    @classmethod
    def from_json_str(cls, s: str) -> "Transcript":
        return cls.from_json(json.loads(s))


# ---------------------------------------------------------------------------
# answer semantics
# ---------------------------------------------------------------------------

def gm_answer_of(query: Sequence[int], coloring: Coloring) -> GmResponse:
    """Same iff every ball of the query has one color under the coloring."""
    q = normalize_query(query, coloring.n)
    inter = (coloring.red_mask & _mask(q)).bit_count()
    return GmResponse.SAME if inter in (0, len(q)) else GmResponse.MIXED


def cm_answer_of(query: Sequence[int], coloring: Coloring) -> int:
    """min(#red, #blue) inside the query under the coloring."""
    q = normalize_query(query, coloring.n)
    inter = (coloring.red_mask & _mask(q)).bit_count()
    return min(inter, len(q) - inter)


def _mask(balls: Iterable[int]) -> int:
    m = 0
    for b in balls:
        m |= 1 << (b - 1)
    return m


def majority_verdict_set(coloring: Coloring) -> set[Verdict]:
    """Every verdict valid for this coloring."""
    n, reds = coloring.n, coloring.red_count()
    if 2 * reds == n:
        return {Verdict.no_majority()}
    major = Color.RED if 2 * reds > n else Color.BLUE
    return {Verdict.majority_ball(b) for b in range(1, n + 1)
            if coloring.color_of(b) is major}


# ---------------------------------------------------------------------------
# brute-force consistency
# ---------------------------------------------------------------------------

class ColoringSet:
    """Set of candidate colorings, stored as packed codes (ascending)."""

    def __init__(self, n: int, codes: np.ndarray):
        self.n = n
        self.codes = np.ascontiguousarray(codes, dtype=np.uint32)

    @classmethod
    def full(cls, n: int, cap: Optional[int] = None) -> "ColoringSet":
        cap = enum_cap() if cap is None else cap
        if n > cap:
            raise CapacityError(f"n={n} above enumeration cap {cap}")
        return cls(n, kernels.all_colorings(n))

    def __len__(self) -> int:
        return len(self.codes)

    def __contains__(self, coloring: Coloring) -> bool:
        idx = np.searchsorted(self.codes, np.uint32(coloring.red_mask))
        return idx < len(self.codes) and int(self.codes[idx]) == coloring.red_mask

    def members(self) -> list[Coloring]:
        return [Coloring(self.n, int(c)) for c in self.codes]

    def restrict_answer(self, model: str, query: Sequence[int], answer: Answer) -> "ColoringSet":
        qm = kernels.query_mask(query)
        if model == GM:
            codes = kernels.gm_answer_codes(self.codes, qm, len(query))
            want = 1 if answer is GmResponse.SAME else 0
        else:
            codes = kernels.cm_answer_codes(self.codes, qm, len(query))
            want = int(answer)
        return ColoringSet(self.n, self.codes[codes == want])

    def restrict_color(self, ball: int, color: Color) -> "ColoringSet":
        bit = (self.codes >> np.uint32(ball - 1)) & np.uint32(1)
        want = 1 if color is Color.RED else 0
        return ColoringSet(self.n, self.codes[bit == want])


def consistent_set(transcript: Transcript, cap: Optional[int] = None) -> ColoringSet:
    """All colorings agreeing with every answer and disclosure."""
    cs = ColoringSet.full(transcript.n, cap)
    for r in transcript.rounds:
        cs = cs.restrict_answer(transcript.model, r.query, r.answer)
        for ball, color in r.disclosures:
            cs = cs.restrict_color(ball, color)
    return cs


def forced_verdict(cs: ColoringSet) -> Optional[Verdict]:
    """A verdict valid in every member, if one exists.

    Preference order: lowest-index majority ball, then the no-majority
    claim. The two can never both be available, since a tie coloring
    admits only the no-majority verdict.
    """
    if len(cs) == 0:
        raise LogicError("consistent set is empty; some answer lied")
    pops = kernels.popcount(cs.codes)
    n = cs.n
    ties = pops * 2 == n
    if ties.all():
        return Verdict.no_majority()
    if ties.any():
        return None
    full = (1 << n) - 1
    red_major = pops * 2 > n
    maj = np.where(red_major, cs.codes.astype(np.int64),
                   (~cs.codes.astype(np.int64)) & full)
    common = full
    for m in maj:
        common &= int(m)
        if not common:
            return None
    low = (common & -common).bit_length() - 1
    return Verdict.majority_ball(low + 1)


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class AuditReport:
    rounds: int
    prefix_consistent: bool
    disclosures_sound: bool
    verdict_valid: Optional[bool]  # None when the transcript has no verdict
    final_coloring_consistent: Optional[bool]
    violations: list[str] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_transcript(transcript: Transcript, cap: Optional[int] = None) -> AuditReport:
    """Replay a transcript against brute-force enumeration.

    Checks, per the module contract: (a) every prefix keeps a nonempty
    consistent set, (b) each disclosure is achievable given all answers so
    far and the disclosures before it, (c) a recorded verdict is valid in
    every final consistent coloring, (d) the recorded final coloring, if
    any, is itself consistent. Violations are report entries, never
    exceptions.
    """
    violations: list[str] = []
    cs = ColoringSet.full(transcript.n, cap)
    prefix_ok = True
    discl_ok = True
    seen_disclosed: set[int] = set()
    for i, r in enumerate(transcript.rounds, start=1):
        cs = cs.restrict_answer(transcript.model, r.query, r.answer)
        if len(cs) == 0 and prefix_ok:
            prefix_ok = False
            violations.append(f"round {i}: answers have no consistent coloring")
        for ball, color in r.disclosures:
            if ball in seen_disclosed:
                discl_ok = False
                violations.append(f"round {i}: ball {ball} disclosed twice")
            seen_disclosed.add(ball)
            narrowed = cs.restrict_color(ball, color)
            if len(cs) > 0 and len(narrowed) == 0:
                discl_ok = False
                violations.append(
                    f"round {i}: disclosure ball {ball}={color.value} "
                    "contradicts the play so far")
            cs = narrowed
    verdict_valid: Optional[bool] = None
    if transcript.verdict is not None:
        if len(cs) == 0:
            verdict_valid = False
        else:
            verdict_valid = all(transcript.verdict.valid_in(c) for c in cs.members())
        if not verdict_valid:
            violations.append("verdict not valid in every consistent coloring")
    final_ok: Optional[bool] = None
    if transcript.final_coloring is not None:
        final_ok = transcript.final_coloring in cs
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
