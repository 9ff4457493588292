"""Match runner, bounds table, fuzz driver and the interactive loop.

A match wires a questioner policy against an adversary, records the
transcript, audits it and applies the model's round-floor certificate.
The bounds table evaluates every closed-form bound with exact integer
arithmetic; rows whose preconditions fail are flagged rather than
dropped.
"""

from __future__ import annotations

import dataclasses
import math
import random
from typing import Optional, TextIO, Union

from . import cm_adversary, gm_adversary
from .core import (
    CM,
    GM,
    AuditReport,
    Coloring,
    GmResponse,
    InputError,
    Transcript,
    Verdict,
    audit_transcript,
    ceil_div,
    enum_cap,
)
from .exact_solver import OptimalAdversary
from .knowledge import knowledge_for, structured_audit
from .questioners import (
    GreedyQuestioner,
    Hypergraph,
    PropertyBQuestioner,
    RandomQuestioner,
    witness_edge_count,
)


# ---------------------------------------------------------------------------
# bounds table
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class BoundsRow:
    model: str
    n: int
    k: int
    name: str
    side: str  # "lower" | "upper"
    value: int
    preconditions_met: bool

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


def ones_count(n: int) -> int:
    return int(n).bit_count()


def bounds_table(model: str, k: int, n_range) -> list[BoundsRow]:
    if model not in (GM, CM):
        raise InputError(f"unknown model {model!r}")
    rows: list[BoundsRow] = []
    for n in n_range:
        if n < 1 or k < 2:
            raise InputError("need n >= 1 and k >= 2")
        if k == 2:
            exact = n - ones_count(n)
            rows.append(BoundsRow(model, n, k, "pairing_exact", "lower", exact, True))
            rows.append(BoundsRow(model, n, k, "pairing_exact", "upper", exact, True))
            continue
        if model == GM:
            rows.append(BoundsRow(
                model, n, k, "cover_lower", "lower", ceil_div(n, k),
                2 * k - 1 <= n))
            rows.append(BoundsRow(
                model, n, k, "half_plus_k_lower", "lower", n // 2 + k - 2,
                2 * k - 1 <= n))
            rows.append(BoundsRow(
                model, n, k, "three_quarter_lower", "lower",
                ceil_div(3 * n + 5, 4), 3 <= k <= n))
            rows.append(BoundsRow(
                model, n, k, "pigeonhole_upper", "upper",
                n - k + math.comb(2 * k - 1, k), 2 * k - 1 <= n))
            witness_vertices = 7 if k == 3 else 2 * k - 1
            rows.append(BoundsRow(
                model, n, k, "witness_upper", "upper",
                n - k + witness_edge_count(k), n >= witness_vertices))
        else:
            rows.append(BoundsRow(
                model, n, k, "odd_k_lower", "lower",
                ceil_div(n - 1, k - 1), k % 2 == 1 and k <= n))
            rows.append(BoundsRow(
                model, n, k, "counting_lower", "lower",
                ceil_div(6 * n - (5 * k + 6), 5 * k + 6), 3 <= k <= n))
    return rows


def bounds_csv(rows: list[BoundsRow]) -> str:
    out = ["model,n,k,name,side,value,preconditions_met"]
    for r in rows:
        out.append(f"{r.model},{r.n},{r.k},{r.name},{r.side},{r.value},"
                   f"{str(r.preconditions_met).lower()}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# adversary adapters
# ---------------------------------------------------------------------------

class PaperGmAdversary:
    """Gameplay wrapper around the two-phase disclosure strategy."""

    def __init__(self, n: int, k: int):
        self.state = gm_adversary.new_gm_adversary(n)
        self.n, self.k = n, k

    def respond(self, query):
        ans, discl, _ = gm_adversary.respond(self.state, query)
        return ans, discl


class PaperCmAdversary:
    def __init__(self, n: int, k: int):
        self.state = cm_adversary.new_cm_adversary(n, k)
        self.n, self.k = n, k

    def respond(self, query):
        return cm_adversary.respond(self.state, query)


class ReplayAdversary:
    """Re-emits the answers of a recorded transcript."""

    def __init__(self, recorded: Transcript):
        self.recorded = recorded
        self.cursor = 0

    def respond(self, query):
        if self.cursor >= len(self.recorded.rounds):
            raise InputError("replay transcript exhausted")
        r = self.recorded.rounds[self.cursor]
        if tuple(query) != r.query:
            raise InputError(
                f"replay mismatch at round {self.cursor + 1}: "
                f"asked {tuple(query)}, recorded {r.query}")
        self.cursor += 1
        return r.answer, list(r.disclosures)


class ReplayQuestioner:
    def __init__(self, recorded: Transcript):
        self.recorded = recorded

    def next_move(self, transcript: Transcript):
        i = len(transcript.rounds)
        if i < len(self.recorded.rounds):
            return self.recorded.rounds[i].query
        if self.recorded.verdict is not None:
            return self.recorded.verdict
        raise InputError("replay transcript has no verdict to finish with")


# ---------------------------------------------------------------------------
# match running
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class MatchConfig:
    model: str
    n: int
    k: int
    adversary: str = "paper"      # paper | optimal | replay:<file>
    questioner: str = "random"    # random | greedy | property-b | replay:<file>
    seed: int = 0
    trace: bool = False
    witness: Optional[Hypergraph] = None


@dataclasses.dataclass
class MatchReport:
    transcript: Transcript
    rounds: int
    audit: AuditReport
    certificate_ok: Optional[bool]
    certificate_bound: Optional[int]
    trace: list[dict] = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.audit.ok and self.certificate_ok is not False


def _build_adversary(cfg: MatchConfig):
    spec = cfg.adversary
    if spec == "paper":
        if cfg.model == GM:
            return PaperGmAdversary(cfg.n, cfg.k)
        return PaperCmAdversary(cfg.n, cfg.k)
    if spec == "optimal":
        return OptimalAdversary(cfg.model, cfg.n, cfg.k)
    if spec.startswith("replay:"):
        with open(spec.split(":", 1)[1], encoding="utf-8") as fh:
            return ReplayAdversary(Transcript.from_json_str(fh.read()))
    raise InputError(f"unknown adversary {spec!r}")


def _build_questioner(cfg: MatchConfig):
    spec = cfg.questioner
    if spec == "random":
        return RandomQuestioner(cfg.n, cfg.k, cfg.seed, cfg.model)
    if spec == "greedy":
        return GreedyQuestioner(cfg.n, cfg.k, cfg.model)
    if spec == "property-b":
        if cfg.model != GM:
            raise InputError("property-b plays the yes/no model only")
        return PropertyBQuestioner(cfg.n, cfg.k, cfg.witness)
    if spec.startswith("replay:"):
        with open(spec.split(":", 1)[1], encoding="utf-8") as fh:
            return ReplayQuestioner(Transcript.from_json_str(fh.read()))
    raise InputError(f"unknown questioner {spec!r}")


def audit_any(transcript: Transcript, cap: Optional[int] = None) -> AuditReport:
    """Enumeration audit under the cap, product-form audit above it."""
    cap = enum_cap() if cap is None else cap
    if transcript.n <= cap:
        return audit_transcript(transcript, cap)
    return structured_audit(transcript)


def round_limit(cfg: MatchConfig) -> int:
    extra = witness_edge_count(cfg.k) if cfg.model == GM and cfg.k <= 6 else 0
    return 4 * cfg.n + extra + 40


def run_match(cfg: MatchConfig) -> MatchReport:
    transcript = Transcript(cfg.model, cfg.n, cfg.k)
    adversary = _build_adversary(cfg)
    questioner = _build_questioner(cfg)
    trace: list[dict] = []
    for _ in range(round_limit(cfg)):
        move = questioner.next_move(transcript)
        if isinstance(move, Verdict):
            transcript.verdict = move
            break
        answer, discl = adversary.respond(move)
        transcript.add_round(move, answer, discl)
        if cfg.trace:
            trace.append(_trace_row(adversary, transcript))
    else:
        raise InputError("round limit exceeded without a verdict; "
                         "the instance may be unsolvable")
    kn = knowledge_for(transcript)
    transcript.final_coloring = kn.witness()
    audit = audit_any(transcript)
    cert_ok = cert_bound = None
    if cfg.adversary == "paper":
        if cfg.model == GM:
            cert = gm_adversary.lower_bound_certificate(
                adversary.state.ledger, cfg.n)
        else:
            cert = cm_adversary.cm_lower_bound_certificate(
                transcript, cfg.n, cfg.k)
        cert_ok, cert_bound = cert.ok, cert.implied_bound
    return MatchReport(transcript=transcript, rounds=len(transcript.rounds),
                       audit=audit, certificate_ok=cert_ok,
                       certificate_bound=cert_bound, trace=trace)


def _trace_row(adversary, transcript: Transcript) -> dict:
    row = {"round": len(transcript.rounds)}
    state = getattr(adversary, "state", None)
    if isinstance(state, gm_adversary.GmAdversaryState):
        cls = state.classes()
        row.update({
            "red": sorted(state.red),
            "blue": sorted(state.blue),
            "case": state.case_trace[-1],
            "step": dataclasses.astuple(state.ledger[-1]),
            "phase": state.phase,
            "inert": len(cls.q0),
            "parts_red": [sorted(p) for _, p in cls.qr],
            "parts_blue": [sorted(p) for _, p in cls.qb],
        })
    elif isinstance(state, cm_adversary.CmAdversaryState):
        row.update({
            "red": sorted(state.red),
            "blue": sorted(state.blue),
            "imbalance": state.g,
            "open": [list(r.balls) for r in state.queries if r.open],
        })
    return row


# ---------------------------------------------------------------------------
# fuzz driver
# ---------------------------------------------------------------------------

@dataclasses.dataclass
class FuzzReport:
    matches: int
    passed: int
    invariant_violations: list[str]
    audit_violations: list[str]
    certificate_violations: list[str]
    shortest_failing: Optional[Transcript]

    @property
    def ok(self) -> bool:
        return not (self.invariant_violations or self.audit_violations)

    def summary(self) -> str:
        lines = [
            f"matches:                {self.matches}",
            f"passed:                 {self.passed}",
            f"invariant violations:   {len(self.invariant_violations)}",
            f"audit violations:       {len(self.audit_violations)}",
            f"certificate violations: {len(self.certificate_violations)}",
        ]
        for v in (self.invariant_violations + self.audit_violations)[:10]:
            lines.append(f"  {v}")
        return "\n".join(lines)


def fuzz(model: str, n_range, k_range, matches: int, seed: int,
         audit_cap: int = 14) -> FuzzReport:
    """Randomized matches vs the reference adversary, invariants asserted.

    Every round re-checks the structural invariants of the adversary in
    play; transcripts are audited (by enumeration up to audit_cap balls,
    by the product form above). Certificate misses are tallied separately
    since the advertised round floor is not always achieved.
    """
    rng = random.Random(seed)
    n_lo, n_hi = min(n_range), max(n_range)
    k_lo, k_hi = min(k_range), max(k_range)
    inv_v: list[str] = []
    audit_v: list[str] = []
    cert_v: list[str] = []
    shortest: Optional[Transcript] = None
    passed = 0
    for mi in range(matches):
        n = rng.randint(n_lo, n_hi)
        k = rng.randint(k_lo, min(k_hi, n))
        if k < 3:
            k = 3
        cfg_tag = f"match {mi} ({model}, n={n}, k={k})"
        transcript = Transcript(model, n, k)
        if model == GM:
            adv = PaperGmAdversary(n, k)
        else:
            adv = PaperCmAdversary(n, k)
        questioner = RandomQuestioner(n, k, rng.randrange(1 << 30), model)
        bad = False
        for _ in range(4 * n + 60):
            move = questioner.next_move(transcript)
            if isinstance(move, Verdict):
                transcript.verdict = move
                break
            answer, discl = adv.respond(move)
            transcript.add_round(move, answer, discl)
            if model == GM:
                viol = gm_adversary.check_lemma_invariants(adv.state)
                if not adv.state.ledger[-1].ratio_ok():
                    viol.append("step ratio above 4/3")
            else:
                viol = cm_adversary.check_cm_invariants(adv.state)
            if viol:
                inv_v.extend(f"{cfg_tag}: {v}" for v in viol)
                bad = True
                break
        if transcript.verdict is None and not bad:
            continue  # unsolvable-looking config; nothing to assert
        rep = audit_any(transcript, audit_cap)
        if not rep.ok:
            audit_v.extend(f"{cfg_tag}: {v}" for v in rep.violations)
            bad = True
        if model == GM:
            cert = gm_adversary.lower_bound_certificate(adv.state.ledger, n)
        else:
            cert = cm_adversary.cm_lower_bound_certificate(transcript, n, k)
        if transcript.verdict is not None and not cert.ok:
            cert_v.append(f"{cfg_tag}: ended in {len(transcript.rounds)} rounds, "
                          f"floor {cert.implied_bound}")
        if bad:
            if shortest is None or len(transcript.rounds) < len(shortest.rounds):
                shortest = transcript
        else:
            passed += 1
    return FuzzReport(matches=matches, passed=passed,
                      invariant_violations=inv_v, audit_violations=audit_v,
                      certificate_violations=cert_v, shortest_failing=shortest)


# ---------------------------------------------------------------------------
# interactive loop
# ---------------------------------------------------------------------------

REPL_HELP = """commands:
  q B1 B2 ...   ask a query (space-separated ball numbers)
  ball X        claim ball X belongs to the majority color
  none          claim the color classes tie
  state         show what has been disclosed so far
  help          this text
  quit          abandon the match
"""


def play_repl(cfg: MatchConfig, infile: TextIO, outfile: TextIO) -> Optional[Transcript]:
    adversary = _build_adversary(cfg)
    transcript = Transcript(cfg.model, cfg.n, cfg.k)
    out = outfile.write
    out(f"{cfg.model} match, n={cfg.n}, k={cfg.k}; 'help' lists commands\n")
    while True:
        out("> ")
        outfile.flush()
        line = infile.readline()
        if not line:
            return None
        words = line.split()
        if not words:
            continue
        cmd = words[0].lower()
        if cmd == "help":
            out(REPL_HELP)
        elif cmd == "quit":
            return None
        elif cmd == "state":
            kn = knowledge_for(transcript)
            pin = getattr(kn, "pinned", None)
            if pin is None:
                kn2 = knowledge_for(transcript)
                out(f"{len(kn2.cs)} colorings remain consistent\n")
            else:
                out(f"disclosed: {sorted((b, c.value) for b, c in pin.items())}\n")
        elif cmd == "q":
            try:
                query = tuple(int(w) for w in words[1:])
                answer, discl = adversary.respond(query)
            except (ValueError, InputError) as exc:
                out(f"bad query: {exc}\n")
                continue
            transcript.add_round(query, answer, discl)
            if isinstance(answer, GmResponse):
                out("yes\n" if answer is GmResponse.SAME else "no\n")
            else:
                out(f"{answer}\n")
            for ball, color in discl:
                out(f"  ball {ball} is {color.value}\n")
        elif cmd in ("ball", "none"):
            try:
                verdict = (Verdict.majority_ball(int(words[1]))
                           if cmd == "ball" else Verdict.no_majority())
            except (IndexError, ValueError):
                out("usage: ball X | none\n")
                continue
            refutation = _refute(adversary, transcript, verdict)
            if refutation is not None:
                out("not yet: consistent coloring "
                    f"{refutation.to_string()} defeats that claim\n")
                continue
            transcript.verdict = verdict
            transcript.final_coloring = knowledge_for(transcript).witness()
            rep = audit_any(transcript)
            out(f"accepted after {len(transcript.rounds)} rounds; "
                f"audit {'clean' if rep.ok else 'FAILED'}\n")
            return transcript
        else:
            out("unknown command; 'help' lists commands\n")


def _refute(adversary, transcript: Transcript, verdict: Verdict) -> Optional[Coloring]:
    if isinstance(adversary, PaperCmAdversary):
        return cm_adversary.refute_verdict(adversary.state, verdict)
    if isinstance(adversary, OptimalAdversary):
        return adversary.refute(verdict)
    return knowledge_for(transcript).refute(verdict)
