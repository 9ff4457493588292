"""Core model tests: answer semantics, consistency, forced verdicts, audit.

Derived expectations are recomputed here with a deliberately naive
pure-Python enumeration so the packed/vectorized implementation is checked
against an independent path.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majlab.core import (
    CM,
    GM,
    Color,
    Coloring,
    GmResponse,
    InputError,
    LogicError,
    Transcript,
    Verdict,
    audit_transcript,
    cm_answer_of,
    consistent_set,
    forced_verdict,
    gm_answer_of,
    majority_verdict_set,
)


def naive_consistent(transcript):
    """Independent oracle: enumerate colorings as strings, check each round."""
    out = []
    for bits in itertools.product("RB", repeat=transcript.n):
        c = Coloring.from_string("".join(bits))
        ok = True
        for r in transcript.rounds:
            if transcript.model == GM:
                if gm_answer_of(r.query, c) is not r.answer:
                    ok = False
                    break
            else:
                if cm_answer_of(r.query, c) != r.answer:
                    ok = False
                    break
            for ball, color in r.disclosures:
                if c.color_of(ball) is not color:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(c)
    return out


def test_gm_answer_trivial():
    c = Coloring.from_string("RRRBB")
    assert gm_answer_of((1, 2, 3), c) is GmResponse.SAME
    assert gm_answer_of((1, 2, 4), c) is GmResponse.MIXED
    assert gm_answer_of((1, 4), c) is GmResponse.MIXED
    assert gm_answer_of((4, 5), c) is GmResponse.SAME


def test_gm_answer_rejects_bad_balls():
    c = Coloring.from_string("RRB")
    with pytest.raises(InputError):
        gm_answer_of((1, 4), c)
    with pytest.raises(InputError):
        gm_answer_of((0, 1), c)


def test_cm_answer_trivial():
    assert cm_answer_of((1, 2, 3, 4), Coloring.from_string("RBBB")) == 1
    assert cm_answer_of((1, 2, 3, 4), Coloring.from_string("RRRR")) == 0
    assert cm_answer_of((1, 2, 3, 4, 5, 6), Coloring.from_string("RRRBBB")) == 3
    with pytest.raises(InputError):
        cm_answer_of((1,), Coloring.from_string("RB"))


def test_majority_verdict_set():
    assert majority_verdict_set(Coloring.from_string("RRB")) == {
        Verdict.majority_ball(1), Verdict.majority_ball(2)}
    assert majority_verdict_set(Coloring.from_string("RRBB")) == {
        Verdict.no_majority()}
    assert majority_verdict_set(Coloring.from_string("RRRBB")) == {
        Verdict.majority_ball(1), Verdict.majority_ball(2), Verdict.majority_ball(3)}


def test_consistent_set_trivial():
    t = Transcript(GM, 2, 2)
    assert len(consistent_set(t)) == 4
    t.add_round((1, 2), GmResponse.SAME)
    cs = consistent_set(t)
    assert {c.to_string() for c in cs.members()} == {"RR", "BB"}


def test_consistent_set_matches_naive_oracle():
    t = Transcript(GM, 4, 3)
    t.add_round((1, 2, 3), GmResponse.MIXED)
    t.add_round((2, 3, 4), GmResponse.MIXED, [(4, Color.BLUE)])
    got = {c.to_string() for c in consistent_set(t).members()}
    want = {c.to_string() for c in naive_consistent(t)}
    assert got == want

    t2 = Transcript(CM, 5, 3)
    t2.add_round((1, 2, 3), 1)
    t2.add_round((3, 4, 5), 0, [(3, Color.RED)])
    got2 = {c.to_string() for c in consistent_set(t2).members()}
    want2 = {c.to_string() for c in naive_consistent(t2)}
    assert got2 == want2


def test_forced_verdict_prefers_lowest_ball():
    # {RRB, RBR}: majority classes {1,2} and {1,3} share ball 1.
    import numpy as np
    cs = consistent_set(Transcript(GM, 3, 2))
    cs.codes = np.array(sorted([_code("RRB"), _code("RBR")]), dtype=np.uint32)
    assert forced_verdict(cs) == Verdict.majority_ball(1)


def _code(s):
    return Coloring.from_string(s).red_mask


def test_forced_verdict_swapped_pair_shares_majority_ball():
    # {RRB, BBR}: both have majority ball set {1,2}; colors differ but the
    # verdict names a ball, so MajorityBall(1) is valid in both. (Two
    # majority classes of size > n/2 always intersect, so two colorings can
    # only have disjoint verdict sets when exactly one of them is a tie.)
    import numpy as np
    cs = consistent_set(Transcript(GM, 3, 2))
    cs.codes = np.array(sorted([_code("RRB"), _code("BBR")]), dtype=np.uint32)
    assert forced_verdict(cs) == Verdict.majority_ball(1)


def test_forced_verdict_singleton_and_mixed_tie():
    import numpy as np
    cs = consistent_set(Transcript(GM, 4, 2))
    cs.codes = np.array([_code("RRRR")], dtype=np.uint32)
    assert forced_verdict(cs) == Verdict.majority_ball(1)
    # one tie and one non-tie: no common verdict
    cs.codes = np.array(sorted([_code("RRBB"), _code("RRRB")]), dtype=np.uint32)
    assert forced_verdict(cs) is None
    # all ties
    cs.codes = np.array(sorted([_code("RRBB"), _code("RBRB")]), dtype=np.uint32)
    assert forced_verdict(cs) == Verdict.no_majority()


def test_forced_verdict_empty_set_is_logic_error():
    import numpy as np
    cs = consistent_set(Transcript(GM, 2, 2))
    cs.codes = np.array([], dtype=np.uint32)
    with pytest.raises(LogicError):
        forced_verdict(cs)


def test_forced_verdict_reverifies_against_members():
    # property: when a verdict is returned it is valid in every member
    import numpy as np
    rng = np.random.default_rng(7)
    for n in (3, 4, 5, 6):
        full = consistent_set(Transcript(GM, n, 2))
        for _ in range(50):
            size = int(rng.integers(1, min(10, len(full.codes))))
            codes = rng.choice(full.codes, size=size, replace=False)
            full2 = consistent_set(Transcript(GM, n, 2))
            full2.codes = np.unique(codes)
            v = forced_verdict(full2)
            if v is not None:
                assert all(v.valid_in(c) for c in full2.members())


def test_audit_clean_and_contradiction():
    t = Transcript(GM, 3, 3)
    t.add_round((1, 2, 3), GmResponse.MIXED)
    assert audit_transcript(t).ok

    bad = Transcript(GM, 3, 3)
    bad.add_round((1, 2, 3), GmResponse.SAME)
    bad.add_round((1, 2, 3), GmResponse.MIXED)
    rep = audit_transcript(bad)
    assert not rep.ok and not rep.prefix_consistent


def test_audit_flags_bad_verdict_and_disclosure():
    t = Transcript(GM, 4, 2)
    t.add_round((1, 2), GmResponse.SAME)
    t.verdict = Verdict.majority_ball(1)  # 1's class could be a tie or minority
    rep = audit_transcript(t)
    assert rep.verdict_valid is False

    t2 = Transcript(GM, 3, 3)
    t2.add_round((1, 2, 3), GmResponse.SAME, [(1, Color.RED)])
    t2.add_round((1, 2, 3), GmResponse.SAME, [(2, Color.BLUE)])
    rep2 = audit_transcript(t2)
    assert not rep2.disclosures_sound


def test_audit_checks_final_coloring():
    t = Transcript(GM, 3, 3)
    t.add_round((1, 2, 3), GmResponse.SAME)
    t.final_coloring = Coloring.from_string("RRB")
    assert not audit_transcript(t).ok
    t.final_coloring = Coloring.from_string("RRR")
    assert audit_transcript(t).ok


def test_transcript_json_roundtrip():
    t = Transcript(GM, 5, 3)
    t.add_round((1, 2, 3), GmResponse.MIXED, [(2, Color.BLUE)])
    t.verdict = Verdict.majority_ball(4)
    t.final_coloring = Coloring.from_string("RBRRR")
    s = t.to_json_str()
    back = Transcript.from_json_str(s)
    assert back.to_json() == t.to_json()

    t2 = Transcript(CM, 4, 4)
    t2.add_round((1, 2, 3, 4), 2)
    t2.verdict = Verdict.no_majority()
    assert Transcript.from_json_str(t2.to_json_str()).to_json() == t2.to_json()


@given(st.integers(2, 8), st.data())
@settings(max_examples=60, deadline=None)
def test_gm_same_iff_cm_zero(n, data):
    mask = data.draw(st.integers(0, (1 << n) - 1))
    c = Coloring(n, mask)
    size = data.draw(st.integers(2, n))
    balls = data.draw(st.permutations(range(1, n + 1)))[:size]
    q = tuple(sorted(balls))
    assert (gm_answer_of(q, c) is GmResponse.SAME) == (cm_answer_of(q, c) == 0)
    # cm answer is invariant under the global color swap
    assert cm_answer_of(q, c) == cm_answer_of(q, c.swap())


@given(st.integers(2, 6), st.data())
@settings(max_examples=40, deadline=None)
def test_consistent_set_shrinks_monotonically(n, data):
    t = Transcript(GM, n, 2)
    rounds = data.draw(st.integers(1, 4))
    secret = Coloring(n, data.draw(st.integers(0, (1 << n) - 1)))
    prev = len(consistent_set(t))
    for _ in range(rounds):
        size = data.draw(st.integers(2, n))
        q = tuple(sorted(data.draw(st.permutations(range(1, n + 1)))[:size]))
        t.add_round(q, gm_answer_of(q, secret))
        cur = len(consistent_set(t))
        assert 0 < cur <= prev
        prev = cur
