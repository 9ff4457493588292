"""Structured knowledge engine vs brute-force enumeration.

Random transcripts are generated in the disclosure shape both reference
adversaries produce (pinned balls, hung-out parts, stars, count queries
with disjoint unknown parts) and the product-form engine must agree with
enumeration on forced verdicts, witnesses and refutations.
"""

import random

import pytest

from majlab.core import (
    CM,
    GM,
    Color,
    GmResponse,
    Transcript,
    Verdict,
    consistent_set,
    forced_verdict,
)
from majlab.knowledge import EnumKnowledge, StructuredKnowledge, knowledge_for


def gm_shaped_transcript(rng: random.Random, n: int) -> Transcript:
    """Random transcript in the factored shape: pins, parts, stars."""
    t = Transcript(GM, n, 3)
    balls = list(range(1, n + 1))
    rng.shuffle(balls)
    pool = balls[:]
    red: list[int] = []
    blue: list[int] = []

    def take(k):
        nonlocal pool
        got, pool = pool[:k], pool[k:]
        return got

    # some disclosed balls via a retired query
    r = take(1)
    b = take(1)
    if r and b:
        red += r
        blue += b
        t.add_round(tuple(sorted(r + b + take(1))) if pool else tuple(sorted(r + b)),
                    GmResponse.MIXED, [(r[0], Color.RED), (b[0], Color.BLUE)])
    # a part hanging off a blue anchor
    if len(pool) >= 2 and blue:
        part = take(2)
        t.add_round(tuple(sorted([blue[0]] + part)), GmResponse.MIXED, [])
    # a star with two legs
    if len(pool) >= 5:
        center = take(1)[0]
        leg1 = take(2)
        leg2 = take(2)
        t.add_round(tuple(sorted([center] + leg1)), GmResponse.MIXED, [])
        t.add_round(tuple(sorted([center] + leg2)), GmResponse.MIXED, [])
    # a fully pinned monochromatic query
    if len(red) >= 1:
        extra = take(1)
        if extra:
            red += extra
            t.add_round(tuple(sorted([red[0], extra[0]])), GmResponse.SAME,
                        [(extra[0], Color.RED)])
    return t


def cm_shaped_transcript(rng: random.Random, n: int, k: int) -> Transcript:
    t = Transcript(CM, n, k)
    pool = list(range(1, n + 1))
    rng.shuffle(pool)
    while len(pool) >= k and rng.random() < 0.8:
        q = sorted(pool[:k])
        pool = pool[k:]
        secretish = rng.randrange(0, k // 2 + 1)
        if rng.random() < 0.5:
            # fully disclosed query
            reds = q[:secretish] if rng.random() < 0.5 else q[: k - secretish]
            discl = [(x, Color.RED if x in reds else Color.BLUE) for x in q]
            ans = min(len(reds), k - len(reds))
            t.add_round(tuple(q), ans, discl)
        else:
            # open query: nothing disclosed, answer leaves two completions
            t.add_round(tuple(q), secretish, [])
    return t


@pytest.mark.parametrize("seed", range(40))
def test_gm_structured_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randrange(6, 13)
    t = gm_shaped_transcript(rng, n)
    cs = consistent_set(t)
    kn = StructuredKnowledge.from_transcript(t)

    assert kn.forced_verdict() == forced_verdict(cs)

    w = kn.witness()
    assert w is not None and w in cs
    # witness minimizing red really hits the enumeration minimum
    assert w.red_count() == min(c.red_count() for c in cs.members())

    for verdict in [Verdict.no_majority()] + [Verdict.majority_ball(x)
                                              for x in range(1, n + 1)]:
        ref = kn.refute(verdict)
        brute_exists = any(not verdict.valid_in(c) for c in cs.members())
        assert (ref is not None) == brute_exists
        if ref is not None:
            assert ref in cs and not verdict.valid_in(ref)


@pytest.mark.parametrize("seed", range(40))
def test_cm_structured_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randrange(6, 13)
    k = rng.choice([3, 4, 5])
    t = cm_shaped_transcript(rng, n, k)
    cs = consistent_set(t)
    kn = StructuredKnowledge.from_transcript(t)

    assert kn.forced_verdict() == forced_verdict(cs)
    w = kn.witness()
    assert w is not None and w in cs
    assert w.red_count() == min(c.red_count() for c in cs.members())

    for verdict in [Verdict.no_majority()] + [Verdict.majority_ball(x)
                                              for x in range(1, n + 1)]:
        ref = kn.refute(verdict)
        brute_exists = any(not verdict.valid_in(c) for c in cs.members())
        assert (ref is not None) == brute_exists
        if ref is not None:
            assert ref in cs and not verdict.valid_in(ref)


def test_engine_selection_by_cap():
    t = Transcript(GM, 5, 3)
    assert isinstance(knowledge_for(t, cap=22), EnumKnowledge)
    big = Transcript(GM, 30, 3)
    assert isinstance(knowledge_for(big, cap=22), StructuredKnowledge)


def test_structured_pin_closure_through_same_answers():
    # a "same" answer propagates a known color through the whole query,
    # including balls never explicitly disclosed
    t = Transcript(GM, 26, 3)
    t.add_round((1, 2, 3), GmResponse.MIXED, [(1, Color.BLUE), (2, Color.RED)])
    t.add_round((1, 4, 5), GmResponse.SAME, [])
    kn = StructuredKnowledge.from_transcript(t)
    kn._build()
    assert kn.pinned[4] is Color.BLUE and kn.pinned[5] is Color.BLUE
