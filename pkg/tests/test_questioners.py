"""Property-B machinery and questioner policies."""

import itertools

import pytest

from majlab.core import GM, CapacityError, InputError, Transcript, Verdict
from majlab.harness import MatchConfig, run_match
from majlab.questioners import (
    FANO_LINES,
    GreedyQuestioner,
    Hypergraph,
    PropertyBQuestioner,
    RandomQuestioner,
    has_property_b,
    non_property_b_hypergraph,
    witness_edge_count,
)


def naive_property_b(h: Hypergraph) -> bool:
    """Independent oracle: explicit enumeration over vertex colorings."""
    for bits in itertools.product((0, 1), repeat=h.n_vertices):
        if all(len({bits[v - 1] for v in e}) == 2 for e in h.edges):
            return True
    return False


def test_triangle_lacks_property_b():
    tri = non_property_b_hypergraph(2)
    assert len(tri.edges) == 3 and tri.n_vertices == 3
    assert not has_property_b(tri)
    assert not naive_property_b(tri)


def test_fano_lacks_property_b_by_exhaustion():
    fano = non_property_b_hypergraph(3)
    assert len(fano.edges) == 7 and fano.n_vertices == 7
    assert not naive_property_b(fano)  # all 2^7 colorings checked
    assert not has_property_b(fano)


def test_single_edge_has_property_b():
    assert has_property_b(Hypergraph(3, ((1, 2, 3),)))


def test_pigeonhole_construction():
    h4 = non_property_b_hypergraph(4)
    assert h4.n_vertices == 7 and len(h4.edges) == 35
    assert not has_property_b(h4)
    for k in (2, 3, 4, 5, 6):
        assert not has_property_b(non_property_b_hypergraph(k))


def test_exhaustive_minimality_of_small_witnesses():
    # no two-edge 2-uniform hypergraph forces a monochromatic edge
    for e1 in itertools.combinations(range(1, 5), 2):
        for e2 in itertools.combinations(range(1, 5), 2):
            if e1 != e2:
                assert has_property_b(Hypergraph(4, (e1, e2)))


def test_witness_edge_counts():
    assert witness_edge_count(2) == 3
    assert witness_edge_count(3) == 7
    assert witness_edge_count(4) == 35
    assert witness_edge_count(5) == 126


def test_hypergraph_file_roundtrip(tmp_path):
    h = non_property_b_hypergraph(3)
    text = h.to_file_text()
    assert text.splitlines()[0] == "3 7 7"
    back = Hypergraph.from_file_text(text)
    assert back == h
    with pytest.raises(InputError):
        Hypergraph.from_file_text("3 7\n1 2 3\n")


def test_property_b_questioner_bound_vs_paper_adversary():
    for n in (7, 10, 14):
        rep = run_match(MatchConfig(GM, n, 3, "paper", "property-b"))
        assert rep.rounds <= n - 3 + 7
        assert rep.audit.ok
        assert rep.transcript.verdict is not None


def test_property_b_questioner_loads_external_witness():
    fano = Hypergraph(7, FANO_LINES)
    q = PropertyBQuestioner(10, 3, witness=fano)
    assert q.max_rounds == 7 + 7
    with pytest.raises(InputError):
        PropertyBQuestioner(5, 3)  # not enough balls for the witness


def test_property_b_needs_gm():
    q = PropertyBQuestioner(9, 3)
    with pytest.raises(InputError):
        q.next_move(Transcript("cm", 9, 3))


def test_random_questioner_determinism():
    a = RandomQuestioner(10, 3, seed=5)
    b = RandomQuestioner(10, 3, seed=5)
    t = Transcript(GM, 10, 3)
    assert [a.next_move(t) for _ in range(5)] == [b.next_move(t) for _ in range(5)]


def test_greedy_first_query_is_lexicographic():
    g = GreedyQuestioner(3, 2)
    assert g.next_move(Transcript(GM, 3, 2)) == (1, 2)


def test_greedy_respects_enumeration_cap():
    with pytest.raises(CapacityError):
        GreedyQuestioner(40, 3)


def test_greedy_vs_optimal_matches_game_value():
    # pairing games where greedy play achieves the exact value
    rep = run_match(MatchConfig(GM, 4, 2, "optimal", "greedy"))
    assert rep.rounds == 3
    rep = run_match(MatchConfig(GM, 5, 2, "optimal", "greedy"))
    assert rep.rounds == 3


def test_questioners_never_claim_early():
    # a verdict emitted by random/greedy play must survive the audit
    for seed in range(5):
        rep = run_match(MatchConfig(GM, 8, 3, "paper", "random", seed=seed))
        assert rep.audit.verdict_valid
    rep = run_match(MatchConfig("cm", 9, 3, "paper", "greedy"))
    assert rep.audit.verdict_valid
