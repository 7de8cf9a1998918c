from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linsoc import Instance, ModelError, Profile, Ranking, copeland_scores, fixture, pairwise_counts, plurality_scores
from tests.conftest import seeded_profile


def test_instance_rejects_duplicates():
    with pytest.raises(ModelError, match="duplicate candidate"):
        Instance.from_features([("a", (1,)), ("a", (2,))])
    with pytest.raises(ModelError, match="share a feature vector"):
        Instance.from_features([("a", (1, 2)), ("b", (1, 2))])
    with pytest.raises(ModelError, match="features, expected"):
        Instance.from_features([("a", (1, 2)), ("b", (1,))])


def test_features_are_exact():
    inst = Instance.from_features({"a": ("1/4", "1/3"), "b": (0, 1)})
    assert inst.feature("a") == (Fraction(1, 4), Fraction(1, 3))
    assert inst.difference("a", "b") == (Fraction(1, 4), Fraction(-2, 3))


def test_ranking_validation():
    with pytest.raises(ModelError):
        Ranking(["a", "a"])
    r = Ranking(["b", "a", "c"])
    assert r.above("b", "c") and not r.above("c", "a")
    assert r.chain() == [("b", "a"), ("a", "c")]
    assert len(r.pairs()) == 3


def test_profile_rejects_infeasible_voter():
    fx = fixture("pmc-infeasible")
    with pytest.raises(ModelError, match="infeasible"):
        Profile.from_rankings(fx.instance, [["a*", "c1+", "c2+", "c3+", "c3-", "c2-", "c1-"]])


def test_profile_requires_voters():
    inst = Instance.from_features({"a": (1,), "b": (2,)})
    with pytest.raises(ModelError):
        Profile(inst, ())


def test_pmc_fixture_counts():
    p = fixture("pmc-infeasible").profile
    assert pairwise_counts(p).count("a*", "c1+") == 2
    assert plurality_scores(p) == {"a*": 0, "c1+": 1, "c2+": 1, "c3+": 1, "c1-": 0, "c2-": 0, "c3-": 0}


def test_single_voter_scores():
    p = seeded_profile(5, n=(1,))
    r = p.rankings[0]
    stats = pairwise_counts(p)
    for a, b in r.pairs():
        assert stats.count(a, b) == 1 and stats.count(b, a) == 0
    scores = copeland_scores(p)
    assert [scores[c] for c in r] == list(range(len(r) - 1, -1, -1))


def test_even_ties_beat_nobody():
    inst = Instance.from_features({"a": (1,), "b": (-1,)})
    p = Profile.from_rankings(inst, [["a", "b"], ["b", "a"]])
    assert copeland_scores(p) == {"a": 0, "b": 0}
    assert pairwise_counts(p).majority_graph() == {frozenset("ab"): None}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_pairwise_invariants(seed):
    p = seeded_profile(seed)
    stats = pairwise_counts(p)
    ids = p.instance.ids
    for a in ids:
        for b in ids:
            if a != b:
                assert stats.count(a, b) + stats.count(b, a) == p.n
    assert sum(plurality_scores(p).values()) == p.n
    assert all(0 <= s <= len(ids) - 1 for s in copeland_scores(p).values())
    # reordering voters changes nothing
    flipped = Profile.from_rankings(p.instance, p.rankings[::-1])
    assert pairwise_counts(flipped).counts == stats.counts
