"""Acceptance criteria 1-9, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

import random
import sys
from fractions import Fraction

import numpy as np
import pytest

from linsoc import (
    Profile,
    Ranking,
    check_majority_consistency,
    check_pareto,
    check_pmc,
    check_separability,
    check_winner_monotonicity,
    copeland_ranking,
    copeland_scores,
    enumerate_feasible_rankings,
    find_separating_theta,
    fixture,
    gen_profile,
    induced_ranking,
    is_feasible,
    kemeny_score,
    lcpo,
    leximax_copeland,
    leximax_plurality,
    linear_kemeny,
    linear_kemeny_po,
    loss_rule,
    pareto_pairs,
    plurality_scores,
    pmc_ranking,
    verify_certificate,
)
from linsoc.axioms import PASS, VACUOUS, VIOLATION, rule_output
from linsoc.fixtures import LOSS_CTREX_DEFAULT, c1po_majority_graph, kemeny_group_order
from linsoc.losses import MAJORITY
from linsoc.model import pairwise_counts


def random_profile(seed, m, d, n):
    rng = random.Random(seed)
    return gen_profile(seed, rng.randint(*m), rng.randint(*d), rng.choice(n))


# -- 1 ----------------------------------------------------------------------


@pytest.mark.criterion(1)
def test_pmc_ranking_infeasible_with_certificate():
    fx = fixture("pmc-infeasible")
    ranking, feasible = pmc_ranking(fx.profile)
    assert list(ranking) == ["a*", "c1+", "c2+", "c3+", "c3-", "c2-", "c1-"]
    assert feasible is False
    assert is_feasible(fx.instance, ranking) == (False, None)
    sep = find_separating_theta(fx.instance, ranking.chain())
    assert sep.certificate and verify_certificate(fx.instance, sep.certificate)
    assert all(isinstance(y, Fraction) for y in sep.certificate.values())


# -- 2 ----------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_copeland_scores_and_lcpo_separability():
    parts = fixture("copeland-sep-AB").profiles
    assert tuple(copeland_scores(parts["A"])[c] for c in "abcdefg") == (5, 4, 3, 3, 3, 2, 1)
    assert tuple(copeland_scores(parts["B"])[c] for c in "abcdefg") == (6, 5, 3, 3, 3, 1, 0)
    both = copeland_scores(parts["AB"])
    assert (both["a"], both["b"]) == (5, 6)
    rep = check_separability(lcpo, parts["A"], parts["B"])
    assert rep.verdict == VIOLATION
    assert ("a", "b") in rep.witnesses


# -- 3 ----------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_c1_rules_fail_pareto():
    fx = fixture("c1-po")
    sep = find_separating_theta(fx.instance, [("c*", c) for c in fx.instance.ids if c != "c*"])
    assert not sep.feasible and verify_certificate(fx.instance, sep.certificate)
    graph = c1po_majority_graph()
    assert len(fx.profiles) == 4
    assert all(pairwise_counts(p).majority_graph() == graph for p in fx.profiles.values())
    outputs = {col: leximax_copeland(p).output for col, p in fx.profiles.items()}
    out = outputs["c1+"]
    assert all(o == out for o in outputs.values())
    top = out[0]
    rep = check_pareto(fx.profiles[top], out)
    assert rep.verdict == VIOLATION and ("c*", top) in rep.witnesses
    for p in fx.profiles.values():
        assert check_pareto(p, lcpo(p).output).verdict == PASS


# -- 4 ----------------------------------------------------------------------


def ctrex_triples():
    ps = sorted({Fraction(k, q) for q in range(2, 21) for k in range(1, q) if Fraction(1, 2) < Fraction(k, q) < 1},
                key=lambda f: (f.denominator, f.numerator))
    for p in ps:
        for j in range(3, 11):
            for delta in (Fraction(1, 4), Fraction(1, 2)):
                yield p, Fraction(1, 2 ** j), delta


def ctrex_search(loss):
    """First triple in search order where the standard loss rule flips c' > c."""
    for p, eps, delta in ctrex_triples():
        prof = fixture("loss-ctrex", p=p, eps=eps, delta=delta, loss=loss).profile
        res = loss_rule(prof, loss)
        if not res.ranking.above("c", "c'"):
            continue
        low = min(res.infima.values())
        alt = min(v for r, v in res.infima.items() if r.above("c'", "c"))
        if alt - low < 1e-4:
            continue
        return (p, eps, delta), prof, res, alt - low
    return None


@pytest.mark.criterion(4)
@pytest.mark.parametrize("loss", ["bce", "squared"])
def test_loss_rule_counterexample(loss):
    found = ctrex_search(loss)
    assert found is not None, "no triple in the search grid"
    triple, prof, res, gap = found
    assert triple == LOSS_CTREX_DEFAULT
    assert gap >= 1e-4
    # every voter ranks c' above c, so the flip is a Pareto violation
    assert ("c'", "c") in pareto_pairs(prof)
    po = check_pareto(prof, res.ranking)
    assert po.verdict == VIOLATION and ("c'", "c") in po.witnesses
    pmc = check_pmc(lambda q: res.ranking if q is prof else loss_rule(q, loss).ranking, prof)
    assert pmc.verdict == VIOLATION
    print(f"{loss}: p={triple[0]} eps={triple[1]} delta={triple[2]} gap={gap:.6g}")


# -- 5 ----------------------------------------------------------------------


@pytest.fixture(scope="module")
def pmc_profiles():
    out = []
    for seed in range(200):
        p = random_profile(seed, (2, 5), (1, 3), (3, 5, 7))
        found = pmc_ranking(p)
        if found is not None and found[1]:
            out.append((seed, p, found[0]))
    return out


SQUARED_REASON = "squared loss is not nondecreasing, so the PMC guarantee does not cover it"


@pytest.mark.criterion(5)
@pytest.mark.parametrize(
    "loss",
    ["bce", "hinge", "exponential", pytest.param("squared", marks=pytest.mark.xfail(strict=True, reason=SQUARED_REASON))],
)
def test_majority_loss_returns_pmc(pmc_profiles, loss):
    assert len(pmc_profiles) >= 100
    misses = [seed for seed, p, target in pmc_profiles if loss_rule(p, loss, MAJORITY).ranking != target]
    assert not misses, f"{len(misses)}/{len(pmc_profiles)} profiles miss the PMC ranking: seeds {misses}"


# -- 6 ----------------------------------------------------------------------


@pytest.mark.criterion(6)
def test_lcpo_axioms_random():
    copeland_feasible = 0
    for seed in range(500):
        p = random_profile(10_000 + seed, (2, 6), (1, 3), (3, 4, 5, 6, 7))
        out = lcpo(p).output
        assert check_pareto(p, out).verdict == PASS, seed
        assert check_pmc(lcpo, p).verdict in (PASS, VACUOUS), seed
        assert check_majority_consistency(lcpo, p).verdict in (PASS, VACUOUS), seed
        assert check_winner_monotonicity(lcpo, p).verdict != VIOLATION, seed
        target = copeland_ranking(p)
        if is_feasible(p.instance, target)[0]:
            copeland_feasible += 1
            assert out == target, seed
    assert copeland_feasible > 0


# -- 7 ----------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_kemeny_20_counterexample():
    fx = fixture("kemeny-20")
    p = fx.profile
    assert p.n == 6 and all(r.above("1", "2") for r in p.rankings)
    order = kemeny_group_order()

    def rule(q):
        return linear_kemeny(q, order)

    out = rule(p).ranking
    assert out.above("2", "1")
    po = check_pareto(p, out)
    assert po.verdict == VIOLATION and ("1", "2") in po.witnesses
    mc = check_majority_consistency(rule, p)
    assert mc.verdict == VIOLATION and mc.witnesses == (("1", "2"),)


@pytest.mark.criterion(7)
def test_kemeny_po_pair_counterexample():
    fx = fixture("kemeny-po-pair")
    first, second = fx.profiles["first"], fx.profiles["second"]
    order = kemeny_group_order()
    priority = (first.rankings[0],)

    def rule(q):
        return linear_kemeny_po(q, order, tie_break=priority)

    assert rule(first).ranking in first.rankings
    assert rule(second).ranking in second.rankings
    combined = rule(first.combine(second)).ranking
    assert combined.above("2", "1")
    rep = check_separability(rule, first, second)
    assert rep.verdict == VIOLATION and ("1", "2") in rep.witnesses


# -- 8 ----------------------------------------------------------------------


def coinciding_pairs(rule, count, base_seed):
    """Pairs (p1, p2) on one instance with equal outputs.

    p1 is a random profile; p2 mixes fresh voters with copies of rule(p1),
    which makes coinciding outputs common; pairs that still differ are dropped.
    """
    pairs = []
    seed = base_seed
    while len(pairs) < count:
        seed += 1
        rng = random.Random(seed)
        base = gen_profile(seed, rng.randint(2, 5), rng.randint(1, 3), rng.randint(4, 9))
        k = rng.randint(1, base.n - 1)
        p1 = Profile.from_rankings(base.instance, base.rankings[:k])
        out = rule_output(rule(p1))
        p2 = Profile.from_rankings(base.instance, base.rankings[k:] + [out] * rng.randint(1, 3), prefix="w")
        if rule_output(rule(p2)) == out:
            pairs.append((p1, p2))
    return pairs


@pytest.mark.criterion(8)
@pytest.mark.parametrize("rule", [linear_kemeny, leximax_plurality], ids=["kemeny", "leximax-plurality"])
def test_separability_random(rule):
    for p1, p2 in coinciding_pairs(rule, 100, 20_000):
        rep = check_separability(rule, p1, p2)
        assert rep.verdict == PASS, rep


@pytest.mark.criterion(8)
def test_leximax_plurality_majority_and_monotonicity():
    for seed in range(500):
        p = random_profile(30_000 + seed, (2, 6), (1, 3), (3, 4, 5, 6, 7))
        assert check_majority_consistency(leximax_plurality, p).verdict in (PASS, VACUOUS), seed
        assert check_winner_monotonicity(leximax_plurality, p).verdict != VIOLATION, seed


# -- 9 ----------------------------------------------------------------------


def brute_leximax(family, scores):
    return min(family, key=lambda r: tuple((-scores[c], c) for c in r))


def double_loop_kemeny(ranking, profile):
    total = 0
    for voter in profile.rankings:
        for a in voter:
            for b in voter:
                if voter.position(a) < voter.position(b) and ranking.index(b) < ranking.index(a):
                    total += 1
    return total


@pytest.fixture(scope="module")
def oracle_profiles():
    return [random_profile(40_000 + s, (2, 5), (1, 3), (3, 5, 7)) for s in range(100)]


@pytest.mark.criterion(9)
def test_enumeration_matches_sampling(oracle_profiles):
    rng = np.random.default_rng(2024)
    for p in oracle_profiles:
        inst = p.instance
        family = enumerate_feasible_rankings(inst)
        for r, theta in family.items():
            assert induced_ranking(inst, theta) == r
        X = np.array([[float(v) for v in inst.feature(c)] for c in inst.ids])
        thetas = rng.standard_normal((inst.dimension, 100_000))
        order = np.argsort(-(X @ thetas), axis=0, kind="stable").T
        codes, first = np.unique(order, axis=0, return_index=True)
        for row, j in zip(codes, first):
            # confirm each sampled ranking with exact rational rewards at its sample
            exact = induced_ranking(inst, [Fraction(float(t)) for t in thetas[:, j]])
            assert Ranking(inst.ids[i] for i in row) == exact
            assert exact in family


@pytest.mark.criterion(9)
def test_leximax_matches_brute_force(oracle_profiles):
    for p in oracle_profiles:
        family = list(enumerate_feasible_rankings(p.instance))
        assert leximax_copeland(p).output == brute_leximax(family, copeland_scores(p))
        assert leximax_plurality(p).output == brute_leximax(family, plurality_scores(p))
        po = pareto_pairs(p)
        kept = [r for r in family if all(r.above(a, b) for a, b in po)]
        assert lcpo(p).output == brute_leximax(kept, copeland_scores(p))


@pytest.mark.criterion(9)
def test_kemeny_score_matches_double_loop(oracle_profiles):
    for p in oracle_profiles:
        family = list(enumerate_feasible_rankings(p.instance))
        for r in family:
            assert kemeny_score(r, p) == double_loop_kemeny(r, p)
        best = linear_kemeny(p)
        assert best.value == min(double_loop_kemeny(r, p) for r in family)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
