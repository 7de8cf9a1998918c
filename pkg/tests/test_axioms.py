import pytest

from linsoc import (
    AxiomReport,
    Instance,
    ModelError,
    Profile,
    Ranking,
    check_majority_consistency,
    check_pareto,
    check_pmc,
    check_separability,
    check_winner_monotonicity,
    copeland_ranking,
    fixture,
    lcpo,
    leximax_copeland,
    leximax_plurality,
    pmc_ranking,
)
from linsoc.axioms import PASS, VACUOUS, VIOLATION, elevate, majority_winner


def test_violation_needs_witness():
    with pytest.raises(ValueError):
        AxiomReport("pareto", VIOLATION)


def test_elevate():
    r = Ranking(["a", "b", "c", "d"])
    assert list(elevate(r, "c", 2)) == ["c", "a", "b", "d"]
    with pytest.raises(ModelError):
        elevate(r, "a", 1)


class TestPareto:
    def test_pass_and_violation(self, two_candidates):
        _, p = two_candidates
        assert check_pareto(p, ["a", "b"]).verdict == PASS
        rep = check_pareto(p, ["b", "a"])
        assert rep.verdict == VIOLATION and rep.witnesses == (("a", "b"),)

    def test_c1_po_violation(self):
        fx = fixture("c1-po")
        out = leximax_copeland(fx.profile).output
        # the violation shows on the profile whose column candidate tops the output
        rep = check_pareto(fx.profiles[out[0]], out)
        assert ("c*", out[0]) in rep.witnesses
        for prof in fx.profiles.values():
            assert check_pareto(prof, lcpo(prof).output).verdict == PASS


class TestPMC:
    def test_cycle_has_no_pmc(self, cycle_profile):
        assert pmc_ranking(cycle_profile) is None
        assert check_pmc(leximax_copeland, cycle_profile).verdict == VACUOUS

    def test_infeasible_pmc_is_vacuous(self):
        p = fixture("pmc-infeasible").profile
        ranking, feasible = pmc_ranking(p)
        assert list(ranking) == ["a*", "c1+", "c2+", "c3+", "c3-", "c2-", "c1-"] and not feasible
        assert check_pmc(lcpo, p).details["reason"] == "PMC ranking infeasible"

    def test_flipped_rule_is_caught(self, two_candidates):
        _, p = two_candidates
        rep = check_pmc(lambda prof: Ranking(["b", "a"]), p)
        assert rep.verdict == VIOLATION and rep.witnesses == (("a", "b"),)


class TestMajority:
    def test_winner(self):
        inst = Instance.from_features({"a": (2,), "b": (1,), "c": (-1,)})
        p = Profile.from_rankings(inst, [["a", "b", "c"], ["a", "b", "c"], ["c", "b", "a"]])
        assert majority_winner(p) == "a"
        assert check_majority_consistency(leximax_plurality, p).verdict == PASS

    def test_kemeny_20_violation(self):
        fx = fixture("kemeny-20")
        from linsoc import linear_kemeny
        from linsoc.fixtures import kemeny_group_order

        rep = check_majority_consistency(lambda q: linear_kemeny(q, kemeny_group_order()), fx.profile)
        assert rep.verdict == VIOLATION and rep.witnesses == (("1", "2"),)


class TestMonotonicity:
    def test_no_elevation_is_vacuous(self, two_candidates):
        _, p = two_candidates
        assert check_winner_monotonicity(lcpo, p).verdict == VACUOUS

    def test_probe_runs(self, cycle_profile):
        rep = check_winner_monotonicity(leximax_copeland, cycle_profile)
        assert rep.details["elevations"] > 0
        assert rep.verdict in (PASS, VIOLATION)


class TestSeparability:
    def test_lcpo_violation(self):
        parts = fixture("copeland-sep-AB").profiles
        rep = check_separability(lcpo, parts["A"], parts["B"])
        assert rep.verdict == VIOLATION and ("a", "b") in rep.witnesses
        assert check_separability(copeland_ranking, parts["A"], parts["B"]).verdict == VIOLATION

    def test_different_outputs_vacuous(self, two_candidates):
        inst, p = two_candidates
        q = Profile.from_rankings(inst, [["b", "a"]])
        assert check_separability(lcpo, p, q).verdict == VACUOUS

    def test_instances_must_match(self, two_candidates, cycle_profile):
        with pytest.raises(ModelError):
            check_separability(lcpo, two_candidates[1], cycle_profile)
