"""Exact constructions of the instances and profiles behind the known results.

Every voter ranking that comes from a printed parameter vector is derived
with ``induced_ranking``, so the tables are reproduced rather than copied.
Each fixture carries expectations that ``verify`` re-checks mechanically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .feasibility import find_separating_theta, induced_ranking, verify_certificate
from .model import Instance, ModelError, Profile, Ranking, copeland_scores, pairwise_counts, plurality_scores


@dataclass(frozen=True)
class Expectation:
    operation: str
    expected: str
    source: str
    check: Callable[["Fixture"], tuple[bool, str]] = field(repr=False, compare=False)


@dataclass(frozen=True)
class Fixture:
    name: str
    instance: Instance
    profile: Profile | None
    profiles: dict = field(default_factory=dict, repr=False)
    params: dict = field(default_factory=dict)
    expectations: tuple[Expectation, ...] = field(default=(), repr=False)

    def verify(self) -> list[tuple[Expectation, bool, str]]:
        out = []
        for e in self.expectations:
            try:
                ok, detail = e.check(self)
            except Exception as exc:  # a crashing check is a failed expectation
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            out.append((e, bool(ok), detail))
        return out


def _profile_from_thetas(instance, thetas, names=None):
    names = names or [f"v{i + 1}" for i in range(len(thetas))]
    return Profile(instance, tuple((v, induced_ranking(instance, t)) for v, t in zip(names, thetas)))


def _unit(d, i, sign=1):
    return tuple(Fraction(sign) if j == i else Fraction(0) for j in range(d))


# -- a PMC ranking exists but no linear reward induces it ---------------------

PMC_EPS = Fraction(1, 8)
PMC_TARGET = Ranking(["a*", "c1+", "c2+", "c3+", "c3-", "c2-", "c1-"])
PMC_TABLE = {
    "v1": ["c1+", "a*", "c2+", "c3+", "c3-", "c2-", "c1-"],
    "v2": ["c2+", "a*", "c1+", "c3+", "c3-", "c1-", "c2-"],
    "v3": ["c3+", "a*", "c1+", "c2+", "c2-", "c1-", "c3-"],
}


def _pmc_infeasible(eps=PMC_EPS):
    from .axioms import pmc_ranking

    q = Fraction(1, 4)
    feats = [("a*", (q, q, q))]
    feats += [(f"c{i + 1}+", _unit(3, i)) for i in range(3)]
    feats += [(f"c{i + 1}-", _unit(3, i, -1)) for i in range(3)]
    inst = Instance.from_features(feats)
    e = Fraction(eps)
    prof = _profile_from_thetas(inst, [(1, 2 * e, e), (2 * e, 1, e), (2 * e, e, 1)])

    def table(fx):
        got = {v: list(r) for v, r in fx.profile.voters}
        return got == PMC_TABLE, f"rankings={got}"

    def pmc(fx):
        res = pmc_ranking(fx.profile)
        if res is None:
            return False, "no PMC ranking"
        ranking, feasible = res
        sep = find_separating_theta(fx.instance, ranking.chain())
        certified = sep.certificate is not None and verify_certificate(fx.instance, sep.certificate)
        ok = ranking == PMC_TARGET and not feasible and certified
        return ok, f"pmc={' > '.join(ranking)} feasible={feasible} certificate-verified={certified}"

    def plurality(fx):
        s = plurality_scores(fx.profile)
        want = {c: (1 if c.endswith("+") else 0) for c in fx.instance.ids}
        return s == want, f"scores={s}"

    def count(fx):
        k = pairwise_counts(fx.profile).count("a*", "c1+")
        return k == 2, f"n(a* > c1+)={k}"

    exp = (
        Expectation("induced_ranking", "voter rankings match the table", "pmc-infeasible voter table", table),
        Expectation("pmc_ranking", "a* > c1+ > c2+ > c3+ > c3- > c2- > c1-, infeasible, certified", "pmc-infeasible construction", pmc),
        Expectation("plurality_scores", "c1+, c2+, c3+ score 1", "pmc-infeasible voter table", plurality),
        Expectation("pairwise_counts", "n(a* > c1+) = 2", "pmc-infeasible voter table", count),
    )
    return Fixture("pmc-infeasible", inst, prof, {"main": prof}, {"eps": e}, exp)


# -- Copeland and LCPO separability failure at the unit vectors of R^7 -------

SEP_A = [
    "agdefbc",
    "bacedgf",
    "baedfgc",
    "cefgbad",
    "dcfgbea",
]
SEP_B = [
    "adbfcge",
    "baedcgf",
    "caebfgd",
]


def _sep_instance():
    return Instance.from_features([(c, _unit(7, i)) for i, c in enumerate("abcdefg")])


def _copeland_sep(which):
    from .axioms import check_separability
    from .rules_c1 import copeland_ranking, lcpo

    inst = _sep_instance()
    a = Profile.from_rankings(inst, [list(r) for r in SEP_A])
    b = Profile(inst, tuple((f"v{i + 6}", Ranking(list(r))) for i, r in enumerate(SEP_B)))
    ab = a.combine(b)
    profiles = {"A": a, "B": b, "AB": ab}
    prof = profiles[which]

    def scores(want):
        def run(fx):
            s = copeland_scores(fx.profile)
            got = tuple(s[c] for c in "abcdefg")
            return got == want, f"scores={got}"
        return run

    def ranking_abc(fx):
        r = copeland_ranking(fx.profile)
        return tuple(r) == tuple("abcdefg"), f"copeland={' > '.join(r)}"

    def combined(fx):
        s = copeland_scores(fx.profile)
        r = copeland_ranking(fx.profile)
        return s["a"] == 5 and s["b"] == 6 and r.above("b", "a"), f"a={s['a']} b={s['b']} copeland={' > '.join(r)}"

    def separability(fx):
        rep = check_separability(lcpo, fx.profiles["A"], fx.profiles["B"])
        return rep.verdict == "violation" and ("a", "b") in rep.witnesses, f"verdict={rep.verdict} witnesses={list(rep.witnesses)}"

    if which == "A":
        exp = (
            Expectation("copeland_scores", "(5, 4, 3, 3, 3, 2, 1)", "copeland separability construction", scores((5, 4, 3, 3, 3, 2, 1))),
            Expectation("copeland_ranking", "a > b > c > d > e > f > g", "copeland separability construction", ranking_abc),
        )
    elif which == "B":
        exp = (
            Expectation("copeland_scores", "(6, 5, 3, 3, 3, 1, 0)", "copeland separability construction", scores((6, 5, 3, 3, 3, 1, 0))),
            Expectation("copeland_ranking", "a > b > c > d > e > f > g", "copeland separability construction", ranking_abc),
        )
    else:
        exp = (
            Expectation("copeland_scores", "a scores 5, b scores 6, b above a", "copeland separability construction", combined),
            Expectation("check_separability(lcpo)", "violation with witness (a, b)", "copeland separability construction", separability),
        )
    return Fixture(f"copeland-sep-{which}", inst, prof, profiles, {}, exp)


# -- C1 rules fail PO: nine candidates in R^4 ------------------------------

C1PO_EPS = Fraction(1, 100)
C1PO_TABLE = {
    "c1+": [(1, (2, 1, 3, 4)), (1, (3, 1, 2, 4)), (1, (3, 2, 4, 1)), (2, (4, 1, 2, 3))],
    "c2+": [(2, (1, 2, 3, 4)), (2, (3, 2, 4, 1)), (1, (4, 1, 2, 3))],
    "c3+": [(2, (1, 2, 3, 4)), (2, (2, 3, 4, 1)), (1, (4, 1, 2, 3))],
    "c4+": [(2, (1, 2, 3, 4)), (2, (2, 4, 1, 3)), (1, (3, 4, 1, 2))],
}
# majority edges among the + candidates; the - side is reversed
C1PO_PLUS_EDGES = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3), (2, 4)]


def ranking_form_theta(ijkl, eps=C1PO_EPS):
    """Parameter vector with 1, 3eps, 2eps, eps at coordinates i, j, k, l (1-based)."""
    theta = [Fraction(0)] * 4
    for idx, v in zip(ijkl, (1, 3 * eps, 2 * eps, eps)):
        theta[idx - 1] = Fraction(v)
    return tuple(theta)


def c1po_majority_graph():
    """Expected strict-majority winner of every pair."""
    edges = {}
    plus = [f"c{i}+" for i in range(1, 5)]
    minus = [f"c{i}-" for i in range(1, 5)]
    for c in plus + minus:
        edges[frozenset(("c*", c))] = "c*"
    for p in plus:
        for q in minus:
            edges[frozenset((p, q))] = p
    for i, j in C1PO_PLUS_EDGES:
        edges[frozenset((f"c{i}+", f"c{j}+"))] = f"c{i}+"
        edges[frozenset((f"c{i}-", f"c{j}-"))] = f"c{j}-"
    return edges


def _c1_po(eps=C1PO_EPS):
    from .axioms import check_pareto
    from .rules_c1 import lcpo, leximax_copeland

    eps = Fraction(eps)
    fifth = Fraction(1, 5)
    feats = [("c*", (fifth,) * 4)]
    feats += [(f"c{i + 1}+", _unit(4, i)) for i in range(4)]
    feats += [(f"c{i + 1}-", _unit(4, i, -1)) for i in range(4)]
    inst = Instance.from_features(feats)
    profiles = {}
    for col, rows in C1PO_TABLE.items():
        thetas = [ranking_form_theta(ijkl, eps) for k, ijkl in rows for _ in range(k)]
        profiles[col] = _profile_from_thetas(inst, thetas)

    def c_star_first(fx):
        sep = find_separating_theta(fx.instance, [("c*", c) for c in fx.instance.ids if c != "c*"])
        certified = sep.certificate is not None and verify_certificate(fx.instance, sep.certificate)
        return not sep.feasible and certified, f"feasible={sep.feasible} certificate-verified={certified}"

    def graphs(fx):
        want = c1po_majority_graph()
        bad = [col for col, p in fx.profiles.items() if pairwise_counts(p).majority_graph() != want]
        return not bad, f"mismatched columns={bad}"

    def never_first(fx):
        bad = [col for col, p in fx.profiles.items() if any(r[0] == col for r in p.rankings)]
        return not bad, f"columns whose candidate leads some voter={bad}"

    def leximax_same(fx):
        outs = {col: tuple(leximax_copeland(p).output) for col, p in fx.profiles.items()}
        first = next(iter(outs.values()))
        return all(o == first for o in outs.values()) and first[0] != "c*", f"output={' > '.join(first)}"

    def po_violation(fx):
        out = leximax_copeland(fx.profiles["c1+"]).output
        top = out[0]
        if top not in fx.profiles:
            return False, f"top {top} has no matching column"
        rep = check_pareto(fx.profiles[top], out)
        return rep.verdict == "violation" and ("c*", top) in rep.witnesses, f"column={top} witnesses={list(rep.witnesses)}"

    def lcpo_po(fx):
        verdicts = {col: check_pareto(p, lcpo(p).output).verdict for col, p in fx.profiles.items()}
        return all(v == "pass" for v in verdicts.values()), f"verdicts={verdicts}"

    def form(fx):
        got = list(induced_ranking(fx.instance, ranking_form_theta((1, 2, 3, 4), eps)))
        want = ["c1+", "c*", "c2+", "c3+", "c4+", "c4-", "c3-", "c2-", "c1-"]
        return got == want, f"ranking={got}"

    exp = (
        Expectation("induced_ranking", "(1,2,3,4) vector gives c1+ > c* > c2+ > c3+ > c4+ > c4- > c3- > c2- > c1-", "ranking form", form),
        Expectation("find_separating_theta", "c* above all others is infeasible", "C1 PO proof", c_star_first),
        Expectation("majority_graph", "all four profiles share the pictured majority graph", "C1 PO figure", graphs),
        Expectation("rankings", "each column's candidate never leads a voter", "C1 PO table", never_first),
        Expectation("leximax_copeland", "same output on all four profiles, c* not first", "C1 PO proof", leximax_same),
        Expectation("check_pareto(leximax_copeland)", "violation against c* on the matching column", "C1 PO proof", po_violation),
        Expectation("check_pareto(lcpo)", "pass on all four profiles", "LCPO satisfies PO", lcpo_po),
    )
    return Fixture("c1-po", inst, profiles["c1+"], profiles, {"eps": eps}, exp)


# -- linear Kemeny: twenty candidates in R^7 -------------------------------

KEMENY_FEATURES = [
    (2000000, 0, 0, 0, 0, 0, 0),
    (0, 2000000, 0, 0, 0, 0, 0),
    (0, 200000, 0, 0, 0, 0, 0),
    (0, 100000, 100000, 0, 0, 0, 0),
    (0, 0, 200000, 0, 0, 0, 0),
    (0, 0, 20000, 0, 0, 0, 0),
    (0, 0, 10000, 10000, 0, 0, 0),
    (0, 0, 0, 20000, 0, 0, 0),
    (0, 0, 0, 2000, 0, 0, 0),
    (0, 0, 0, 1000, 1000, 0, 0),
    (0, 0, 0, 0, 2000, 0, 0),
    (0, 0, 0, 0, 200, 0, 0),
    (0, 0, 0, 0, 100, 100, 0),
    (0, 0, 0, 0, 0, 200, 0),
    (0, 0, 0, 0, 0, 20, 0),
    (0, 0, 0, 0, 0, 10, 10),
    (0, 0, 0, 0, 0, 0, 20),
    (0, 0, 0, 0, 0, 0, 2),
    (1, 0, 0, 0, 0, 0, 1),
    (2, 0, 0, 0, 0, 0, 0),
]
KEMENY_THETAS = [
    (2, 1, 7, 6, 5, 4, 3),
    (3, 2, 1, 7, 6, 5, 4),
    (4, 3, 2, 1, 7, 6, 5),
    (5, 4, 3, 2, 1, 7, 6),
    (6, 5, 4, 3, 2, 1, 7),
    (7, 6, 5, 4, 3, 2, 1),
]
KEMENY_SECOND_THETAS = [
    (2, 1, 7, 6, 5, 4, 3),
    (2, 1, 7, 6, 5, 4, 3),
    (1, 7, 6, 5, 4, 3, 2),
]
KEMENY_GROUPS = [["1", "2"]] + [[str(k), str(k + 1), str(k + 2)] for k in range(3, 21, 3)]


def kemeny_group_order():
    from .rules_opt import GroupOrder

    return GroupOrder(KEMENY_GROUPS)


def _kemeny_instance():
    return Instance.from_features([(str(i + 1), x) for i, x in enumerate(KEMENY_FEATURES)])


def _kemeny_20():
    from .axioms import check_majority_consistency, check_pareto
    from .rules_opt import linear_kemeny

    inst = _kemeny_instance()
    prof = _profile_from_thetas(inst, KEMENY_THETAS)
    search = kemeny_group_order()

    def v1_group(fx):
        r = fx.profile.rankings[0]
        sub = [c for c in r if c in ("3", "4", "5")]
        return sub == ["5", "4", "3"], f"v1 order on 3,4,5: {sub}"

    def unanimous(fx):
        return all(r.above("1", "2") for r in fx.profile.rankings), "every voter ranks 1 above 2"

    def kemeny(fx):
        out = linear_kemeny(fx.profile, search).ranking
        po = check_pareto(fx.profile, out)
        mc = check_majority_consistency(lambda p: linear_kemeny(p, search), fx.profile)
        ok = out.above("2", "1") and po.verdict == "violation" and mc.verdict == "violation"
        return ok, f"output={' > '.join(out)} pareto={po.verdict} majority-consistency={mc.verdict}"

    exp = (
        Expectation("induced_ranking", "v1 ranks 5 > 4 > 3", "Kemeny PO proof", v1_group),
        Expectation("rankings", "all six voters rank 1 above 2", "Kemeny PO proof", unanimous),
        Expectation("linear_kemeny(group order)", "2 above 1; PO and majority consistency violated", "Kemeny PO proof", kemeny),
    )
    return Fixture("kemeny-20", inst, prof, {"main": prof}, {"groups": KEMENY_GROUPS}, exp)


def _kemeny_po_pair():
    from .axioms import check_separability
    from .rules_opt import linear_kemeny_po

    inst = _kemeny_instance()
    first = _profile_from_thetas(inst, KEMENY_THETAS)
    second = _profile_from_thetas(inst, KEMENY_SECOND_THETAS, ["v1'", "v2'", "v3'"])
    combined = first.combine(second)
    search = kemeny_group_order()
    # the construction assumes ties on the first profile resolve to v1's ranking
    prefer = (first.rankings[0],)

    def rule(p):
        return linear_kemeny_po(p, search, tie_break=prefer)

    def inputs(fx):
        o1 = rule(fx.profiles["first"]).ranking
        o2 = rule(fx.profiles["second"]).ranking
        ok = o1 in fx.profiles["first"].rankings and o2 in fx.profiles["second"].rankings and o1 == o2
        return ok, f"first={' > '.join(o1)} second={' > '.join(o2)}"

    def comb(fx):
        out = rule(fx.profiles["combined"]).ranking
        return out.above("2", "1"), f"combined={' > '.join(out)}"

    def sep(fx):
        rep = check_separability(rule, fx.profiles["first"], fx.profiles["second"])
        return rep.verdict == "violation", f"verdict={rep.verdict} witnesses={list(rep.witnesses)}"

    exp = (
        Expectation("linear_kemeny_po", "each sub-profile outputs v1's input ranking", "Kemeny-PO separability proof", inputs),
        Expectation("linear_kemeny_po", "combined profile ranks 2 above 1", "Kemeny-PO separability proof", comb),
        Expectation("check_separability(linear_kemeny_po)", "violation", "Kemeny-PO separability proof", sep),
    )
    profiles = {"first": first, "second": second, "combined": combined}
    return Fixture("kemeny-po-pair", inst, combined, profiles, {"groups": KEMENY_GROUPS, "tie_break": "v1 first"}, exp)


# -- loss rules fail PO and PMC: six candidates in R^2 ----------------------

# first triple found by the parameter search in the acceptance suite (BCE and squared)
LOSS_CTREX_DEFAULT = (Fraction(2, 3), Fraction(1, 8), Fraction(1, 4))
LOSS_MAJORITY = Ranking(["a", "a'", "b", "b'", "c'", "c"])
LOSS_MINORITY = Ranking(["c'", "c", "b'", "b", "a'", "a"])


def loss_ctrex_instance(eps, delta):
    eps, delta = Fraction(eps), Fraction(delta)
    return Instance.from_features([
        ("a", (2, 1)),
        ("b", (1, 1)),
        ("c", (0, 0)),
        ("a'", (2 - eps, 1)),
        ("b'", (1 - eps, 1)),
        ("c'", (-eps, delta * eps)),
    ])


def _loss_ctrex(p=LOSS_CTREX_DEFAULT[0], eps=LOSS_CTREX_DEFAULT[1], delta=LOSS_CTREX_DEFAULT[2], loss="bce"):
    from .axioms import check_pareto, check_pmc
    from .rules_opt import loss_rule

    p, eps, delta = Fraction(p), Fraction(eps), Fraction(delta)
    if not (0 < p < 1 and 0 < eps < 1 and 0 < delta < 1):
        raise ModelError("loss-ctrex needs 0 < p, eps, delta < 1")
    inst = loss_ctrex_instance(eps, delta)
    n = p.denominator
    k = p.numerator
    prof = Profile.from_rankings(inst, [LOSS_MAJORITY] * k + [LOSS_MINORITY] * (n - k))

    def output(fx):
        res = loss_rule(fx.profile, loss)
        po = check_pareto(fx.profile, res.ranking)
        pmc = check_pmc(lambda q: loss_rule(q, loss).ranking, fx.profile)
        ok = res.ranking.above("c", "c'") and po.verdict == "violation" and pmc.verdict == "violation"
        return ok, f"output={' > '.join(res.ranking)} pareto={po.verdict} pmc={pmc.verdict}"

    exp = (
        Expectation(f"loss_rule({loss}, standard)", "c above c'; PO and PMC violated", "loss-rule impossibility", output),
    )
    return Fixture(f"loss-ctrex({p},{eps},{delta})", inst, prof, {"main": prof},
                   {"p": p, "eps": eps, "delta": delta, "loss": loss}, exp)


CATALOG = {
    "pmc-infeasible": _pmc_infeasible,
    "copeland-sep-A": lambda: _copeland_sep("A"),
    "copeland-sep-B": lambda: _copeland_sep("B"),
    "copeland-sep-AB": lambda: _copeland_sep("AB"),
    "c1-po": _c1_po,
    "kemeny-20": _kemeny_20,
    "kemeny-po-pair": _kemeny_po_pair,
    "loss-ctrex": _loss_ctrex,
}

_CALL = re.compile(r"^([a-z0-9-]+)\((.*)\)$")


def fixture(name: str, **params) -> Fixture:
    """Build a catalog fixture; ``loss-ctrex(p,eps,delta)`` takes its parameters inline."""
    m = _CALL.match(name.strip())
    if m:
        name = m.group(1)
        args = [a.strip() for a in m.group(2).split(",") if a.strip()]
        try:
            params = dict(zip(("p", "eps", "delta", "loss"), [Fraction(a) for a in args[:3]] + args[3:])) | params
        except (ValueError, ZeroDivisionError):
            raise ModelError(f"bad fixture parameters in {m.group(0)!r}") from None
    try:
        build = CATALOG[name]
    except KeyError:
        raise ModelError(f"unknown fixture {name!r}; known: {sorted(CATALOG)}") from None
    return build(**params)


def names() -> list[str]:
    return list(CATALOG)
