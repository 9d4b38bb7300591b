import itertools

import pytest

from fermionic_tn.config import Settings
from fermionic_tn.groundstate import (
    ConditionViolated,
    build_m,
    build_m_prime,
    class_table,
    degeneracy,
    degeneracy_by_rank,
    degeneracy_report,
    eta,
    exact_rank,
    lambda_coeff,
    verify_eta_identity,
    verify_vanishing_criterion,
)
from fermionic_tn.groups import (
    BUILTIN_MODELS,
    Cocycle2,
    Model,
    builtin_model,
    cyclic_group,
    pair_conjugacy_classes,
    product_group,
    solve_graded_pentagon,
)
from fermionic_tn.scalars import Gaussian

FTC = builtin_model("ftc+")
EXPECTED = {
    "ftc+": 4,
    "ftc-": 4,
    "z2-bosonic-tc": 4,
    "z2-double-semion": 4,
    "s3-untwisted": 8,
    "trivial": 1,
    "z2cubed-type-iii": 22,
}
FLOAT = Settings(exact=False)


@pytest.fixture(scope="module")
def z4_carry():
    """Z4 with the carry 2-cocycle; its graded solutions need eighth roots of unity."""
    G = cyclic_group(4)
    s = Cocycle2.from_function(G, lambda a, b: 1 if a + b >= 4 else 0)
    assert solve_graded_pentagon(G, s, 4, limit=1) == []
    return Model("z4-carry", G, s, solve_graded_pentagon(G, s, 8, limit=1)[0])


@pytest.fixture(scope="module")
def z2z2_asym():
    """Z2 x Z2 with the asymmetric 2-cocycle s(a, b) = a_1 b_2."""
    z2 = cyclic_group(2)
    G = product_group(z2, z2)
    bits = list(itertools.product((0, 1), repeat=2))
    s = Cocycle2.from_function(G, lambda a, b: bits[a][0] * bits[b][1])
    return Model("z2z2-asym", G, s, solve_graded_pentagon(G, s, 4, limit=1)[0])


class TestClosure:
    def test_lambda_identity(self):
        assert lambda_coeff(FTC, 0, 0, 0) == Gaussian(1)

    def test_lambda_bosonic_is_ratio(self):
        m = builtin_model("z2-double-semion")
        w = m.omega
        for a, g, h in itertools.product((0, 1), repeat=3):
            gi, hi = g, h
            ratio = w(h, g, a) * w(h, (g + a) % 2, gi) * w.inv(g, h, a) * w.inv(g, (h + a) % 2, hi)
            assert lambda_coeff(m, a, g, h) == ratio

    def test_m_identity_pair(self):
        M = build_m(FTC, 0, 0)
        assert {k for k in M.tensor.entries} == {(a, a, a, a) for a in (0, 1)}
        assert all(v.terms == {(): Gaussian(1)} for v in M.tensor.entries.values())

    def test_m_11_two_terms(self):
        assert len(build_m(FTC, 1, 1).tensor.entries) == 2

    def test_noncommuting_pair_rejected(self):
        S3 = builtin_model("s3-untwisted")
        G = S3.group
        g, h = next((g, h) for g, h in itertools.product(G.elements, repeat=2) if not G.commute(g, h))
        with pytest.raises(ConditionViolated):
            build_m(S3, g, h)

    def test_eta_identity_k(self):
        for name in BUILTIN_MODELS:
            m = builtin_model(name)
            for g, h in itertools.product(m.group.elements, repeat=2):
                assert eta(m, g, h, 0) == Gaussian(1)

    def test_eta_bosonic_trivial(self):
        m = builtin_model("z2-bosonic-tc")
        assert all(eta(m, *x) == Gaussian(1) for x in itertools.product((0, 1), repeat=3))

    def test_abelian_m_prime(self):
        for g, h in itertools.product((0, 1), repeat=2):
            Mp = build_m_prime(FTC, g, h, "closed")
            total = sum((eta(FTC, g, h, k) for k in (0, 1)), Gaussian(0)) * Gaussian(1, 0) / 2
            expected = build_m(FTC, g, h).tensor.scale(total)
            assert Mp.tensor.entries.keys() == expected.entries.keys()
            assert all(Mp.tensor.entries[k] == expected.entries[k] for k in expected.entries)


@pytest.mark.parametrize("name", ["ftc+", "ftc-", "z2-double-semion", "s3-untwisted"])
def test_mpo_route_matches_closed_form(name):
    m = builtin_model(name)
    for r in class_table(m, with_states=False):
        if r["commuting"] and r["s_symmetric"]:
            build_m_prime(m, *r["rep"], method="both")  # raises on mismatch


def test_mpo_route_type_iii_sample():
    # 4096 singleton classes; a few regular and irregular ones suffice
    m = builtin_model("z2cubed-type-iii")
    rows = [r for r in class_table(m, with_states=False)]
    sample = [r for r in rows if not r["c_regular"]][:2] + [r for r in rows if r["c_regular"]][1:3]
    for r in sample:
        Mp = build_m_prime(m, *r["rep"], method="both")
        assert Mp.is_zero() == (not r["c_regular"])


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_degeneracy(name):
    m = builtin_model(name)
    assert degeneracy(m) == EXPECTED[name]
    assert degeneracy_by_rank(m) == EXPECTED[name]
    assert degeneracy(m, "eta") == EXPECTED[name]


@pytest.mark.parametrize("name", ["ftc+", "s3-untwisted"])
def test_degeneracy_float_rank(name):
    assert degeneracy_by_rank(builtin_model(name), FLOAT) == EXPECTED[name]


def test_ftc_all_nonzero():
    assert all(r["mprime_nonzero"] for r in class_table(FTC))


def test_s3_counts_commuting_classes():
    m = builtin_model("s3-untwisted")
    G = m.group
    commuting = [c for c in pair_conjugacy_classes(G) if G.commute(*c.representative)]
    assert degeneracy(m) == len(commuting)


def test_type_iii_zero_states():
    rows = class_table(builtin_model("z2cubed-type-iii"))
    irregular = [r for r in rows if r["commuting"] and not r["c_regular"]]
    assert irregular and all(not r["mprime_nonzero"] for r in irregular)


def test_same_class_rank_one():
    m = builtin_model("s3-untwisted")
    G = m.group
    cls = next(c for c in pair_conjugacy_classes(G) if len(c) > 1 and G.commute(*c.representative))
    vecs = [build_m_prime(m, g, h, "closed").vector() for g, h in sorted(cls.members)]
    keys = sorted({k for v in vecs for k in v}, key=repr)
    assert exact_rank([[v.get(k, 0) for k in keys] for v in vecs]) == 1


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_appendix_identities(name):
    m = builtin_model(name)
    assert verify_eta_identity(m) is None
    res = verify_vanishing_criterion(m)
    assert res["vanishing"] is None and res["etac"] is None and res["etac_checked"] > 0


def test_report_agrees():
    rep = degeneracy_report(builtin_model("ftc-"))
    assert rep["agree"] and rep["degeneracy"] == 4


def test_exact_rank():
    assert exact_rank([[Gaussian(1), Gaussian(2)], [Gaussian(2), Gaussian(4)]]) == 1
    assert exact_rank([[Gaussian(0, 1), Gaussian(1)], [Gaussian(1), Gaussian(0, 1)]]) == 2
    assert exact_rank([]) == 0


class TestDerivedModels:
    def test_z4_carry(self, z4_carry):
        m = z4_carry
        assert m.validate(1e-12) == {"cocycle2": None, "pentagon": None}
        assert degeneracy(m) == 16
        assert degeneracy_by_rank(m, FLOAT) == 16
        for r in class_table(m, FLOAT, with_states=False):
            if r["commuting"] and r["s_symmetric"]:
                build_m_prime(m, *r["rep"], method="both", settings=FLOAT)
        assert verify_eta_identity(m, 1e-9) is None

    def test_asymmetric_s_gap(self, z2z2_asym):
        # c-regularity alone overcounts once s is asymmetric on the centralizer
        m = z2z2_asym
        assert degeneracy_by_rank(m) == 1
        assert degeneracy(m, "eta") == 1
        assert degeneracy(m) > 1
        assert verify_eta_identity(m) is None
        assert verify_vanishing_criterion(m)["vanishing"] is None
