import itertools

import pytest

from fermionic_tn.groups import (
    BUILTIN_MODELS,
    Cocycle2,
    GroupError,
    NoInverse,
    SearchSpaceTooLarge,
    SuperCocycle3,
    builtin_model,
    c_omega,
    centralizer,
    check_cocycle2,
    check_graded_pentagon,
    cyclic_group,
    ftc_cocycles,
    is_c_regular,
    load_model_json,
    pair_conjugacy_classes,
    product_group,
    solve_graded_pentagon,
    symmetric_group_s3,
    trivial_cocycle3,
    trivial_group,
    validate_group,
    zero_cocycle2,
)
from fermionic_tn.scalars import Gaussian, I

Z2 = cyclic_group(2)
S3 = symmetric_group_s3()
FTC_S = Cocycle2.from_function(Z2, lambda a, b: a * b)


def ftc_omega(val):
    return SuperCocycle3.from_function(Z2, lambda a, b, c: val if a == b == c == 1 else 1)


class TestGroups:
    def test_z2(self):
        G = validate_group([[0, 1], [1, 0]])
        assert G.order == 2 and G.inv(1) == 1

    def test_no_inverse(self):
        with pytest.raises(NoInverse):
            validate_group([[0, 1], [1, 1]])

    def test_bad_shape(self):
        with pytest.raises(GroupError):
            validate_group([[0, 1], [1]])

    def test_s3_against_permutations(self):
        perms = sorted(itertools.permutations(range(3)))
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                assert perms[S3.mul(i, j)] == tuple(p[q[x]] for x in range(3))
        assert not S3.is_abelian()

    def test_product(self):
        G = product_group(Z2, Z2)
        assert G.order == 4 and G.is_abelian()
        assert all(G.mul(g, g) == 0 for g in G.elements)


class TestCocycles:
    def test_zero_s(self):
        assert check_cocycle2(Z2, zero_cocycle2(Z2)) is None

    def test_ftc_s(self):
        assert check_cocycle2(Z2, FTC_S) is None

    def test_bad_s(self):
        bad = Cocycle2(((0, 1), (0, 0)))
        assert check_cocycle2(Z2, bad) is not None

    def test_pentagon_trivial(self):
        assert check_graded_pentagon(Z2, zero_cocycle2(Z2), trivial_cocycle3(Z2)) is None

    @pytest.mark.parametrize("val", [I, -I])
    def test_pentagon_ftc(self, val):
        assert check_graded_pentagon(Z2, FTC_S, ftc_omega(val)) is None

    def test_pentagon_ftc_fails_for_trivial_omega(self):
        assert check_graded_pentagon(Z2, FTC_S, trivial_cocycle3(Z2)) == (1, 1, 1, 1)

    @pytest.mark.parametrize("name", BUILTIN_MODELS)
    def test_builtins_valid(self, name):
        assert builtin_model(name).validate() == {"cocycle2": None, "pentagon": None}

    def test_ftc_cocycles(self):
        s, w = ftc_cocycles(Z2, 1)
        assert w(1, 1, 1) == I and s == FTC_S
        assert ftc_cocycles(Z2, -1)[1](1, 1, 1) == -I


class TestSolver:
    def test_ftc_two_solutions(self):
        sols = solve_graded_pentagon(Z2, FTC_S, 4)
        assert sorted(str(w(1, 1, 1)) for w in sols) == sorted([str(I), str(-I)])

    def test_bosonic_two_solutions(self):
        sols = solve_graded_pentagon(Z2, zero_cocycle2(Z2), 2)
        assert sorted(str(w(1, 1, 1)) for w in sols) == ["-1", "1"]

    def test_ftc_no_real_solution(self):
        assert solve_graded_pentagon(Z2, FTC_S, 2) == []

    def test_odd_root_order_ftc(self):
        assert solve_graded_pentagon(Z2, FTC_S, 3) == []

    def test_every_solution_passes(self):
        G = product_group(Z2, Z2)
        for w in solve_graded_pentagon(G, zero_cocycle2(G), 2):
            assert check_graded_pentagon(G, zero_cocycle2(G), w) is None

    def test_bound(self):
        G = cyclic_group(4)
        with pytest.raises(SearchSpaceTooLarge):
            solve_graded_pentagon(G, zero_cocycle2(G), 8, max_search=1e3)

    def test_limit_lifts_bound(self):
        G = cyclic_group(4)
        sols = solve_graded_pentagon(G, zero_cocycle2(G), 8, max_search=1e3, limit=2)
        assert len(sols) == 2


class TestClasses:
    def test_c_omega_ftc(self):
        w = ftc_omega(I)
        assert c_omega(Z2, w, 1, 1, 1) == I
        assert all(c_omega(Z2, w, 0, h, k) == Gaussian(1) for h in (0, 1) for k in (0, 1))

    def test_abelian_classes(self):
        assert len(pair_conjugacy_classes(Z2)) == 4
        assert len(pair_conjugacy_classes(trivial_group())) == 1

    def test_s3_burnside(self):
        # orbits = average number of fixed pairs
        fixed = sum(
            sum(1 for g, h in itertools.product(S3.elements, repeat=2) if S3.conj(g, t) == g and S3.conj(h, t) == h)
            for t in S3.elements
        )
        assert len(pair_conjugacy_classes(S3)) == fixed // S3.order

    def test_centralizer(self):
        assert centralizer(Z2, 1, 0) == [0, 1]
        t = next(g for g in S3.elements if g and S3.mul(g, g) == 0)
        assert centralizer(S3, t, 0) == [0, t]
        assert centralizer(S3, 0, 0) == list(S3.elements)

    def test_ftc_all_regular(self):
        w = ftc_omega(I)
        assert all(is_c_regular(Z2, w, c) for c in pair_conjugacy_classes(Z2))

    def test_type_iii_has_irregular_class(self):
        m = builtin_model("z2cubed-type-iii")
        classes = pair_conjugacy_classes(m.group)
        assert any(not is_c_regular(m.group, m.omega, c) for c in classes)

    def test_c_is_2_cocycle_on_centralizer(self):
        # c_g restricted to Z(g) satisfies the 2-cocycle identity
        for name in ("ftc+", "z2-double-semion", "z2cubed-type-iii", "s3-untwisted"):
            m = builtin_model(name)
            G = m.group
            for g in G.elements:
                Z = centralizer(G, g, g)
                for h, k, l in itertools.product(Z, repeat=3):
                    lhs = c_omega(G, m.omega, g, h, k) * c_omega(G, m.omega, g, G.mul(h, k), l)
                    rhs = c_omega(G, m.omega, g, k, l) * c_omega(G, m.omega, g, h, G.mul(k, l))
                    assert lhs == rhs


def test_load_model_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"name": "x", "table": [[0,1],[1,0]], "s": [[0,0],[0,1]], '
                 '"omega": [[[[1,0],[1,0]],[[1,0],[1,0]]],[[[1,0],[1,0]],[[1,0],[0,1]]]]}')
    m = load_model_json(p)
    assert m.omega(1, 1, 1) == I and m.s(1, 1) == 1
    p.write_text('{"table": [[0,1],[1,0]], "s": [[0,0]]}')
    with pytest.raises(GroupError):
        load_model_json(p)
