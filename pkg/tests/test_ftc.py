import pytest

from fermionic_tn.config import Settings
from fermionic_tn.ftc import (
    TABLE_I,
    apply_ops,
    build_hexagon,
    build_plaquette,
    ftc_model,
    gauge_phase,
    matching_alpha,
    matching_beta,
    plaquette_algebra,
    plaquette_entries,
    verify_plaquette_eigenstate,
    vertex_consistency,
)
from fermionic_tn.groups import check_cocycle2, check_graded_pentagon
from fermionic_tn.scalars import Gaussian, I

MODELS = [ftc_model("+"), ftc_model("-")]
BETA = -I


class TestModel:
    def test_signs(self):
        assert ftc_model("+").omega(1, 1, 1) == I
        assert ftc_model("-").omega(1, 1, 1) == -I

    @pytest.mark.parametrize("m", MODELS, ids=["+", "-"])
    def test_valid(self, m):
        assert check_cocycle2(m.group, m.s) is None
        assert check_graded_pentagon(*m.unpack()) is None

    def test_matching(self):
        assert matching_alpha(ftc_model("+")) == -I
        assert matching_beta(ftc_model("-")) == -I
        assert matching_beta(ftc_model("+")) == I
        assert matching_beta(ftc_model("+"), berezin_sign=1) == -I


class TestTable:
    def test_size(self):
        assert len(TABLE_I) == 32
        assert len({row[0] for row in TABLE_I}) == 32

    def test_first_row(self):
        e = plaquette_entries()[0]
        assert e.coefficient(I, BETA) == -(I / BETA)
        assert e.ops == ((3, True), (6, True))

    def test_identity_row(self):
        e = next(e for e in plaquette_entries() if e.source == (0, 0, 0, 1, 1, 1))
        assert e.ops == () and e.coefficient(I, BETA) == Gaussian(1)

    def test_gauge_weights(self):
        # one printed row breaks the beta^(1/2) bookkeeping; the amended table does not
        raw = [e for e in plaquette_entries(corrected=False) if not e.gauge_weight_ok()]
        assert [e.source for e in raw] == [(0, 1, 0, 0, 1, 0)]
        assert all(e.gauge_weight_ok() for e in plaquette_entries())

    def test_flips_cover_all_64(self):
        # rows plus conjugates reach every spin configuration exactly once
        seen = set()
        for e in plaquette_entries():
            seen.add(e.source)
            seen.add(tuple(1 - x for x in e.source))
        assert len(seen) == 64


class TestFock:
    def test_jordan_wigner(self):
        assert apply_ops([(2, True)], (1, 0, 0, 0, 0, 0)) == (-1, (1, 1, 0, 0, 0, 0))
        assert apply_ops([(2, True)], (0, 1, 0, 0, 0, 0)) is None
        assert apply_ops([(1, True), (2, True)], (0,) * 6) == (1, (1, 1, 0, 0, 0, 0))
        assert apply_ops([(2, True), (1, True)], (0,) * 6) == (-1, (1, 1, 0, 0, 0, 0))

    def test_order_changes_strings(self):
        occ = (1, 0, 0, 0, 0, 0)
        assert apply_ops([(2, True)], occ, order=(2, 1, 3, 4, 5, 6))[0] == 1

    @pytest.mark.parametrize("alpha", [I, -I])
    def test_algebra(self, alpha):
        res = plaquette_algebra(alpha, BETA)
        assert res["hermitian"] and res["involution_on_support"]
        assert not res["idempotent"]

    def test_zero_beta(self):
        with pytest.raises(ValueError):
            build_plaquette(I, Gaussian(0))


class TestHexagon:
    def test_reference_configuration(self):
        patch = build_hexagon(ftc_model("+"))
        vec = patch.vector((0,) * 6, 0)
        assert vec[((0,) * 6, (0,) * 6)] == Gaussian(1)
        assert patch.rim[(0,) * 6] == ()

    def test_64_configurations(self):
        assert len(build_hexagon(ftc_model("-")).states) == 64

    @pytest.mark.parametrize("m", MODELS, ids=["+", "-"])
    def test_vertex_consistency(self, m):
        assert vertex_consistency(m)

    def test_gauge_phase(self):
        assert gauge_phase(ftc_model("-"), -I) == Gaussian(1)
        lam = gauge_phase(ftc_model("+"), -I)
        assert lam * lam == Gaussian(-1)


class TestEigenstate:
    @pytest.mark.parametrize("m", MODELS, ids=["+", "-"])
    def test_pass(self, m):
        r = verify_plaquette_eigenstate(m)
        assert r["configurations"] == 64
        assert r["eigenstate_ok"] == 64 and r["loop_ok"] == 64 and r["pass"]

    @pytest.mark.parametrize("m", MODELS, ids=["+", "-"])
    def test_float(self, m):
        assert verify_plaquette_eigenstate(m, settings=Settings(exact=False))["pass"]

    @pytest.mark.parametrize("m", MODELS, ids=["+", "-"])
    def test_mismatched_alpha(self, m):
        assert not verify_plaquette_eigenstate(m, alpha=m.omega(1, 1, 1))["pass"]

    @pytest.mark.parametrize("order", [(3, 1, 2, 6, 5, 4), (6, 5, 4, 3, 2, 1)])
    def test_order_covariance(self, order):
        for m in MODELS:
            assert verify_plaquette_eigenstate(m, order=order)["pass"]

    def test_other_berezin_sign(self):
        for m in MODELS:
            assert verify_plaquette_eigenstate(m, settings=Settings(berezin_sign=1))["pass"]

    def test_printed_table_fails(self):
        r = verify_plaquette_eigenstate(ftc_model("-"), corrected=False)
        assert not r["pass"] and r["eigenstate_ok"] < 64

    def test_non_unitary_gauge_fails(self):
        assert not verify_plaquette_eigenstate(ftc_model("-"), beta=Gaussian(2, -1))["pass"]
