import pytest

from fermionic_tn.config import Settings
from fermionic_tn.ftensor import tensor_equal
from fermionic_tn.groups import BUILTIN_MODELS, Model, builtin_model
from fermionic_tn.lattice import Region, region_tensor, triangular_patch
from fermionic_tn.mpo import (
    apply_mpo,
    axiom_checks,
    minimal_triangle,
    projector,
    pseudo_inverse,
    symmetry_mpos,
    verify_injectivity,
    verify_projector,
    verify_representation,
    verify_symmetry,
)
from fermionic_tn.scalars import Gaussian, I

FTC = builtin_model("ftc+")


def failing(checks):
    return [c.to_json() for c in checks if not c.passed]


@pytest.mark.parametrize("name", BUILTIN_MODELS)
def test_axioms_exact(name):
    checks = axiom_checks(builtin_model(name))
    assert not failing(checks)
    assert {c.axiom for c in checks} == {"projector", "representation", "symmetry", "injectivity"}


@pytest.mark.parametrize("name", ["ftc+", "ftc-"])
def test_axioms_float(name):
    assert not failing(axiom_checks(builtin_model(name), Settings(exact=False)))


@pytest.mark.parametrize("name", ["ftc+", "z2-double-semion"])
def test_axioms_unnormalized(name):
    assert not failing(axiom_checks(builtin_model(name), Settings(normalized=False)))


def test_representation_count():
    checks = [c for c in axiom_checks(FTC) if c.axiom == "representation"]
    assert len(checks) == 8  # four pairs on each triangle


@pytest.mark.parametrize("sign", "+-")
def test_identity_element(sign):
    g, r = minimal_triangle(sign)
    vs = symmetry_mpos(g, r, FTC)
    A = region_tensor(g, r, *FTC.unpack())
    assert tensor_equal(apply_mpo(A, vs[0]), A)


def test_trivial_group_projector_is_v0():
    m = builtin_model("trivial")
    g, r = minimal_triangle("+")
    vs = symmetry_mpos(g, r, m)
    assert tensor_equal(projector(vs).tensor, vs[0].tensor)


def test_hexagon_region():
    g, tris = triangular_patch("hexagon")
    r = Region(g, tuple(tris))
    assert not failing(axiom_checks(FTC, graph=g, region=r, label="hexagon"))


def test_corrupted_omega_breaks_representation():
    bad = Model("bad", FTC.group, FTC.s, FTC.omega.with_value(1, 1, 1, Gaussian(1)))
    g, r = minimal_triangle("+")
    vs = symmetry_mpos(g, r, bad)
    assert any(not c.passed for c in verify_representation(vs, bad.group))


def test_corrupted_tensor_breaks_symmetry():
    g, r = minimal_triangle("+")
    vs = symmetry_mpos(g, r, FTC)
    bad = Model("bad", FTC.group, FTC.s, FTC.omega.with_value(1, 1, 1, -I))
    A = region_tensor(g, r, *bad.unpack())
    assert any(not c.passed for c in verify_symmetry(A, vs))


def test_unnormalized_projector_target():
    g, r = minimal_triangle("-")
    P = projector(symmetry_mpos(g, r, FTC), normalized=False)
    assert verify_projector(P, Settings(normalized=False), group_order=2).passed
    assert not verify_projector(P, Settings(normalized=True)).passed


def test_injectivity_needs_scale():
    g, r = minimal_triangle("+")
    P = projector(symmetry_mpos(g, r, FTC))
    A = region_tensor(g, r, *FTC.unpack())
    At = pseudo_inverse(g, r, FTC)
    assert verify_injectivity(At, A, P).passed
    assert not verify_injectivity(At.scale(Gaussian(2)), A, P).passed


def test_check_json():
    row = axiom_checks(FTC)[0].to_json()
    assert set(row) >= {"axiom", "region", "group_elements", "pass", "max_deviation"}
