"""Symmetry MPOs V(g), the projector P and checks of the three axioms.

An :class:`MpoOperator` wraps the ring tensor produced by
:func:`~fermionic_tn.lattice.boundary_mpo`: ket legs ``v<x>`` and bra
legs ``v<x>'`` for every boundary vertex, ket edge modes ``<t>><h>`` and
bra edge modes ``<t>><h>'``. Operators act on region tensors from the
right, ``A V``, by contracting the region's virtual legs and edge modes
with the ket side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .config import Settings
from .ftensor import BondMap, FermionicTensor, build_a_tilde, contract, tensor_deviation, tensor_equal
from .groups import FiniteGroup, Model
from .lattice import (
    BranchingGraph,
    MpoRing,
    Region,
    boundary_mpo,
    edge_name,
    region_tensor,
    triangular_patch,
    vertex_leg,
)
from .scalars import Gaussian

__all__ = [
    "MpoOperator",
    "Check",
    "apply_mpo",
    "assemble_v",
    "symmetry_mpos",
    "projector",
    "pseudo_inverse",
    "pseudo_inverse_product",
    "verify_projector",
    "verify_representation",
    "verify_symmetry",
    "verify_injectivity",
    "minimal_triangle",
    "axiom_checks",
]


def _prime(name: str, k: int = 1) -> str:
    return name + "'" * k


@dataclass(frozen=True)
class MpoOperator:
    tensor: FermionicTensor
    vertices: tuple[str, ...]
    modes: tuple[str, ...]
    berezin_sign: int = -1

    def compose(self, other: "MpoOperator") -> "MpoOperator":
        """``self`` followed by ``other``: bra side of ``self`` meets ket side of ``other``."""
        if set(self.vertices) != set(other.vertices) or set(self.modes) != set(other.modes):
            raise ValueError("operators live on different boundaries")
        right = other.tensor.relabel(
            legs={**{v: _prime(v) for v in self.vertices}, **{_prime(v): _prime(v, 2) for v in self.vertices}},
            bonds={**{e: _prime(e) for e in self.modes}, **{_prime(e): _prime(e, 2) for e in self.modes}},
        )
        bonds = BondMap(legs=tuple((_prime(v), _prime(v)) for v in self.vertices), modes=tuple(_prime(e) for e in self.modes))
        out = contract(self.tensor, right, bonds, self.berezin_sign)
        out = out.relabel(
            legs={_prime(v, 2): _prime(v) for v in self.vertices},
            bonds={_prime(e, 2): _prime(e) for e in self.modes},
        )
        return MpoOperator(out, self.vertices, self.modes, self.berezin_sign)

    def __matmul__(self, other: "MpoOperator") -> "MpoOperator":
        return self.compose(other)

    def __add__(self, other: "MpoOperator") -> "MpoOperator":
        return MpoOperator(self.tensor + other.tensor, self.vertices, self.modes, self.berezin_sign)

    def scale(self, c) -> "MpoOperator":
        return MpoOperator(self.tensor.scale(c), self.vertices, self.modes, self.berezin_sign)

    def equals(self, other: "MpoOperator", tol: float = 0.0) -> bool:
        return tensor_equal(self.tensor, other.tensor, tol)

    def deviation(self, other: "MpoOperator") -> float:
        return tensor_deviation(self.tensor, other.tensor)


@dataclass
class Check:
    """One verification outcome; serializes to the report row format."""

    axiom: str
    region: str
    elements: tuple = ()
    passed: bool = False
    max_deviation: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        row = {
            "axiom": self.axiom,
            "region": self.region,
            "group_elements": list(self.elements),
            "pass": self.passed,
            "max_deviation": self.max_deviation,
        }
        if self.detail:
            row["detail"] = self.detail
        return row


def _compare(axiom: str, region: str, elements, lhs: FermionicTensor, rhs: FermionicTensor, settings: Settings) -> Check:
    ok = tensor_equal(lhs, rhs, settings.tolerance)
    dev = 0.0 if ok and settings.tolerance == 0.0 else tensor_deviation(lhs, rhs)
    return Check(axiom, region, tuple(elements), ok, dev)


def apply_mpo(A: FermionicTensor, V: MpoOperator) -> FermionicTensor:
    """``A V``: contract the region's boundary legs and edge modes with the ket side of V."""
    bonds = BondMap(legs=tuple((v, v) for v in V.vertices), modes=V.modes)
    out = contract(A, V.tensor, bonds, V.berezin_sign)
    return out.relabel(legs={_prime(v): v for v in V.vertices}, bonds={_prime(e): e for e in V.modes})


def assemble_v(
    graph: BranchingGraph | None,
    region: Region | None,
    model: Model,
    g: int,
    settings: Settings = Settings(),
    ring: MpoRing | None = None,
    flip_y: bool = False,
) -> MpoOperator:
    G, s, omega = model.unpack()
    T = boundary_mpo(graph, region, G, s, omega, g, settings.berezin_sign, ring=ring, flip_y=flip_y)
    if ring is None:
        walk, edges = region.boundary_walk(), region.boundary_edges
    else:
        walk, edges = ring.walk, ring.edges
    return MpoOperator(
        T,
        tuple(vertex_leg(x) for x in walk),
        tuple(edge_name(*e) for e in edges),
        settings.berezin_sign,
    )


def symmetry_mpos(graph, region, model: Model, settings: Settings = Settings(), ring=None, flip_y=False) -> dict:
    return {g: assemble_v(graph, region, model, g, settings, ring, flip_y) for g in model.group.elements}


def projector(vs: Mapping[int, MpoOperator], normalized: bool = True) -> MpoOperator:
    """``sum_g V(g)``, divided by ``|G|`` when ``normalized``."""
    ops = [vs[g] for g in sorted(vs)]
    P = ops[0]
    for V in ops[1:]:
        P = P + V
    if normalized:
        P = P.scale(Gaussian(Fraction(1, len(ops))))
    return P


def pseudo_inverse(graph: BranchingGraph, region: Region, model: Model, settings: Settings = Settings()) -> FermionicTensor:
    """Glued ``A~`` for a region.

    The ``A~`` tensors are glued in mirrored (reversed) triangle order with
    the opposite Berezin measure, and inner vertices are averaged rather
    than summed. An overall ``1/|G|`` pairs the result with the normalized
    projector and is left out when normalization is off.
    """
    G, s, omega = model.unpack()
    n = len(region.triangles)
    mirrored = Region(graph, tuple(reversed(region.triangles)))
    names = [f"phys{n - 1 - k}" for k in range(n)]
    At = region_tensor(
        graph, mirrored, G, s, omega, -settings.berezin_sign, sum_inner=True,
        builder=build_a_tilde, phys_names=names,
    )
    inner = len(region.inner_vertices)
    factor = Fraction(1, G.order ** (inner + (1 if settings.normalized else 0)))
    return At.scale(Gaussian(factor)) if factor != 1 else At


def pseudo_inverse_product(At: FermionicTensor, A: FermionicTensor, V: MpoOperator) -> FermionicTensor:
    """``A~ A`` with A's boundary moved to the bra side of the operator."""
    Ar = A.relabel(legs={v: _prime(v) for v in V.vertices}, bonds={e: _prime(e) for e in V.modes})
    plegs = tuple(x for x in A.legs if x.startswith("p"))
    phys = tuple(sorted(b for b in A.bonds if b.startswith("phys")))
    return contract(At, Ar, BondMap(legs=tuple((x, x) for x in plegs), modes=phys), V.berezin_sign)


def verify_projector(P: MpoOperator, settings: Settings = Settings(), region: str = "", group_order: int = 1) -> Check:
    """``P^2 = P``; for the unnormalized sum the target is ``|G| P``."""
    target = P if settings.normalized else P.scale(group_order)
    return _compare("projector", region, (), (P @ P).tensor, target.tensor, settings)


def verify_representation(vs: Mapping[int, MpoOperator], G: FiniteGroup, settings: Settings = Settings(), region: str = "") -> list[Check]:
    """``V(g) V(h) = V(hg)`` for every pair."""
    out = []
    for g in G.elements:
        for h in G.elements:
            out.append(_compare("representation", region, (g, h), (vs[g] @ vs[h]).tensor, vs[G.mul(h, g)].tensor, settings))
    return out


def verify_symmetry(A: FermionicTensor, vs: Mapping[int, MpoOperator], settings: Settings = Settings(), region: str = "") -> list[Check]:
    return [_compare("symmetry", region, (g,), apply_mpo(A, V), A, settings) for g, V in sorted(vs.items())]


def verify_injectivity(At: FermionicTensor, A: FermionicTensor, P: MpoOperator, settings: Settings = Settings(), region: str = "") -> Check:
    return _compare("injectivity", region, (), pseudo_inverse_product(At, A, P), P.tensor, settings)


def minimal_triangle(orientation: str) -> tuple[BranchingGraph, Region]:
    """The up triangle is ``+`` and the down triangle ``-`` in the lattice embedding."""
    graph, tris = triangular_patch("up" if orientation == "+" else "down")
    return graph, Region(graph, tuple(tris))


def axiom_checks(
    model: Model,
    settings: Settings = Settings(),
    graph: BranchingGraph | None = None,
    region: Region | None = None,
    label: str | None = None,
) -> list[Check]:
    """Projector, representation, symmetry and injectivity on one region.

    Without a region both minimal triangles are checked.
    """
    if settings.exact is False:
        model = model.as_float()
    if region is None:
        out = []
        for sign in "+-":
            g, r = minimal_triangle(sign)
            out += axiom_checks(model, settings, g, r, f"triangle{sign}")
        return out
    label = label or f"{len(region.triangles)}-triangle region"
    G = model.group
    vs = symmetry_mpos(graph, region, model, settings)
    P = projector(vs, settings.normalized)
    A = region_tensor(graph, region, *model.unpack(), settings.berezin_sign)
    checks = [verify_projector(P, settings, label, G.order)]
    checks += verify_representation(vs, G, settings, label)
    checks += verify_symmetry(A, vs, settings, label)
    At = pseudo_inverse(graph, region, model, settings)
    checks.append(verify_injectivity(At, A, P, settings, label))
    return checks
