"""Branching structures, Y placement and boundary MPOs for triangle regions.

Geometry lives on the triangular lattice with basis ``e1 = (1, 0)``,
``e2 = (1/2, sqrt(3)/2)``; every edge points along ``+e1``, ``+e2`` or
``+e3 = e2 - e1``, which gives a global flow (along ``e2``) deviating by
at most ``pi/3`` from each edge. Arbitrary planar graphs can be loaded
from JSON, but only their combinatorics and turn directions are used.

The MPO ring is walked counter-clockwise. A triangle is ``+`` when the
majority of its edges point along that walk, which puts ``T_+`` on its
``01`` and ``12`` edges and ``T_-`` on ``02``, matching the fermionic
modes of ``A_+``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .config import NETWORK_BEREZIN_SIGN
from .ftensor import BondMap, FermionicTensor, build_a, build_t, build_y, contract
from .groups import Cocycle2, FiniteGroup, SuperCocycle3

__all__ = [
    "BranchingError",
    "BranchingGraph",
    "Region",
    "MpoRing",
    "validate_branching",
    "triangular_patch",
    "lattice_graph",
    "place_y",
    "boundary_mpo",
    "region_tensor",
    "load_region_json",
    "vertex_leg",
    "edge_name",
    "LATTICE_STEPS",
    "ConcatCase",
    "concat_cases",
    "concat_case_suite",
    "boundary_ring",
]

TOL = 1e-9

# lattice steps along which edges are oriented
LATTICE_STEPS = ((1, 0), (0, 1), (-1, 1))


class BranchingError(ValueError):
    pass


def _cart(ij) -> tuple[float, float]:
    i, j = ij
    return (i + 0.5 * j, math.sqrt(3) / 2 * j)


def _cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def vertex_leg(v) -> str:
    return f"v{v}"


def edge_name(tail, head) -> str:
    return f"{tail}>{head}"


@dataclass(frozen=True)
class BranchingGraph:
    """Directed planar graph with triangular faces.

    ``positions`` maps vertex id to planar coordinates; ``edges`` are
    ``(tail, head)`` pairs; ``triangles`` are vertex triples.
    """

    positions: dict
    edges: frozenset
    triangles: tuple
    flow: tuple[float, float] | None = None

    def direction(self, a, b) -> int:
        """+1 if the edge is a->b, -1 if b->a, 0 if absent."""
        if (a, b) in self.edges:
            return 1
        if (b, a) in self.edges:
            return -1
        return 0

    def oriented(self, a, b) -> tuple:
        return (a, b) if (a, b) in self.edges else (b, a)

    def branching_order(self, tri) -> tuple:
        """Vertices of a triangle as (source, middle, sink)."""
        a, b, c = tri
        outdeg = {v: 0 for v in tri}
        for x, y in itertools.permutations(tri, 2):
            if (x, y) in self.edges:
                outdeg[x] += 1
        order = sorted(tri, key=lambda v: -outdeg[v])
        if [outdeg[v] for v in order] != [2, 1, 0]:
            raise BranchingError(f"triangle {tri} has a cyclic orientation")
        return tuple(order)

    def turn(self, a, b, c) -> float:
        """Cross product of (b-a) and (c-b); positive for a left turn."""
        pa, pb, pc = self.positions[a], self.positions[b], self.positions[c]
        return _cross(_sub(pb, pa), _sub(pc, pb))

    def triangle_sign(self, tri) -> str:
        v0, v1, v2 = self.branching_order(tri)
        return "+" if self.turn(v0, v1, v2) > 0 else "-"


def validate_branching(graph: BranchingGraph):
    """Check acyclic faces and the global-flow bound.

    Returns ``None`` or a ``(kind, item)`` describing the first violation.
    """
    for tri in graph.triangles:
        for x, y in itertools.combinations(tri, 2):
            if graph.direction(x, y) == 0:
                return ("missing-edge", (x, y))
        try:
            graph.branching_order(tri)
        except BranchingError:
            return ("cyclic-face", tuple(tri))
    flow = graph.flow
    if flow is None:
        # any flow works if some direction has positive overlap with every edge
        dirs = [_sub(graph.positions[b], graph.positions[a]) for a, b in graph.edges]
        angles = sorted(math.atan2(d[1], d[0]) for d in dirs)
        if not angles:
            return None
        gaps = [(angles[(i + 1) % len(angles)] - angles[i]) % (2 * math.pi) for i in range(len(angles))]
        if len(angles) == 1:
            return None
        if max(gaps) <= math.pi + TOL:
            return ("no-global-flow", None)
        return None
    for a, b in sorted(graph.edges):
        d = _sub(graph.positions[b], graph.positions[a])
        if d[0] * flow[0] + d[1] * flow[1] <= TOL:
            return ("flow-violation", (a, b))
    return None


def lattice_graph(triangles: Iterable[tuple]) -> BranchingGraph:
    """Graph on the triangular lattice for triangles given by lattice vertices."""
    triangles = tuple(tuple(t) for t in triangles)
    verts = sorted({v for t in triangles for v in t})
    edges = set()
    for t in triangles:
        for a, b in itertools.combinations(t, 2):
            d = (b[0] - a[0], b[1] - a[1])
            if d in LATTICE_STEPS:
                edges.add((a, b))
            elif (-d[0], -d[1]) in LATTICE_STEPS:
                edges.add((b, a))
            else:
                raise BranchingError(f"{a}-{b} is not a lattice edge")
    return BranchingGraph({v: _cart(v) for v in verts}, frozenset(edges), triangles, flow=_cart((0, 1)))


def triangular_patch(kind: str) -> tuple[BranchingGraph, list]:
    """Named lattice regions used throughout the tests."""
    up = lambda i, j: ((i, j), (i + 1, j), (i, j + 1))  # noqa: E731
    down = lambda i, j: ((i + 1, j), (i, j + 1), (i + 1, j + 1))  # noqa: E731
    if kind == "up":
        tris = [up(0, 0)]
    elif kind == "down":
        tris = [down(0, 0)]
    elif kind == "hexagon":
        tris = [up(0, 0), down(-1, 0), up(-1, 0), down(-1, -1), up(0, -1), down(0, -1)]
    else:
        raise KeyError(kind)
    return lattice_graph(tris), tris


@dataclass(frozen=True)
class Region:
    """A set of triangles of a branching graph."""

    graph: BranchingGraph
    triangles: tuple

    @cached_property
    def edge_faces(self) -> dict:
        count: dict = {}
        for t in self.triangles:
            for a, b in itertools.combinations(t, 2):
                e = self.graph.oriented(a, b)
                count.setdefault(e, []).append(t)
        return count

    @cached_property
    def boundary_edges(self) -> list:
        return sorted(e for e, ts in self.edge_faces.items() if len(ts) == 1)

    @cached_property
    def inner_edges(self) -> list:
        return sorted(e for e, ts in self.edge_faces.items() if len(ts) == 2)

    @cached_property
    def vertices(self) -> list:
        return sorted({v for t in self.triangles for v in t})

    @cached_property
    def boundary_vertices(self) -> list:
        return sorted({v for e in self.boundary_edges for v in e})

    @cached_property
    def inner_vertices(self) -> list:
        bv = set(self.boundary_vertices)
        return [v for v in self.vertices if v not in bv]

    def boundary_walk(self) -> list:
        """Boundary vertices in counter-clockwise order (interior on the left).

        Requires a simple closed boundary.
        """
        # directed boundary half-edges with interior on the left
        succ = {}
        for e in self.boundary_edges:
            (t,) = self.edge_faces[e]
            a, b = e
            (c,) = [v for v in t if v not in e]
            if self.graph.turn(a, b, c) < 0:
                a, b = b, a
            if a in succ:
                raise BranchingError(f"boundary is not a simple closed walk at {a}")
            succ[a] = b
        start = min(succ)
        walk = [start]
        while True:
            nxt = succ[walk[-1]]
            if nxt == start:
                break
            walk.append(nxt)
            if len(walk) > len(succ):
                raise BranchingError("boundary walk does not close")
        if len(walk) != len(succ):
            raise BranchingError("boundary has several components")
        return walk


@dataclass(frozen=True)
class MpoRing:
    """Boundary ring: ordered vertices, per-edge T orientation, Y positions."""

    walk: tuple
    t_tags: tuple  # "+" or "-" for edge walk[i] -> walk[i+1]
    y_vertices: frozenset
    edges: tuple  # oriented boundary edges, aligned with t_tags

    def __len__(self):
        return len(self.walk)


def place_y(graph: BranchingGraph, region: Region) -> frozenset:
    """Boundary vertices that receive a Y tensor.

    A vertex qualifies when its two boundary edges are both outgoing and
    the interior angle is below pi, or both incoming with interior angle
    above pi.
    """
    walk = region.boundary_walk()
    n = len(walk)
    out = set()
    for i, x in enumerate(walk):
        p, q = walk[i - 1], walk[(i + 1) % n]
        turn = graph.turn(p, x, q)
        convex, reflex = turn > TOL, turn < -TOL
        outgoing = graph.direction(x, p) == 1 and graph.direction(x, q) == 1
        incoming = graph.direction(p, x) == 1 and graph.direction(q, x) == 1
        if (outgoing and convex) or (incoming and reflex):
            out.add(x)
    return frozenset(out)


def boundary_ring(graph: BranchingGraph, region: Region) -> MpoRing:
    walk = region.boundary_walk()
    n = len(walk)
    tags, edges = [], []
    for i, x in enumerate(walk):
        y = walk[(i + 1) % n]
        d = graph.direction(x, y)
        if d == 0:
            raise BranchingError(f"boundary step {x}->{y} is not an edge")
        tags.append("+" if d == 1 else "-")
        edges.append(graph.oriented(x, y))
    return MpoRing(tuple(walk), tuple(tags), place_y(graph, region), tuple(edges))


def boundary_mpo(
    graph: BranchingGraph,
    region: Region,
    G: FiniteGroup,
    s: Cocycle2,
    omega: SuperCocycle3,
    g: int,
    berezin_sign: int = NETWORK_BEREZIN_SIGN,
    ring: MpoRing | None = None,
    flip_y: bool = False,
) -> FermionicTensor:
    """Contract ``T_+(g)``/``T_-(g)`` and Y tensors around the region boundary.

    The result has ket legs ``v<x>`` and bra legs ``v<x>'`` for every
    boundary vertex, ket edge modes ``<tail>><head>`` and bra modes with a
    trailing prime.
    """
    ring = ring or boundary_ring(graph, region)
    n = len(ring.walk)
    V = None
    for i, x in enumerate(ring.walk):
        y = ring.walk[(i + 1) % n]
        e = edge_name(*ring.edges[i])
        T = build_t(G, s, omega, g, ring.t_tags[i], names={"x": vertex_leg(x), "y": vertex_leg(y), "e": e})
        if V is None:
            V = T
        else:
            shared = tuple(sorted(b for b in V.bonds & T.bonds if b.startswith("r:")))
            V = contract(V, T, BondMap(modes=shared), berezin_sign)
    for x in sorted(ring.y_vertices):
        leg = vertex_leg(x)
        V = contract(V, build_y(G, s, names={"v": leg, "w": leg + "'"}, flip=flip_y))
    return V


def region_tensor(
    graph: BranchingGraph,
    region: Region,
    G: FiniteGroup,
    s: Cocycle2,
    omega: SuperCocycle3,
    berezin_sign: int = NETWORK_BEREZIN_SIGN,
    sum_inner: bool = True,
    builder=build_a,
    phys_names: Sequence[str] | None = None,
) -> FermionicTensor:
    """Glue the triangle tensors of a region.

    Legs: ``v<x>`` per vertex (inner ones summed when ``sum_inner``),
    ``p<tail>><head>`` per edge. Modes: ``phys<k>`` per triangle (``k`` is
    the position in ``region.triangles``, unless ``phys_names`` is given)
    and boundary edge modes.
    """
    out = None
    for k, tri in enumerate(region.triangles):
        v = graph.branching_order(tri)
        A = builder(G, s, omega, graph.triangle_sign(tri))
        legs = {f"v{i}": vertex_leg(v[i]) for i in range(3)}
        bonds = {"phys": phys_names[k] if phys_names else f"phys{k}"}
        for a, b in ((0, 1), (1, 2), (0, 2)):
            name = edge_name(v[a], v[b])
            legs[f"p{a}{b}"] = "p" + name
            bonds[f"e{a}{b}"] = name
        A = A.relabel(legs=legs, bonds=bonds)
        if out is None:
            out = A
        else:
            shared = tuple(sorted(out.bonds & A.bonds))
            out = contract(out, A, BondMap(modes=shared), berezin_sign)
    if sum_inner and region.inner_vertices:
        out = out.sum_legs(vertex_leg(x) for x in region.inner_vertices)
    return out


def load_region_json(path: str | Path) -> tuple[BranchingGraph, Region]:
    """Read ``{vertices: [[x, y], ...], edges: [[tail, head], ...], triangles: [[u, v, w], ...]}``."""
    data = json.loads(Path(path).read_text())
    positions = {i: tuple(map(float, p)) for i, p in enumerate(data["vertices"])}
    edges = frozenset((int(a), int(b)) for a, b in data["edges"])
    tris = tuple(tuple(int(x) for x in t) for t in data["triangles"])
    flow = tuple(data["flow"]) if data.get("flow") else None
    graph = BranchingGraph(positions, edges, tris, flow)
    return graph, Region(graph, tris)


# ---------------------------------------------------------------------------
# concatenation cases


@dataclass(frozen=True)
class ConcatCase:
    """One gluing: ``base`` triangles plus ``new`` sharing ``shared`` with it."""

    name: str
    kind: str  # "open" or "closing"
    base: tuple
    new: tuple
    shared: str  # "01", "12", "02" for an edge, "v0", "v1", "v2" for a vertex


def _neighbor(tri, a, b):
    (c,) = [v for v in tri if v not in (a, b)]
    return (a[0] + b[0] - c[0], a[1] + b[1] - c[1])


def concat_cases() -> list[ConcatCase]:
    """Six open cases (sign x shared edge) and six closing cases (sign x closed vertex)."""
    up = ((0, 0), (1, 0), (0, 1))
    down = ((1, 0), (0, 1), (1, 1))
    cases = []
    for tri in (up, down):
        graph = lattice_graph([tri])
        sign = graph.triangle_sign(tri)
        v = graph.branching_order(tri)
        for i, j in ((0, 1), (1, 2), (0, 2)):
            new = tuple(sorted((v[i], v[j], _neighbor(tri, v[i], v[j]))))
            cases.append(ConcatCase(f"open{sign}{i}{j}", "open", (tri,), new, f"{i}{j}"))
    graph, hexagon = triangular_patch("hexagon")
    for tri in hexagon:
        sign = graph.triangle_sign(tri)
        pos = graph.branching_order(tri).index((0, 0))
        base = tuple(t for t in hexagon if t != tri)
        cases.append(ConcatCase(f"closing{sign}v{pos}", "closing", base, tri, f"v{pos}"))
    return sorted(cases, key=lambda c: c.name)


def concat_case_suite(G: FiniteGroup, s: Cocycle2, omega: SuperCocycle3, settings=None, flip_y: bool = False) -> list[dict]:
    """Glue a triangle onto a symmetric region in both orders and check the result.

    Per case the report lists whether both gluing orders agree, whether
    the glued tensor is invariant under every ``V(g)`` of its boundary and
    whether ``A~ A = P`` holds for it. ``flip_y`` negates every Y tensor of
    the boundary MPOs (mutation test).
    """
    from .config import Settings
    from .groups import Model
    from .mpo import apply_mpo, projector, pseudo_inverse, pseudo_inverse_product, symmetry_mpos
    from .ftensor import tensor_equal

    settings = settings or Settings()
    model = Model("", G, s, omega)
    if not settings.exact:
        model = model.as_float()
        G, s, omega = model.unpack()
    tol = settings.tolerance
    sign = settings.berezin_sign
    rows = []
    for case in concat_cases():
        tris = case.base + (case.new,)
        graph = lattice_graph(tris)
        region = Region(graph, tris)
        n = len(case.base)
        base = region_tensor(graph, Region(graph, case.base), G, s, omega, sign, sum_inner=False)
        new = region_tensor(graph, Region(graph, (case.new,)), G, s, omega, sign, phys_names=[f"phys{n}"])
        glued = []
        for first, second in ((base, new), (new, base)):
            shared = tuple(sorted(first.bonds & second.bonds))
            t = contract(first, second, BondMap(modes=shared), sign)
            if region.inner_vertices:
                t = t.sum_legs(vertex_leg(x) for x in region.inner_vertices)
            glued.append(t)
        orders_agree = tensor_equal(glued[0], glued[1], tol)
        A = glued[0]
        vs = symmetry_mpos(graph, region, model, settings, flip_y=flip_y)
        symmetric = all(tensor_equal(apply_mpo(A, V), A, tol) for V in vs.values())
        P = projector(vs, settings.normalized)
        At = pseudo_inverse(graph, region, model, settings)
        injective = tensor_equal(pseudo_inverse_product(At, A, P), P.tensor, tol)
        rows.append({
            "case": case.name,
            "kind": case.kind,
            "shared": case.shared,
            "orders_agree": orders_agree,
            "symmetric": symmetric,
            "injective": injective,
            "pass": orders_agree and symmetric and injective,
        })
    return rows
