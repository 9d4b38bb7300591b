"""Fermionic toric code: hexagon patch, plaquette operator and the eigenstate check.

Hexagon geometry (lattice coordinates, centre ``v0 = (0, 0)``): spoke
``k = 0..5`` runs to ``(1,0), (0,1), (-1,1), (-1,0), (0,-1), (1,-1)``,
counter-clockwise. The six plaquette spins ``i..n`` are the physical
indices on spokes 0..5 and fermion ``c_a`` (``a = 1..6``) is the physical
mode of the triangle between spokes ``a-1`` and ``a``. With this labeling
the fermion content of every table row matches the occupations forced by
the adjacent spins (checked in the tests).

Fock states are pairs ``(spins, occupations)`` of 6-tuples. Fermionic
operators act with Jordan-Wigner strings in a chosen mode order; the same
order names the Grassmann generators of the patch, so a monomial
``theta_{a1} ... theta_{ak}`` in canonical order maps to
``c+_{a1} ... c+_{ak} |vac>``.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from typing import Sequence

from .config import Settings
from .groups import Model, builtin_model
from .lattice import Region, edge_name, region_tensor, triangular_patch, vertex_leg
from .scalars import Gaussian, conj, is_zero, scalar_close

__all__ = [
    "TABLE_I",
    "PlaquetteEntry",
    "FockOperator",
    "ftc_model",
    "matching_alpha",
    "matching_beta",
    "plaquette_entries",
    "build_plaquette",
    "HexPatch",
    "build_hexagon",
    "gauge_phase",
    "plaquette_algebra",
    "verify_plaquette_eigenstate",
    "vertex_consistency",
    "SPOKES",
    "CENTER",
]

CENTER = (0, 0)
SPOKES = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
DEFAULT_ORDER = (1, 2, 3, 4, 5, 6)

# Rows as printed: (spins, sign, power of alpha, power of beta, operator string).
# "cK+" is a creator, "cK" an annihilator; the rightmost factor acts first.
TABLE_I = (
    ("000000", -1, 1, -1, "c3+ c6+"),
    ("100000", 1, 0, 0, "c3+ c1"),
    ("010000", 1, 0, -2, "c1+ c2+ c3+ c6+"),
    ("001000", 1, 0, 0, "c6+ c2"),
    ("000100", 1, 0, 0, "c6+ c4"),
    ("000010", -1, 0, -2, "c3+ c4+ c5+ c6+"),
    ("000001", 1, 0, 0, "c3+ c5"),
    ("110000", -1, 0, -1, "c2+ c3+"),
    ("011000", -1, 0, -1, "c1+ c6+"),
    ("001100", -1, 0, 1, "c6+ c4 c3 c2"),
    ("000110", 1, 0, -1, "c5+ c6+"),
    ("000011", -1, 0, -1, "c3+ c4+"),
    ("100001", 1, 0, 1, "c3+ c6 c5 c1"),
    ("101000", -1, 1, 1, "c2 c1"),
    ("010100", 1, 1, -1, "c1+ c2+ c6+ c4"),
    ("001010", -1, 1, -1, "c4+ c5+ c6+ c2"),
    ("000101", 1, 1, 1, "c5 c4"),
    ("100010", -1, 1, -1, "c3+ c4+ c5+ c1"),
    ("010001", 1, 1, -1, "c1+ c2+ c3+ c5"),
    ("100100", -1, 1, 1, "c4 c1"),
    ("010010", 1, 1, -2, "c1+ c2+ c3+ c4+ c5+ c6+"),
    ("001001", 1, 1, 1, "c5 c2"),
    ("000111", 1, 0, 0, ""),
    ("001110", -1, 0, 0, "c5+ c6+ c3 c2"),
    ("011100", 1, 0, 0, "c1+ c6+ c4 c3"),
    ("101100", 1, 1, 2, "c4 c3 c2 c1"),
    ("010110", 1, 1, -2, "c1+ c2+ c5+ c6+"),
    ("001011", -1, 1, 0, "c4+ c2"),
    ("100101", -1, 1, 2, "c6 c5 c4 c1"),
    ("110010", 1, 1, -2, "c2+ c3+ c4+ c5+"),
    ("011001", -1, 1, 0, "c1+ c5"),
    ("010101", -1, 0, 0, "c4+ c5+ c2 c1"),
)

# Two printed rows are inconsistent with the patch and are amended:
#  * 010101: its operator empties modes 1, 2 and fills 4, 5, which is the
#    fermion content of the transition starting from 101010; the row is
#    read with that source (its conjugate then covers 010101).
#  * 010010: six creators carry beta^-3 under the gauge map, not beta^-2;
#    the sign is fixed by the eigenstate check.
CORRECTIONS = {
    "010101": ("101010", -1, 0, 0, "c4+ c5+ c2 c1"),
    "010010": ("010010", -1, 1, -3, "c1+ c2+ c3+ c4+ c5+ c6+"),
}


def _bits(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


def _parse_ops(ops: str) -> tuple[tuple[int, bool], ...]:
    out = []
    for tok in ops.split():
        dag = tok.endswith("+")
        out.append((int(tok[1:].rstrip("+")), dag))
    return tuple(out)


@dataclass(frozen=True)
class PlaquetteEntry:
    source: tuple[int, ...]
    sign: int
    alpha_power: int
    beta_power: int
    ops: tuple[tuple[int, bool], ...]

    def coefficient(self, alpha, beta):
        return self.sign * alpha**self.alpha_power * beta**self.beta_power

    def gauge_weight_ok(self) -> bool:
        """Each creator carries ``beta^-1/2`` and each annihilator ``beta^1/2``."""
        created = sum(d for _, d in self.ops)
        return 2 * self.beta_power == (len(self.ops) - created) - created


def plaquette_entries(corrected: bool = True) -> list[PlaquetteEntry]:
    rows = []
    for row in TABLE_I:
        if corrected and row[0] in CORRECTIONS:
            row = CORRECTIONS[row[0]]
        spins, sign, ap, bp, ops = row
        rows.append(PlaquetteEntry(_bits(spins), sign, ap, bp, _parse_ops(ops)))
    return rows


def apply_ops(ops: Sequence[tuple[int, bool]], occ: tuple[int, ...], order: Sequence[int] = DEFAULT_ORDER):
    """Act with a product of creators/annihilators (rightmost first).

    Returns ``(sign, new_occ)`` or ``None`` if the product annihilates the
    state. ``order`` fixes the Jordan-Wigner ordering of modes ``1..6``.
    """
    pos = {mode: i for i, mode in enumerate(order)}
    cur = list(occ)
    sign = 1
    for mode, dag in reversed(ops):
        j = mode - 1
        if cur[j] == int(dag):
            return None
        # modes before this one in the chosen order
        if sum(cur[m - 1] for m in order[: pos[mode]]) % 2:
            sign = -sign
        cur[j] = int(dag)
    return sign, tuple(cur)


@dataclass
class FockOperator:
    """Sparse operator on (6 spins) x (6 fermion modes); ``rows[out][in] = value``."""

    rows: dict

    def _add(self, out, inp, val):
        row = self.rows.setdefault(out, {})
        row[inp] = row[inp] + val if inp in row else val

    def apply(self, vec: dict) -> dict:
        out = {}
        for state, cols in self.rows.items():
            acc = None
            for inp, val in cols.items():
                if inp in vec:
                    term = val * vec[inp]
                    acc = term if acc is None else acc + term
            if acc is not None and not is_zero(acc):
                out[state] = acc
        return out

    def matmul(self, other: "FockOperator") -> "FockOperator":
        res = FockOperator({})
        by_row = {}
        for mid, cols in other.rows.items():
            for inp, val in cols.items():
                by_row.setdefault(mid, []).append((inp, val))
        for out, cols in self.rows.items():
            for mid, a in cols.items():
                for inp, b in by_row.get(mid, ()):
                    res._add(out, inp, a * b)
        res.rows = {o: {i: v for i, v in c.items() if not is_zero(v)} for o, c in res.rows.items()}
        res.rows = {o: c for o, c in res.rows.items() if c}
        return res

    def is_hermitian(self, tol: float = 0.0) -> bool:
        for out, cols in self.rows.items():
            for inp, val in cols.items():
                back = self.rows.get(inp, {}).get(out, 0)
                if not scalar_close(Gaussian(0) + back, Gaussian(0) + conj(val), tol):
                    return False
        return True

    def support(self) -> set:
        return {inp for cols in self.rows.values() for inp in cols}

    def nnz(self) -> int:
        return sum(len(c) for c in self.rows.values())


def build_plaquette(alpha, beta, order: Sequence[int] = DEFAULT_ORDER, corrected: bool = True) -> FockOperator:
    """``Q_p`` from the table rows plus their Hermitian conjugates.

    A row with source spins ``g`` maps ``|g, n>`` to ``|g + 1, n'>`` with the
    tabulated coefficient times the fermionic sign; the conjugate row maps back.
    """
    if is_zero(beta):
        raise ValueError("beta must be nonzero")
    Q = FockOperator({})
    for entry in plaquette_entries(corrected):
        coeff = entry.coefficient(alpha, beta)
        target = tuple(1 - x for x in entry.source)
        for occ in itertools.product((0, 1), repeat=6):
            res = apply_ops(entry.ops, occ, order)
            if res is None:
                continue
            sign, new = res
            val = coeff * sign
            Q._add((target, new), (entry.source, occ), val)
            Q._add((entry.source, occ), (target, new), conj(val))
    return Q


# ---------------------------------------------------------------------------
# tensor side


def ftc_model(sign: str | int) -> Model:
    """``(Z2, s, omega)`` with ``s(1,1) = 1`` and ``omega(1,1,1) = +-i``."""
    plus = sign in ("+", 1, "+1")
    return builtin_model("ftc+" if plus else "ftc-")


def matching_alpha(model: Model):
    """Plaquette parameter that pairs with the tensors: the conjugate of ``omega(1,1,1)``."""
    return conj(model.omega(1, 1, 1))


def matching_beta(model: Model, berezin_sign: int = Settings().berezin_sign):
    """Gauge parameter fixed by the tensors: ``-sign * omega(1,1,1)``.

    With the default measure this is ``-i`` for ``ftc-`` and ``+i`` for ``ftc+``.
    """
    return -berezin_sign * model.omega(1, 1, 1)


@dataclass(frozen=True)
class HexPatch:
    """``A_hex`` as Fock vectors, one per boundary configuration.

    ``states[outer][v0]`` maps ``(spins, occupations)`` to amplitudes, where
    ``outer`` lists the boundary vertex values in spoke order. ``rim``
    records the boundary virtual monomial that was factored out.
    """

    states: dict
    rim: dict
    order: tuple

    def vector(self, outer, v0) -> dict:
        if v0 == "summed":
            out: dict = {}
            for part in self.states[outer].values():
                for k, v in part.items():
                    out[k] = out[k] + v if k in out else v
            return {k: v for k, v in out.items() if not is_zero(v)}
        return self.states[outer].get(v0, {})


def _hexagon_triangles():
    graph, tris = triangular_patch("hexagon")
    fermion_tri = {}
    for a in range(1, 7):
        pair = {SPOKES[a - 1], SPOKES[a % 6]}
        (tri,) = [t for t in tris if pair <= set(t)]
        fermion_tri[a] = tri
    return graph, tris, fermion_tri


def gauge_phase(model: Model, beta, berezin_sign: int = Settings().berezin_sign):
    """``lam`` with ``lam^2 = matching_beta / beta``.

    Every plaquette row carries ``beta^((n_ann - n_cre)/2)``, and every row
    moves an even number of fermions, so rotating each occupied mode by
    ``lam`` trades the tensors' own gauge for any other ``beta``.
    """
    r = matching_beta(model, berezin_sign) / beta
    for lam in (Gaussian(1), Gaussian(0, 1), Gaussian(-1), Gaussian(0, -1)):
        if scalar_close(Gaussian(0) + lam * lam, Gaussian(0) + r, 0.0):
            return lam
    return cmath.sqrt(complex(r))


def build_hexagon(
    model: Model,
    settings: Settings = Settings(),
    order: Sequence[int] = DEFAULT_ORDER,
    beta=None,
) -> HexPatch:
    """Contract the six triangles and convert amplitudes to Fock vectors.

    The physical mode of the triangle hosting ``c_a`` is named so that the
    canonical generator order equals ``order``. Rim (boundary virtual) modes
    are moved to the front of each monomial and stripped. With ``beta`` set,
    an occupation-``N`` amplitude is multiplied by ``gauge_phase^N``.
    """
    lam = None if beta is None else gauge_phase(model, beta, settings.berezin_sign)
    if lam is not None and not settings.exact:
        lam = complex(lam)
    if not settings.exact:
        model = model.as_float()
    graph, tris, fermion_tri = _hexagon_triangles()
    order = tuple(order)
    name_of = {fermion_tri[a]: f"c{order.index(a)}" for a in range(1, 7)}
    mode_of = {f"c{order.index(a)}": a for a in range(1, 7)}
    region = Region(graph, tuple(tris))
    A = region_tensor(
        graph, region, *model.unpack(), settings.berezin_sign, sum_inner=False,
        phys_names=[name_of[t] for t in tris],
    )
    spoke_legs = ["p" + edge_name(*graph.oriented(CENTER, x)) for x in SPOKES]
    states: dict = {}
    rim: dict = {}
    for asg, val in A.items():
        outer = tuple(asg[vertex_leg(x)] for x in SPOKES)
        v0 = asg[vertex_leg(CENTER)]
        spins = tuple(asg[leg] for leg in spoke_legs)
        for mono, c in val.terms.items():
            phys = [g for g in mono if g.bond in mode_of]
            border = tuple(g for g in mono if g.bond not in mode_of)
            # move rim generators in front of the physical ones
            swaps = 0
            seen = 0
            for g in mono:
                if g.bond in mode_of:
                    seen += 1
                else:
                    swaps += seen
            if rim.setdefault(outer, border) != border:
                raise ValueError(f"boundary configuration {outer} carries two rim monomials")
            occ = tuple(int(any(mode_of[g.bond] == a for g in phys)) for a in range(1, 7))
            coeff = -c if swaps % 2 else c
            if lam is not None:
                coeff = coeff * lam ** sum(occ)
            bucket = states.setdefault(outer, {}).setdefault(v0, {})
            key = (spins, occ)
            bucket[key] = bucket[key] + coeff if key in bucket else coeff
    return HexPatch(states, rim, order)


def _vec_equal(a: dict, b: dict, tol: float) -> bool:
    for k in set(a) | set(b):
        x, y = a.get(k, 0), b.get(k, 0)
        if not scalar_close(Gaussian(0) + x, Gaussian(0) + y, tol):
            return False
    return True


def verify_plaquette_eigenstate(
    model: Model,
    alpha=None,
    beta=None,
    settings: Settings = Settings(),
    order: Sequence[int] = DEFAULT_ORDER,
    corrected: bool = True,
) -> dict:
    """``Q_p A_hex = A_hex`` and the loop-insertion swap for every boundary configuration.

    ``alpha`` defaults to :func:`matching_alpha` and ``beta`` to ``-i``; the
    patch is brought to that ``beta`` by :func:`gauge_phase`.
    """
    alpha = matching_alpha(model) if alpha is None else alpha
    beta = Gaussian(0, -1) if beta is None else beta
    if not settings.exact:
        alpha, beta = complex(alpha), complex(beta)
    tol = settings.tolerance
    Q = build_plaquette(alpha, beta, order, corrected)
    patch = build_hexagon(model, settings, order, beta)
    rows = []
    for outer in sorted(patch.states):
        a0, a1 = patch.vector(outer, 0), patch.vector(outer, 1)
        total = patch.vector(outer, "summed")
        rows.append({
            "boundary": list(outer),
            "eigenstate": _vec_equal(Q.apply(total), total, tol),
            "loop_0_to_1": _vec_equal(Q.apply(a0), a1, tol),
            "loop_1_to_0": _vec_equal(Q.apply(a1), a0, tol),
        })
    return {
        "alpha": str(alpha),
        "beta": str(beta),
        "configurations": len(rows),
        "eigenstate_ok": sum(r["eigenstate"] for r in rows),
        "loop_ok": sum(r["loop_0_to_1"] and r["loop_1_to_0"] for r in rows),
        "pass": len(rows) == 64 and all(r["eigenstate"] and r["loop_0_to_1"] and r["loop_1_to_0"] for r in rows),
        "rows": rows,
    }


def vertex_consistency(model: Model, settings: Settings = Settings()) -> bool:
    """Each triangle's fermion occupation equals ``s`` of its two spokes in branching order.

    Spokes are read as the physical labels ``p = v_tail^-1 v_head``; the
    third edge of each triangle is a rim edge, whose label is fixed by the
    boundary and enters through the group law.
    """
    graph, tris, fermion_tri = _hexagon_triangles()
    G, s = model.group, model.s
    patch = build_hexagon(model, settings)
    for outer, by_v0 in patch.states.items():
        for v0, vec in by_v0.items():
            labels = {CENTER: v0, **dict(zip(SPOKES, outer))}
            for (spins, occ), amp in vec.items():
                if is_zero(amp):
                    continue
                for a in range(1, 7):
                    x, y, z = graph.branching_order(fermion_tri[a])
                    p01 = G.mul(G.inv(labels[x]), labels[y])
                    p12 = G.mul(G.inv(labels[y]), labels[z])
                    if occ[a - 1] != s(p01, p12):
                        return False
                # spins must agree with the vertex labels
                for k, x in enumerate(SPOKES):
                    t, h = graph.oriented(CENTER, x)
                    if spins[k] != G.mul(G.inv(labels[t]), labels[h]):
                        return False
    return True


def plaquette_algebra(alpha, beta, order: Sequence[int] = DEFAULT_ORDER, corrected: bool = True) -> dict:
    """Hermiticity and the square of ``Q_p`` on the states it touches.

    ``Q_p`` squares to the identity on its support, so the projector onto
    its +1 eigenspace is ``(1 + Q_p) / 2``; ``Q_p^2 = Q_p`` itself fails.
    """
    Q = build_plaquette(alpha, beta, order, corrected)
    Q2 = Q.matmul(Q)
    support = Q.support()
    one = Gaussian(1)

    def is_identity(op):
        if set(op.rows) != support:
            return False
        return all(set(cols) == {k} and scalar_close(Gaussian(0) + cols[k], one, 0.0) for k, cols in op.rows.items())

    def same(a, b):
        keys = set(a.rows) | set(b.rows)
        for k in keys:
            ra, rb = a.rows.get(k, {}), b.rows.get(k, {})
            for j in set(ra) | set(rb):
                if not scalar_close(Gaussian(0) + ra.get(j, 0), Gaussian(0) + rb.get(j, 0), 0.0):
                    return False
        return True

    return {
        "support": len(support),
        "nonzeros": Q.nnz(),
        "hermitian": Q.is_hermitian(),
        "involution_on_support": is_identity(Q2),
        "idempotent": same(Q2, Q),
    }
