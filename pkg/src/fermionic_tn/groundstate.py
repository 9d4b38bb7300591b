"""Minimal-torus ground states: closure tensors, their symmetrization and the degeneracy.

The closure tensor ``M(g, h)`` lives on a square with corners
``alpha, g alpha, gh alpha, h alpha`` (vertex slots 0..3). Its four edge
modes sit on the oriented edges ``1>0``, ``2>1`` (theta) and ``2>3``,
``3>0`` (theta-bar). Two conjugation conventions appear and are kept
apart: :meth:`FiniteGroup.conj_by_inverse` is ``alpha^-1 g alpha`` and :meth:`FiniteGroup.conj` is
``k g k^-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .config import Settings
from .ftensor import FermionicTensor, tensor_equal
from .grassmann import Gen, Grassmann
from .groups import Model, c_omega, centralizer, is_c_regular, pair_conjugacy_classes
from .lattice import MpoRing, edge_name, vertex_leg
from .mpo import apply_mpo, assemble_v
from .scalars import Gaussian, is_zero, scalar_close

__all__ = [
    "ConditionViolated",
    "InternalMismatch",
    "ClosureState",
    "CLOSURE_RING",
    "lambda_coeff",
    "build_m",
    "eta",
    "build_m_prime",
    "degeneracy",
    "degeneracy_by_rank",
    "eta_trivial",
    "admissible",
    "class_table",
    "exact_rank",
    "verify_eta_identity",
    "verify_vanishing_criterion",
    "degeneracy_report",
]


class ConditionViolated(ValueError):
    """The pair does not commute or has asymmetric s."""


class InternalMismatch(RuntimeError):
    """The MPO route and the closed form for M'(g, h) disagree."""


# walk alpha -> g alpha -> gh alpha -> h alpha; one Y at the alpha corner
CLOSURE_EDGES = ((1, 0), (2, 1), (2, 3), (3, 0))
CLOSURE_RING = MpoRing((0, 1, 2, 3), ("-", "-", "+", "+"), frozenset({0}), CLOSURE_EDGES)
CLOSURE_LEGS = tuple(vertex_leg(i) for i in range(4))
CLOSURE_MODES = frozenset(
    {Gen(edge_name(1, 0), False), Gen(edge_name(2, 1), False), Gen(edge_name(2, 3), True), Gen(edge_name(3, 0), True)}
)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def admissible(model: Model, g: int, h: int) -> bool:
    G, s = model.group, model.s
    return G.commute(g, h) and s(g, h) == s(h, g)


@dataclass(frozen=True)
class ClosureState:
    pair: tuple[int, int]
    tensor: FermionicTensor

    def vector(self) -> dict:
        """Coordinates keyed by ``(leg values, monomial)``."""
        return {(k, mono): c for k, v in self.tensor.entries.items() for mono, c in v.terms.items()}

    def is_zero(self) -> bool:
        return self.tensor.is_zero()


def lambda_coeff(model: Model, alpha: int, g: int, h: int):
    G, s, w = model.unpack()
    m, inv = G.mul, G.inv

    def ca(x):
        return G.conj_by_inverse(x, alpha)

    gi, hi = ca(inv(g)), ca(inv(h))
    ratio = w(h, g, alpha) * w(h, m(g, alpha), gi) * w.inv(g, h, alpha) * w.inv(g, m(h, alpha), hi)
    e1 = s(m(g, h, alpha), hi) * s(m(g, alpha), gi) + s(m(h, g, alpha), gi) * s(m(h, alpha), hi)
    e2 = (s(h, alpha) + s(m(h, alpha), hi)) * (s(g, alpha) + s(m(g, alpha), gi)) + s(m(h, g), alpha)
    return ratio * _sign(e1 + e2)


def build_m(model: Model, g: int, h: int, check: bool = True) -> ClosureState:
    """``sum_alpha lambda(alpha; g, h) |alpha, g alpha, gh alpha, h alpha>`` with its four edge modes."""
    if check and not admissible(model, g, h):
        raise ConditionViolated(f"pair {(g, h)} is excluded: needs [g,h]=0 and s(g,h)=s(h,g)")
    G, s, _ = model.unpack()
    m, inv = G.mul, G.inv
    entries: dict = {}
    for a in G.elements:
        gi, hi = G.conj_by_inverse(inv(g), a), G.conj_by_inverse(inv(h), a)
        word = [
            (Gen(edge_name(1, 0), False), s(m(g, a), gi)),
            (Gen(edge_name(2, 1), False), s(m(h, g, a), hi)),
            (Gen(edge_name(2, 3), True), s(m(g, h, a), gi)),
            (Gen(edge_name(3, 0), True), s(m(h, a), hi)),
        ]
        key = (a, m(g, a), m(g, h, a), m(h, a))
        val = Grassmann.word([x for x, e in word if e], lambda_coeff(model, a, g, h))
        entries[key] = entries[key] + val if key in entries else val
    return ClosureState((g, h), FermionicTensor.from_entries(CLOSURE_LEGS, CLOSURE_MODES, entries, G.order))


def eta(model: Model, g: int, h: int, k: int):
    G, s, w = model.unpack()
    m, inv = G.mul, G.inv
    ki = inv(k)
    gk, hk = G.conj(g, k), G.conj(h, k)
    ratio = (
        w(g, ki, hk) * w(ki, hk, gk) * w(h, g, ki)
        * w.inv(h, ki, gk) * w.inv(ki, gk, hk) * w.inv(g, h, ki)
    )
    kh, kg, kgh = m(k, h), m(k, g), m(k, g, h)
    e = (s(ki, kh) + s(kh, ki)) * (s(ki, kg) + s(kg, ki)) + s(ki, kgh) + s(kgh, ki)
    return ratio * _sign(e)


def _frac(n: int, exact: bool):
    return Gaussian(Fraction(1, n)) if exact else 1 / n


def _m_prime_closed(model: Model, g: int, h: int, exact: bool) -> FermionicTensor:
    G = model.group
    out = None
    for k in G.elements:
        term = build_m(model, G.conj(g, k), G.conj(h, k), check=False).tensor.scale(eta(model, g, h, k))
        out = term if out is None else out + term
    return out.scale(_frac(G.order, exact))


def _m_prime_mpo(model: Model, g: int, h: int, settings: Settings) -> FermionicTensor:
    G = model.group
    M = build_m(model, g, h).tensor
    out = None
    for k in G.elements:
        term = apply_mpo(M, assemble_v(None, None, model, k, settings, ring=CLOSURE_RING))
        out = term if out is None else out + term
    return out.scale(_frac(G.order, settings.exact))


def build_m_prime(model: Model, g: int, h: int, method: str = "both", settings: Settings = Settings()) -> ClosureState:
    """``M'(g, h) = (1/|G|) sum_k V(k) M(g, h)``.

    ``method`` is ``"closed"`` (the eta sum), ``"mpo"`` (four-edge ring
    MPO acting on M) or ``"both"``, which computes the two and raises
    :class:`InternalMismatch` if they differ.
    """
    if not admissible(model, g, h):
        raise ConditionViolated(f"pair {(g, h)} is excluded: needs [g,h]=0 and s(g,h)=s(h,g)")
    if not settings.exact:
        model = model.as_float()
    if method == "closed":
        return ClosureState((g, h), _m_prime_closed(model, g, h, settings.exact))
    if method == "mpo":
        return ClosureState((g, h), _m_prime_mpo(model, g, h, settings))
    if method != "both":
        raise ValueError(f"unknown method {method!r}")
    closed = _m_prime_closed(model, g, h, settings.exact)
    via_mpo = _m_prime_mpo(model, g, h, settings)
    if not tensor_equal(closed, via_mpo, settings.tolerance):
        raise InternalMismatch(f"M'{(g, h)}: MPO action and closed form differ")
    return ClosureState((g, h), closed)


# ---------------------------------------------------------------------------
# counting


def class_table(model: Model, settings: Settings = Settings(), with_states: bool = True) -> list[dict]:
    """One row per pair conjugacy class."""
    G, s, w = model.unpack()
    rows = []
    for cls in pair_conjugacy_classes(G):
        g, h = cls.representative
        commuting = G.commute(g, h)
        sym = s(g, h) == s(h, g)
        row = {
            "rep": [g, h],
            "size": len(cls),
            "commuting": commuting,
            "s_symmetric": sym,
            "c_regular": bool(commuting and is_c_regular(G, w, cls, settings.tolerance)),
            "eta_trivial": bool(commuting and sym and eta_trivial(model, g, h, settings.tolerance)),
        }
        if with_states:
            row["mprime_nonzero"] = bool(commuting and sym and not build_m_prime(model, g, h, "closed", settings).is_zero())
        rows.append(row)
    return rows


def eta_trivial(model: Model, g: int, h: int, tol: float = 0.0) -> bool:
    """``eta_g(h, k) = 1`` for every ``k`` in the centralizer of ``(g, h)``."""
    one = Gaussian(1)
    return all(scalar_close(Gaussian(0) + eta(model, g, h, k), one, tol) for k in centralizer(model.group, g, h))


def degeneracy(model: Model, criterion: str = "c-regular") -> int:
    """Number of commuting, s-symmetric pair conjugacy classes passing ``criterion``.

    ``"c-regular"`` is the class-counting rule. ``"eta"`` asks directly for a
    trivial ``eta_g(h, .)`` on the centralizer; the two differ only when
    ``s`` is asymmetric between a pair and some centralizer element.
    """
    key = {"c-regular": "c_regular", "eta": "eta_trivial"}[criterion]
    return sum(r["commuting"] and r["s_symmetric"] and r[key] for r in class_table(model, with_states=False))


def exact_rank(rows: list[list]) -> int:
    """Rank over the Gaussian rationals by Gauss-Jordan elimination."""
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if not is_zero(mat[i][col])), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and not is_zero(mat[i][col]):
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def _float_rank(rows: list[list]) -> int:
    import numpy as np

    if not rows:
        return 0
    sv = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
    return int((sv > 1e-8).sum())


def degeneracy_by_rank(model: Model, settings: Settings = Settings(), method: str = "closed") -> int:
    """Rank of ``{M'(g, h)}`` over all admissible pairs."""
    G = model.group
    vecs = [
        build_m_prime(model, g, h, method, settings).vector()
        for g, h in itertools.product(G.elements, repeat=2)
        if admissible(model, g, h)
    ]
    keys = sorted({k for v in vecs for k in v})
    zero = Gaussian(0) if settings.exact else 0j
    rows = [[v.get(k, zero) for k in keys] for v in vecs]
    return exact_rank(rows) if settings.exact else _float_rank(rows)


# ---------------------------------------------------------------------------
# appendix identities


def verify_eta_identity(model: Model, tol: float = 0.0):
    """``eta_{g^t}(x^t, y t^-1) = eta_g(x, y) / eta_g(x, t)`` on all of G^4.

    Returns ``None`` or the first violating ``(g, x, y, t)``.
    """
    G = model.group
    for g, x, y, t in itertools.product(G.elements, repeat=4):
        lhs = eta(model, G.conj(g, t), G.conj(x, t), G.mul(y, G.inv(t)))
        rhs = eta(model, g, x, y) / eta(model, g, x, t)
        if not scalar_close(Gaussian(0) + lhs, Gaussian(0) + rhs, tol):
            return (g, x, y, t)
    return None


def verify_vanishing_criterion(model: Model, settings: Settings = Settings()) -> dict:
    """Check ``M'(g,h) = 0 <=> sum_{k in Z(g,h)} eta_g(h,k) = 0`` and the eta/c relation.

    The eta/c relation is checked for every admissible pair and every
    centralizer element ``k`` with ``s`` symmetric on ``(g, k)`` and
    ``(h, k)``; outside that set it is not expected to hold. Returns
    ``{"vanishing": None | pair, "etac": None | triple, "etac_checked": n}``.
    """
    G, s, w = model.unpack()
    tol = settings.tolerance
    vanishing = etac = None
    checked = 0
    for g, h in itertools.product(G.elements, repeat=2):
        if not admissible(model, g, h):
            continue
        Z = centralizer(G, g, h)
        total = sum((eta(model, g, h, k) for k in Z), Gaussian(0))
        zero_sum = is_zero(total, tol or 1e-12) if not isinstance(total, Gaussian) else not total
        if zero_sum != build_m_prime(model, g, h, "closed", settings).is_zero() and vanishing is None:
            vanishing = (g, h)
        for k in Z:
            if s(g, k) != s(k, g) or s(h, k) != s(k, h):
                continue
            ki = G.inv(k)
            checked += 1
            lhs = eta(model, g, h, k)
            rhs = c_omega(G, w, g, ki, h) / c_omega(G, w, g, h, ki)
            if not scalar_close(Gaussian(0) + lhs, Gaussian(0) + rhs, tol) and etac is None:
                etac = (g, h, k)
    return {"vanishing": vanishing, "etac": etac, "etac_checked": checked}


def degeneracy_report(model: Model, settings: Settings = Settings()) -> dict:
    rows = class_table(model, settings)
    count = sum(r["commuting"] and r["s_symmetric"] and r["c_regular"] for r in rows)
    rank = degeneracy_by_rank(model, settings)
    return {"model": model.name, "classes": rows, "degeneracy": count, "degeneracy_by_rank": rank, "agree": count == rank}
