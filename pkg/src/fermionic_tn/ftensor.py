"""Fermionic tensors and the builders for the triangle, MPO and sign tensors.

A :class:`FermionicTensor` has named bosonic legs (each ranging over the
group) and named fermionic modes. Its entries map a tuple of leg values to
a :class:`~fermionic_tn.grassmann.Grassmann` element. Legs that two tensors
share by name are identified when contracting; the ones listed in a
:class:`BondMap` are additionally summed. Fermionic bonds are integrated
out with the Berezin measure.

Builders use local names. Triangle tensors have virtual legs
``v0, v1, v2``, physical legs ``p01, p12, p02``, edge modes
``e01, e12, e02`` and the physical mode ``phys``. Grassmann factors are
multiplied in exactly the printed order and then canonicalized.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .config import NETWORK_BEREZIN_SIGN
from .grassmann import Gen, Grassmann, Parity, bond_contract
from .groups import Cocycle2, FiniteGroup, SuperCocycle3
from .scalars import Gaussian

__all__ = [
    "TensorError",
    "ParityViolation",
    "LegMismatch",
    "SignatureMismatch",
    "FermionicTensor",
    "BondMap",
    "contract",
    "tensor_equal",
    "tensor_deviation",
    "build_a",
    "build_a_tilde",
    "build_t",
    "build_y",
    "identity_tensor",
]


class TensorError(ValueError):
    pass


class ParityViolation(TensorError):
    pass


class LegMismatch(TensorError):
    pass


class SignatureMismatch(TensorError):
    pass


LEG_ROLES = ("physical", "virtual-in", "virtual-out")


@dataclass(frozen=True)
class FermionicTensor:
    legs: tuple[str, ...]
    modes: frozenset  # of Gen
    entries: Mapping[tuple, Grassmann]
    order: int
    roles: Mapping[str, str] = field(default_factory=dict, compare=False)
    check_parity: bool = field(default=True, compare=False)

    def __post_init__(self):
        if len(set(self.legs)) != len(self.legs):
            raise LegMismatch(f"duplicate leg names in {self.legs}")
        for key, val in self.entries.items():
            if len(key) != len(self.legs):
                raise LegMismatch(f"entry {key} does not match legs {self.legs}")
            extra = val.generators() - self.modes
            if extra:
                raise TensorError(f"entry {key} uses undeclared generators {sorted(extra)}")
            if self.check_parity and val.parity() not in (Parity.EVEN, Parity.ZERO):
                raise ParityViolation(f"entry {key} has parity {val.parity().value}: {val!r}")

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_entries(cls, legs, modes, entries, order, roles=None, check_parity=True):
        clean = {tuple(k): v for k, v in entries.items() if not v.is_zero()}
        return cls(tuple(legs), frozenset(modes), clean, order, dict(roles or {}), check_parity)

    @property
    def bonds(self) -> set[str]:
        return {g.bond for g in self.modes}

    def get(self, **values) -> Grassmann:
        key = tuple(values[leg] for leg in self.legs)
        return self.entries.get(key, Grassmann())

    def items(self):
        for key, val in self.entries.items():
            yield dict(zip(self.legs, key)), val

    def relabel(self, legs: Mapping[str, str] | None = None, bonds: Mapping[str, str] | None = None) -> "FermionicTensor":
        legs = dict(legs or {})
        bonds = dict(bonds or {})
        new_legs = tuple(legs.get(x, x) for x in self.legs)
        modes = frozenset(Gen(bonds.get(g.bond, g.bond), g.conj) for g in self.modes)
        if len(modes) != len(self.modes):
            raise LegMismatch("mode relabeling collides two generators")
        entries = {k: v.rename(bonds) for k, v in self.entries.items()} if bonds else dict(self.entries)
        roles = {legs.get(k, k): r for k, r in self.roles.items()}
        return FermionicTensor.from_entries(new_legs, modes, entries, self.order, roles, self.check_parity)

    def transpose(self, legs: Iterable[str]) -> "FermionicTensor":
        legs = tuple(legs)
        if set(legs) != set(self.legs):
            raise SignatureMismatch(f"{legs} is not a permutation of {self.legs}")
        perm = [self.legs.index(x) for x in legs]
        entries = {tuple(k[i] for i in perm): v for k, v in self.entries.items()}
        return FermionicTensor(legs, self.modes, entries, self.order, self.roles, self.check_parity)

    def scale(self, c) -> "FermionicTensor":
        return FermionicTensor.from_entries(
            self.legs, self.modes, {k: v.scale(c) for k, v in self.entries.items()}, self.order, self.roles, self.check_parity
        )

    def __add__(self, other: "FermionicTensor") -> "FermionicTensor":
        other = other.transpose(self.legs)
        entries = dict(self.entries)
        for k, v in other.entries.items():
            entries[k] = entries[k] + v if k in entries else v
        return FermionicTensor.from_entries(
            self.legs, self.modes | other.modes, entries, self.order, self.roles, self.check_parity
        )

    def __neg__(self):
        return self.scale(-1)

    def map_entries(self, fn) -> "FermionicTensor":
        """Apply ``fn(assignment_dict, value) -> Grassmann`` entrywise."""
        return FermionicTensor.from_entries(
            self.legs,
            self.modes,
            {k: fn(dict(zip(self.legs, k)), v) for k, v in self.entries.items()},
            self.order,
            self.roles,
            self.check_parity,
        )

    def sum_legs(self, legs: Iterable[str]) -> "FermionicTensor":
        legs = set(legs)
        keep = tuple(x for x in self.legs if x not in legs)
        idx = [self.legs.index(x) for x in keep]
        out: dict = {}
        for k, v in self.entries.items():
            key = tuple(k[i] for i in idx)
            out[key] = out[key] + v if key in out else v
        roles = {k: r for k, r in self.roles.items() if k in keep}
        return FermionicTensor.from_entries(keep, self.modes, out, self.order, roles, self.check_parity)

    def fix(self, **values) -> "FermionicTensor":
        """Restrict legs to given values and drop them."""
        keep = tuple(x for x in self.legs if x not in values)
        idx = [self.legs.index(x) for x in keep]
        pos = {self.legs.index(x): v for x, v in values.items()}
        out = {
            tuple(k[i] for i in idx): v
            for k, v in self.entries.items()
            if all(k[i] == val for i, val in pos.items())
        }
        roles = {k: r for k, r in self.roles.items() if k in keep}
        return FermionicTensor.from_entries(keep, self.modes, out, self.order, roles, self.check_parity)

    def is_zero(self) -> bool:
        return not self.entries

    def to_json(self) -> dict:
        rows = {
            ",".join(map(str, k)): self.entries[k].to_json() for k in sorted(self.entries)
        }
        return {"legs": list(self.legs), "entries": rows}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class BondMap:
    """Bosonic leg pairs ``(leg of a, leg of b)`` to sum, fermionic bonds to integrate."""

    legs: tuple[tuple[str, str], ...] = ()
    modes: tuple[str, ...] = ()


def contract(
    a: FermionicTensor,
    b: FermionicTensor,
    bonds: BondMap | None = None,
    berezin_sign: int = NETWORK_BEREZIN_SIGN,
) -> FermionicTensor:
    """Contract two fermionic tensors.

    Legs of equal name are identified (kept, not summed) unless paired in
    ``bonds``; paired legs are summed. Each fermionic bond must join a theta
    on one side with a theta-bar on the other.
    """
    bonds = bonds or BondMap()
    if a.order != b.order:
        raise LegMismatch("tensors over groups of different order")
    rename = {}
    summed = set()
    for la, lb in bonds.legs:
        if la not in a.legs or lb not in b.legs:
            raise LegMismatch(f"bond ({la}, {lb}) refers to a missing leg")
        rename[lb] = la
        summed.add(la)
    if rename:
        b = b.relabel(legs=rename)
    for bond in bonds.modes:
        ga = {g for g in a.modes if g.bond == bond}
        gb = {g for g in b.modes if g.bond == bond}
        if len(ga) != 1 or len(gb) != 1 or next(iter(ga)).conj == next(iter(gb)).conj:
            raise LegMismatch(f"fermionic bond {bond!r} must pair theta with theta-bar")
    clash = (a.modes & b.modes) - {g for g in a.modes if g.bond in bonds.modes}
    if clash:
        raise LegMismatch(f"generators {sorted(clash)} appear in both tensors")

    shared = [x for x in a.legs if x in b.legs]
    b_only = [x for x in b.legs if x not in a.legs]
    ia = [a.legs.index(x) for x in shared]
    ib = [b.legs.index(x) for x in shared]
    ib_rest = [b.legs.index(x) for x in b_only]
    index: dict = {}
    for kb, vb in b.entries.items():
        index.setdefault(tuple(kb[i] for i in ib), []).append((tuple(kb[i] for i in ib_rest), vb))

    joint_legs = a.legs + tuple(b_only)
    keep = tuple(x for x in joint_legs if x not in summed)
    keep_idx = [joint_legs.index(x) for x in keep]
    out: dict = {}
    for ka, va in a.entries.items():
        for rest, vb in index.get(tuple(ka[i] for i in ia), ()):
            val = va * vb
            for bond in bonds.modes:
                val = bond_contract(val, bond, berezin_sign)
                if val.is_zero():
                    break
            if val.is_zero():
                continue
            full = ka + rest
            key = tuple(full[i] for i in keep_idx)
            out[key] = out[key] + val if key in out else val
    modes = (a.modes | b.modes) - {g for g in a.modes | b.modes if g.bond in bonds.modes}
    roles = {**b.roles, **a.roles}
    roles = {k: r for k, r in roles.items() if k in keep}
    return FermionicTensor.from_entries(keep, modes, out, a.order, roles, a.check_parity and b.check_parity)


def _aligned(a: FermionicTensor, b: FermionicTensor) -> FermionicTensor:
    if set(a.legs) != set(b.legs):
        raise SignatureMismatch(f"legs {a.legs} vs {b.legs}")
    return b.transpose(a.legs)


def tensor_equal(a: FermionicTensor, b: FermionicTensor, tol: float = 0.0) -> bool:
    b = _aligned(a, b)
    for k in set(a.entries) | set(b.entries):
        if not a.entries.get(k, Grassmann()).equals(b.entries.get(k, Grassmann()), tol):
            return False
    return True


def tensor_deviation(a: FermionicTensor, b: FermionicTensor) -> float:
    b = _aligned(a, b)
    return max(
        (a.entries.get(k, Grassmann()).max_deviation(b.entries.get(k, Grassmann())) for k in set(a.entries) | set(b.entries)),
        default=0.0,
    )


# ---------------------------------------------------------------------------
# builders


def _word(pairs, coeff) -> Grassmann:
    """Grassmann word from ``(generator, exponent)`` pairs in written order."""
    return Grassmann.word([g for g, e in pairs if e], coeff)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


TRIANGLE_LEGS = ("v0", "v1", "v2", "p01", "p12", "p02")
TRIANGLE_ROLES = {
    "v0": "virtual-in", "v1": "virtual-in", "v2": "virtual-in",
    "p01": "physical", "p12": "physical", "p02": "physical",
}


def build_a(G: FiniteGroup, s: Cocycle2, omega: SuperCocycle3, orientation: str) -> FermionicTensor:
    """Triangle tensor ``A_+`` or ``A_-``.

    Virtual vertex legs ``v0, v1, v2`` (bra side), physical edge legs
    ``p_ij = v_i^-1 v_j`` (ket side).
    """
    if orientation not in "+-":
        raise ValueError("orientation must be '+' or '-'")
    m, inv = G.mul, G.inv
    entries = {}
    for v0, v1, v2 in itertools.product(G.elements, repeat=3):
        p01, p12, p02 = m(inv(v0), v1), m(inv(v1), v2), m(inv(v0), v2)
        if orientation == "+":
            w = omega(v0, p01, p12)
            word = [
                (Gen("phys", False), s(p01, p12)),
                (Gen("e02", False), s(v0, p02)),
                (Gen("e12", True), s(v1, p12)),
                (Gen("e01", True), s(v0, p01)),
            ]
        else:
            w = omega.inv(v0, p01, p12)
            word = [
                (Gen("e01", False), s(v0, p01)),
                (Gen("e12", False), s(v1, p12)),
                (Gen("e02", True), s(v0, p02)),
                (Gen("phys", True), s(p01, p12)),
            ]
        entries[(v0, v1, v2, p01, p12, p02)] = _word(word, w)
    modes = {g for g, _ in word}
    return FermionicTensor.from_entries(TRIANGLE_LEGS, modes, entries, G.order, TRIANGLE_ROLES)


def build_a_tilde(
    G: FiniteGroup, s: Cocycle2, omega: SuperCocycle3, orientation: str, scale=1
) -> FermionicTensor:
    """Pseudo-inverse ``A~_+`` or ``A~_-``.

    Ket legs ``v0, v1, v2`` (virtual), bra legs ``p01, p12, p02``
    (physical, matched to the triangle by edge name). ``scale`` multiplies
    every entry; ``1/|G|`` pairs it with the normalized projector.
    """
    if orientation not in "+-":
        raise ValueError("orientation must be '+' or '-'")
    m, inv = G.mul, G.inv
    entries = {}
    for v0, v1, v2 in itertools.product(G.elements, repeat=3):
        p01, p12, p02 = m(inv(v0), v1), m(inv(v1), v2), m(inv(v0), v2)
        sign = _sign(s(v0, p02))
        if orientation == "+":
            w = omega.inv(v0, p01, p12)
            word = [
                (Gen("e01", False), s(v0, p01)),
                (Gen("e12", False), s(v1, p12)),
                (Gen("e02", True), s(v0, p02)),
                (Gen("phys", True), s(p01, p12)),
            ]
        else:
            w = omega(v0, p01, p12)
            word = [
                (Gen("phys", False), s(p01, p12)),
                (Gen("e02", False), s(v0, p02)),
                (Gen("e12", True), s(v1, p12)),
                (Gen("e01", True), s(v0, p01)),
            ]
        entries[(v0, v1, v2, p01, p12, p02)] = _word(word, w * sign * scale)
    modes = {g for g, _ in word}
    roles = {"v0": "virtual-out", "v1": "virtual-out", "v2": "virtual-out",
             "p01": "physical", "p12": "physical", "p02": "physical"}
    return FermionicTensor.from_entries(TRIANGLE_LEGS, modes, entries, G.order, roles)


def build_t(
    G: FiniteGroup,
    s: Cocycle2,
    omega: SuperCocycle3,
    g: int,
    orientation: str,
    names: Mapping[str, str] | None = None,
) -> FermionicTensor:
    """MPO tensor ``T_+(g)`` or ``T_-(g)`` on one boundary edge.

    Local names: ket vertex legs ``x, y`` (``|v0, v1>``, in ring order),
    bra legs ``x', y'`` (``<g v0, g v1|``), ket edge mode ``e``, bra edge
    mode ``e'``, ring bonds ``r:x`` (theta-bar) and ``r:y`` (theta).
    ``names`` relabels legs and bonds (keys among the local names; ``"x"``
    also renames ``"x'"`` and ``"r:x"`` unless given explicitly).
    """
    if orientation not in "+-":
        raise ValueError("orientation must be '+' or '-'")
    m, inv = G.mul, G.inv
    entries = {}
    for v0, v1 in itertools.product(G.elements, repeat=2):
        gv0, gv1 = m(g, v0), m(g, v1)
        if orientation == "+":
            p = m(inv(v0), v1)
            w = omega(g, v0, p)
            word = [
                (Gen("e", False), s(v0, p)),
                (Gen("r:y", False), s(g, v1)),
                (Gen("e'", True), s(gv0, p)),
                (Gen("r:x", True), s(g, v0)),
            ]
        else:
            p = m(inv(v1), v0)
            w = omega.inv(g, v1, p)
            word = [
                (Gen("r:y", False), s(g, v1)),
                (Gen("e'", False), s(gv1, p)),
                (Gen("r:x", True), s(g, v0)),
                (Gen("e", True), s(v1, p)),
            ]
        entries[(v0, v1, gv0, gv1)] = _word(word, w)
    modes = {gg for gg, _ in word}
    roles = {"x": "virtual-out", "y": "virtual-out", "x'": "virtual-in", "y'": "virtual-in"}
    t = FermionicTensor.from_entries(("x", "y", "x'", "y'"), modes, entries, G.order, roles)
    return t.relabel(**_expand_names(names)) if names else t


def _expand_names(names: Mapping[str, str]) -> dict:
    legs, bonds = {}, {}
    for key in ("x", "y"):
        if key in names:
            legs[key] = names[key]
            legs[key + "'"] = names.get(key + "'", names[key] + "'")
            bonds["r:" + key] = names.get("r:" + key, "r:" + names[key])
    if "e" in names:
        bonds["e"] = names["e"]
        bonds["e'"] = names.get("e'", names["e"] + "'")
    return {"legs": legs, "bonds": bonds}


def build_y(G: FiniteGroup, s: Cocycle2, names: Mapping[str, str] | None = None, flip: bool = False) -> FermionicTensor:
    """Diagonal sign tensor ``(-1)^{s(w v^-1, v)} |v, w><v, w|``.

    Legs ``v`` and ``w``; inside an MPO ring ``v`` is the ket label of the
    boundary vertex and ``w`` its bra label. ``flip`` negates every entry
    (mutation testing only).
    """
    m, inv = G.mul, G.inv
    entries = {}
    for v, w in itertools.product(G.elements, repeat=2):
        c = _sign(s(m(w, inv(v)), v)) * (-1 if flip else 1)
        entries[(v, w)] = Grassmann.scalar(Gaussian(c))
    t = FermionicTensor.from_entries(("v", "w"), (), entries, G.order)
    return t.relabel(legs=names) if names else t


def identity_tensor(G: FiniteGroup, legs_out: Iterable[str], legs_in: Iterable[str]) -> FermionicTensor:
    """Bosonic identity mapping each ``legs_in`` label to its ``legs_out`` partner."""
    legs_out, legs_in = tuple(legs_out), tuple(legs_in)
    entries = {}
    for vals in itertools.product(G.elements, repeat=len(legs_out)):
        entries[vals + vals] = Grassmann.one()
    return FermionicTensor.from_entries(legs_out + legs_in, (), entries, G.order)
