"""Finite groups, Z2-valued 2-cocycles and graded (super) 3-cocycles.

Groups are explicit multiplication tables over ``0..n-1`` with ``0`` the
identity. Cocycle values are stored as plain tables: ``s[a][b]`` in {0, 1}
and ``omega[a][b][c]`` a unit scalar.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .scalars import Gaussian, I, as_scalar, inverse, root_of_unity, scalar_close

__all__ = [
    "GroupError",
    "NotAssociative",
    "NoIdentity",
    "NoInverse",
    "SearchSpaceTooLarge",
    "FiniteGroup",
    "validate_group",
    "cyclic_group",
    "product_group",
    "symmetric_group_s3",
    "trivial_group",
    "Cocycle2",
    "SuperCocycle3",
    "zero_cocycle2",
    "trivial_cocycle3",
    "check_cocycle2",
    "check_graded_pentagon",
    "solve_graded_pentagon",
    "c_omega",
    "PairClass",
    "pair_conjugacy_classes",
    "centralizer",
    "Model",
    "builtin_model",
    "BUILTIN_MODELS",
    "ftc_cocycles",
    "type_iii_model",
    "is_c_regular",
    "load_model_json",
]


class GroupError(ValueError):
    pass


class NotAssociative(GroupError):
    def __init__(self, a, b, c):
        super().__init__(f"(a*b)*c != a*(b*c) at {(a, b, c)}")
        self.triple = (a, b, c)


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    def __init__(self, element):
        super().__init__(f"element {element} has no inverse")
        self.element = element


class SearchSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, *xs: int) -> int:
        out = 0
        for x in xs:
            out = self.table[out][x]
        return out

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def conj_by_inverse(self, g: int, alpha: int) -> int:
        """``alpha^-1 g alpha``."""
        return self.mul(self.inverse[alpha], g, alpha)

    def conj(self, g: int, k: int) -> int:
        """``k g k^-1``."""
        return self.mul(k, g, self.inverse[k])

    def commute(self, g: int, h: int) -> bool:
        return self.table[g][h] == self.table[h][g]

    def is_abelian(self) -> bool:
        return all(self.commute(g, h) for g in self.elements for h in self.elements)


def validate_group(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    n = len(table)
    if n == 0 or any(len(row) != n for row in table):
        raise GroupError("multiplication table must be square and non-empty")
    t = tuple(tuple(int(x) for x in row) for row in table)
    if any(not 0 <= x < n for row in t for x in row):
        raise GroupError("table entries must lie in 0..n-1")
    if any(t[0][g] != g or t[g][0] != g for g in range(n)):
        raise NoIdentity("element 0 is not a two-sided identity")
    inv = []
    for g in range(n):
        cands = [h for h in range(n) if t[g][h] == 0 and t[h][g] == 0]
        if not cands:
            raise NoInverse(g)
        inv.append(cands[0])
    for a, b, c in itertools.product(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            raise NotAssociative(a, b, c)
    return FiniteGroup(t, tuple(inv), name)


def cyclic_group(n: int) -> FiniteGroup:
    return validate_group([[(a + b) % n for b in range(n)] for a in range(n)], f"Z{n}")


def trivial_group() -> FiniteGroup:
    return validate_group([[0]], "Z1")


def product_group(*factors: FiniteGroup) -> FiniteGroup:
    """Direct product; element tuples are enumerated in row-major order."""
    tuples = list(itertools.product(*(f.elements for f in factors)))
    index = {t: i for i, t in enumerate(tuples)}
    table = [
        [index[tuple(f.table[x][y] for f, x, y in zip(factors, a, b))] for b in tuples]
        for a in tuples
    ]
    return validate_group(table, "x".join(f.name for f in factors))


def symmetric_group_s3() -> FiniteGroup:
    perms = sorted(itertools.permutations(range(3)))  # identity first
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    return validate_group(table, "S3")


# ---------------------------------------------------------------------------
# cocycles


@dataclass(frozen=True)
class Cocycle2:
    """Z2-valued function on G x G."""

    values: tuple[tuple[int, ...], ...]

    def __call__(self, a: int, b: int) -> int:
        return self.values[a][b]

    @classmethod
    def from_function(cls, G: FiniteGroup, f: Callable[[int, int], int]) -> "Cocycle2":
        return cls(tuple(tuple(int(f(a, b)) % 2 for b in G.elements) for a in G.elements))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.values)


@dataclass(frozen=True)
class SuperCocycle3:
    """Unit-scalar function on G x G x G.

    ``exponents``/``root_order`` are kept when the values come from the
    root-of-unity solver, for compact printing.
    """

    values: tuple
    root_order: int | None = None
    exponents: tuple | None = field(default=None, compare=False)

    def __call__(self, a: int, b: int, c: int):
        return self.values[a][b][c]

    def inv(self, a: int, b: int, c: int):
        return inverse(self.values[a][b][c])

    @classmethod
    def from_function(cls, G: FiniteGroup, f, exact: bool = True) -> "SuperCocycle3":
        n = G.order
        return cls(
            tuple(
                tuple(tuple(as_scalar(f(a, b, c), exact) for c in range(n)) for b in range(n))
                for a in range(n)
            )
        )

    @classmethod
    def from_exponents(cls, exps, root_order: int, exact: bool = True) -> "SuperCocycle3":
        vals = tuple(
            tuple(tuple(root_of_unity(k, root_order, exact) for k in row) for row in plane)
            for plane in exps
        )
        exps = tuple(tuple(tuple(row) for row in plane) for plane in exps)
        return cls(vals, root_order, exps)

    def with_value(self, a: int, b: int, c: int, value) -> "SuperCocycle3":
        vals = [[list(row) for row in plane] for plane in self.values]
        vals[a][b][c] = value
        return SuperCocycle3(tuple(tuple(tuple(r) for r in p) for p in vals))

    def is_trivial(self) -> bool:
        return all(scalar_close(x, Gaussian(1)) for p in self.values for r in p for x in r)


def zero_cocycle2(G: FiniteGroup) -> Cocycle2:
    return Cocycle2.from_function(G, lambda a, b: 0)


def trivial_cocycle3(G: FiniteGroup) -> SuperCocycle3:
    return SuperCocycle3.from_function(G, lambda a, b, c: 1)


def check_cocycle2(G: FiniteGroup, s: Cocycle2):
    """Exhaustive check of the Z2 2-cocycle condition.

    Returns ``None`` on success, else the first violating ``(a, b, c)``.
    """
    m = G.table
    for a, b, c in itertools.product(G.elements, repeat=3):
        if (s(a, b) + s(m[a][b], c) + s(a, m[b][c]) + s(b, c)) % 2:
            return (a, b, c)
    return None


def check_graded_pentagon(G: FiniteGroup, s: Cocycle2, omega: SuperCocycle3, tol: float = 0.0):
    """Exhaustive check of the s-graded 3-cocycle equation.

    Returns ``None`` on success, else the first violating ``(a, b, c, d)``.
    """
    m = G.table
    for a, b, c, d in itertools.product(G.elements, repeat=4):
        lhs = omega(a, b, c) * omega(a, m[b][c], d) * omega(b, c, d)
        rhs = omega(m[a][b], c, d) * omega(a, b, m[c][d])
        if s(a, b) * s(c, d):
            rhs = -rhs
        if not scalar_close(Gaussian(0) + lhs, Gaussian(0) + rhs, tol):
            return (a, b, c, d)
    return None


def solve_graded_pentagon(
    G: FiniteGroup,
    s: Cocycle2,
    root_order: int,
    max_search: float = 2.0**40,
    exact: bool = True,
    limit: int | None = None,
) -> list[SuperCocycle3]:
    """All normalized solutions with values among ``root_order``-th roots of unity.

    ``limit`` stops after that many solutions and lifts the search-space
    bound, since the pruned search finds the first hits quickly.

    The equation is linear in the exponents ``k`` of
    ``omega = exp(2 pi i k / n)``. Entries are assigned by depth-first search
    and every equation is checked as soon as its five entries are fixed, so
    the enumeration is exhaustive without visiting the full product space.
    """
    n = root_order
    if n < 1:
        raise ValueError("root_order must be >= 1")
    order = G.order
    free = [(a, b, c) for a, b, c in itertools.product(range(1, order), repeat=3)]
    if limit is None and float(n) ** len(free) > max_search:
        raise SearchSpaceTooLarge(f"{n}^{len(free)} candidate tables exceed bound {max_search:g}")
    m = G.table

    # the sign (-1)^{s(a,b)s(c,d)} in exponent form; unreachable for odd n
    half = n // 2 if n % 2 == 0 else None
    equations = []
    for a, b, c, d in itertools.product(range(order), repeat=4):
        pos = [(a, b, c), (a, m[b][c], d), (b, c, d)]
        neg = [(m[a][b], c, d), (a, b, m[c][d])]
        equations.append((pos, neg, s(a, b) * s(c, d)))

    position = {t: i for i, t in enumerate(free)}
    # bucket each equation by the last free entry it touches
    buckets: list[list] = [[] for _ in free]
    for pos, neg, rhs in equations:
        coeffs: dict = {}
        for t in pos:
            if 0 not in t:
                coeffs[t] = coeffs.get(t, 0) + 1
        for t in neg:
            if 0 not in t:
                coeffs[t] = coeffs.get(t, 0) - 1
        coeffs = {t: c for t, c in coeffs.items() if c % n}
        target = 0
        if rhs:
            # odd root orders cannot produce the sign -1
            target = half
        if not coeffs:
            if target is None or target % n:
                return []
            continue
        if target is None:
            return []
        last = max(position[t] for t in coeffs)
        buckets[last].append(([(position[t], c) for t, c in coeffs.items()], target))

    exps = [0] * len(free)
    solutions = []

    def dfs(i: int) -> bool:
        if i == len(free):
            solutions.append(list(exps))
            return limit is not None and len(solutions) >= limit
        for k in range(n):
            exps[i] = k
            if all(sum(c * exps[j] for j, c in eq) % n == tgt for eq, tgt in buckets[i]):
                if dfs(i + 1):
                    return True
        exps[i] = 0
        return False

    dfs(0)
    out = []
    for sol in solutions:
        table = [[[0] * order for _ in range(order)] for _ in range(order)]
        for t, k in zip(free, sol):
            table[t[0]][t[1]][t[2]] = k
        out.append(SuperCocycle3.from_exponents(table, n, exact))
    return out


def c_omega(G: FiniteGroup, omega: SuperCocycle3, g: int, h: int, k: int):
    """``omega(g,h,k) omega(h,k,g) / omega(h,g,k)``."""
    return omega(g, h, k) * omega(h, k, g) * omega.inv(h, g, k)


# ---------------------------------------------------------------------------
# pair conjugacy classes


@dataclass(frozen=True)
class PairClass:
    representative: tuple[int, int]
    members: frozenset

    def __len__(self):
        return len(self.members)


def pair_conjugacy_classes(G: FiniteGroup) -> list[PairClass]:
    """Orbits of G x G under simultaneous conjugation, sorted by representative."""
    seen: set = set()
    classes = []
    for g, h in itertools.product(G.elements, repeat=2):
        if (g, h) in seen:
            continue
        orbit = frozenset((G.conj(g, t), G.conj(h, t)) for t in G.elements)
        seen |= orbit
        classes.append(PairClass(min(orbit), orbit))
    return sorted(classes, key=lambda c: c.representative)


def centralizer(G: FiniteGroup, g: int, h: int) -> list[int]:
    return [k for k in G.elements if G.commute(k, g) and G.commute(k, h)]


def is_c_regular(G: FiniteGroup, omega: SuperCocycle3, cls: PairClass | tuple, tol: float = 0.0) -> bool:
    g, h = cls.representative if isinstance(cls, PairClass) else cls
    for k in centralizer(G, g, h):
        a = c_omega(G, omega, g, h, k)
        b = c_omega(G, omega, g, k, h)
        if not scalar_close(Gaussian(0) + a, Gaussian(0) + b, tol):
            return False
    return True


# ---------------------------------------------------------------------------
# JSON ingestion


def load_model_json(path: str | Path, exact: bool = True) -> "Model":
    """Read ``{order, table, s?, omega?}`` into a :class:`Model`.

    ``omega`` entries are ``[re, im]`` pairs with int, float or rational
    string parts. Missing ``s``/``omega`` default to the trivial cocycles.
    """
    data = json.loads(Path(path).read_text())
    table = data["table"]
    if "order" in data and int(data["order"]) != len(table):
        raise GroupError(f"order {data['order']} does not match table size {len(table)}")
    G = validate_group(table, data.get("name", ""))
    n = G.order
    s = zero_cocycle2(G)
    if data.get("s") is not None:
        raw = data["s"]
        if len(raw) != n or any(len(r) != n for r in raw):
            raise GroupError("s table has the wrong shape")
        s = Cocycle2(tuple(tuple(int(x) % 2 for x in row) for row in raw))
    omega = trivial_cocycle3(G)
    if data.get("omega") is not None:
        raw = data["omega"]
        if len(raw) != n or any(len(p) != n or any(len(r) != n for r in p) for p in raw):
            raise GroupError("omega table has the wrong shape")
        omega = SuperCocycle3(
            tuple(tuple(tuple(as_scalar(x, exact) for x in row) for row in plane) for plane in raw)
        )
    return Model(data.get("name", Path(path).stem), G, s, omega)


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Model:
    """A fermionic twisted quantum double: group plus the pair (s, omega)."""

    name: str
    group: FiniteGroup
    s: Cocycle2
    omega: SuperCocycle3

    def validate(self, tol: float = 0.0) -> dict:
        """Cocycle and pentagon checks; values are ``None`` or the violating tuple."""
        return {
            "cocycle2": check_cocycle2(self.group, self.s),
            "pentagon": check_graded_pentagon(self.group, self.s, self.omega, tol),
        }

    def as_float(self) -> "Model":
        vals = tuple(tuple(tuple(complex(x) for x in r) for r in p) for p in self.omega.values)
        return Model(self.name, self.group, self.s, SuperCocycle3(vals, self.omega.root_order))

    def unpack(self):
        return self.group, self.s, self.omega


def ftc_cocycles(G: FiniteGroup, sign: int) -> tuple[Cocycle2, SuperCocycle3]:
    s = Cocycle2.from_function(G, lambda a, b: a * b)
    w = SuperCocycle3.from_function(G, lambda a, b, c: (I if sign > 0 else -I) if a == b == c == 1 else 1)
    return s, w


def type_iii_model() -> Model:
    """Z2^3 with the bosonic type-III cocycle ``(-1)^{a1 b2 c3}``."""
    z2 = cyclic_group(2)
    G = product_group(z2, z2, z2)
    bits = list(itertools.product((0, 1), repeat=3))
    w = SuperCocycle3.from_function(G, lambda a, b, c: -1 if bits[a][0] * bits[b][1] * bits[c][2] else 1)
    return Model("z2cubed-type-iii", G, zero_cocycle2(G), w)


def builtin_model(name: str) -> Model:
    z2 = cyclic_group(2)
    if name in ("ftc+", "ftc-"):
        s, w = ftc_cocycles(z2, 1 if name == "ftc+" else -1)
        return Model(name, z2, s, w)
    if name == "z2-bosonic-tc":
        return Model(name, z2, zero_cocycle2(z2), trivial_cocycle3(z2))
    if name == "z2-double-semion":
        w = SuperCocycle3.from_function(z2, lambda a, b, c: -1 if a == b == c == 1 else 1)
        return Model(name, z2, zero_cocycle2(z2), w)
    if name == "s3-untwisted":
        G = symmetric_group_s3()
        return Model(name, G, zero_cocycle2(G), trivial_cocycle3(G))
    if name == "trivial":
        G = trivial_group()
        return Model(name, G, zero_cocycle2(G), trivial_cocycle3(G))
    if name == "z2cubed-type-iii":
        return type_iii_model()
    raise KeyError(f"unknown builtin model {name!r}; choose from {', '.join(BUILTIN_MODELS)}")


BUILTIN_MODELS = (
    "ftc+", "ftc-", "z2-bosonic-tc", "z2-double-semion", "s3-untwisted", "trivial", "z2cubed-type-iii",
)
