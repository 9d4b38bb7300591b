"""Grassmann numbers: canonical monomials, products and Berezin integration.

Generators are ``Gen(bond, conj)`` pairs; ``conj=False`` is theta and
``conj=True`` is theta-bar. The global order is lexicographic on
``(bond, conj)``, so theta_b always sits directly in front of
theta-bar_b in a canonical monomial.
"""

from __future__ import annotations

import enum
from typing import Iterable, Mapping, NamedTuple

from .scalars import Gaussian, is_zero, scalar_close

__all__ = [
    "Gen",
    "theta",
    "theta_bar",
    "Parity",
    "Grassmann",
    "canonicalize",
    "permutation_sign",
    "multiply",
    "berezin_contract",
    "bond_contract",
    "parity",
]


class Gen(NamedTuple):
    bond: str
    conj: bool = False

    def __repr__(self):
        return f"{'tb' if self.conj else 't'}[{self.bond}]"


def theta(bond: str) -> Gen:
    return Gen(bond, False)


def theta_bar(bond: str) -> Gen:
    return Gen(bond, True)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"
    ZERO = "zero"


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (entries assumed distinct)."""
    inversions = 0
    n = len(seq)
    for i in range(n):
        for j in range(i + 1, n):
            if seq[i] > seq[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def canonicalize(raw: Iterable[Gen], coeff=1):
    """Sort a generator word, absorbing the reordering sign into ``coeff``.

    Returns ``(generators, coeff)`` or ``None`` when a generator repeats.
    """
    raw = tuple(raw)
    if len(set(raw)) != len(raw):
        return None
    return tuple(sorted(raw)), coeff * permutation_sign(raw)


def _merge_sign(a: tuple, b: tuple) -> int:
    # sign of sorting a+b where a, b are each sorted and disjoint
    inversions = 0
    j = 0
    nb = len(b)
    for x in a:
        while j < nb and b[j] < x:
            j += 1
        inversions += j
    return -1 if inversions % 2 else 1


class Grassmann:
    """Finite sum of canonical monomials with scalar coefficients.

    Treated as immutable; all operations return new objects.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if not is_zero(v)}

    @classmethod
    def scalar(cls, c) -> "Grassmann":
        return cls({(): c})

    @classmethod
    def one(cls) -> "Grassmann":
        return cls({(): Gaussian(1)})

    @classmethod
    def zero(cls) -> "Grassmann":
        return cls()

    @classmethod
    def word(cls, gens: Iterable[Gen], coeff=None) -> "Grassmann":
        """Product of generators in the written order, times ``coeff``."""
        out = canonicalize(gens, Gaussian(1) if coeff is None else coeff)
        if out is None:
            return cls()
        return cls({out[0]: out[1]})

    # -- algebra ---------------------------------------------------------
    def __add__(self, other: "Grassmann") -> "Grassmann":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return Grassmann(terms)

    def __neg__(self) -> "Grassmann":
        return Grassmann({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Grassmann") -> "Grassmann":
        return self + (-other)

    def scale(self, c) -> "Grassmann":
        return Grassmann({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Grassmann):
            return self.scale(other)
        out: dict = {}
        for ka, va in self.terms.items():
            sa = set(ka)
            for kb, vb in other.terms.items():
                if not sa.isdisjoint(kb):
                    continue
                key = tuple(sorted(ka + kb))
                c = va * vb * _merge_sign(ka, kb)
                out[key] = out[key] + c if key in out else c
        return Grassmann(out)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, Grassmann):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def equals(self, other: "Grassmann", tol: float = 0.0) -> bool:
        for k in set(self.terms) | set(other.terms):
            a = self.terms.get(k, 0)
            b = other.terms.get(k, 0)
            if not scalar_close(Gaussian(0) + a, Gaussian(0) + b, tol):
                return False
        return True

    def max_deviation(self, other: "Grassmann") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(complex(self.terms.get(k, 0)) - complex(other.terms.get(k, 0))) for k in keys), default=0.0)

    def is_zero(self) -> bool:
        return not self.terms

    def generators(self) -> set:
        return {g for k in self.terms for g in k}

    def parity(self) -> Parity:
        return parity(self)

    def berezin(self, bond: str, sign: int = 1) -> "Grassmann":
        return berezin_contract(self, bond, sign)

    def rename(self, mapping: Mapping[str, str]) -> "Grassmann":
        """Rename bonds; reorders monomials with the corresponding sign."""
        out: dict = {}
        for k, v in self.terms.items():
            word = [Gen(mapping.get(g.bond, g.bond), g.conj) for g in k]
            res = canonicalize(word, v)
            if res is None:
                continue
            key, c = res
            out[key] = out[key] + c if key in out else c
        return Grassmann(out)

    def conjugate_coefficients(self) -> "Grassmann":
        from .scalars import conj

        return Grassmann({k: conj(v) for k, v in self.terms.items()})

    def to_json(self) -> list:
        rows = []
        for k in sorted(self.terms):
            v = self.terms[k]
            coeff = v.pair() if isinstance(v, Gaussian) else [complex(v).real, complex(v).imag]
            rows.append([[[g.bond, int(g.conj)] for g in k], coeff])
        return rows

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            mono = "".join(map(repr, k)) or "1"
            parts.append(f"{self.terms[k]!r}*{mono}")
        return " + ".join(parts)


def multiply(a: Grassmann, b: Grassmann) -> Grassmann:
    return a * b


def berezin_contract(e: Grassmann, bond: str, sign: int = 1) -> Grassmann:
    """Integrate out ``theta_bond`` and ``theta-bar_bond``.

    With ``sign=+1`` the measure is d(theta-bar) d(theta), innermost
    first, so that the integral of ``theta theta-bar`` is ``+1``. Since the
    pair is adjacent and even in canonical order, surviving terms need no
    further reordering. ``sign=-1`` flips the convention.
    """
    t, tb = Gen(bond, False), Gen(bond, True)
    out: dict = {}
    for k, v in e.terms.items():
        if t not in k or tb not in k:
            continue
        i = k.index(t)
        key = k[:i] + k[i + 2:]
        c = v if sign == 1 else -v
        out[key] = out[key] + c if key in out else c
    return Grassmann(out)


def bond_contract(e: Grassmann, bond: str, sign: int = 1) -> Grassmann:
    """Contract a tensor-network bond: Berezin integral with weight ``1 + theta theta-bar``.

    The weight makes an empty bond (neither generator present) contribute
    ``1`` and a saturated bond contribute the plain Berezin value; terms
    carrying only one of the two generators vanish.
    """
    t, tb = Gen(bond, False), Gen(bond, True)
    out: dict = {}
    for k, v in e.terms.items():
        has_t, has_tb = t in k, tb in k
        if has_t != has_tb:
            continue
        if has_t:
            i = k.index(t)
            key = k[:i] + k[i + 2:]
            c = v if sign == 1 else -v
        else:
            key, c = k, v
        out[key] = out[key] + c if key in out else c
    return Grassmann(out)


def parity(e: Grassmann) -> Parity:
    lens = {len(k) % 2 for k in e.terms}
    if not lens:
        return Parity.ZERO
    if lens == {0}:
        return Parity.EVEN
    if lens == {1}:
        return Parity.ODD
    return Parity.MIXED
