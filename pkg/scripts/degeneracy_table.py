"""Torus degeneracy for the built-in models and two derived ones.

The derived models are Z4 with the carry 2-cocycle (needs eighth roots of
unity) and Z2 x Z2 with the asymmetric 2-cocycle s(a, b) = a_1 b_2, where
counting c-regular classes and the rank of the symmetrized states differ.
"""

from __future__ import annotations

import argparse
import itertools
import json
from dataclasses import asdict, dataclass

from fermionic_tn.config import Settings
from fermionic_tn.groundstate import degeneracy, degeneracy_by_rank
from fermionic_tn.groups import (
    BUILTIN_MODELS,
    Cocycle2,
    Model,
    builtin_model,
    cyclic_group,
    product_group,
    solve_graded_pentagon,
)


@dataclass
class Config:
    derived: bool = True
    float_rank: bool = False


def derived_models() -> list[tuple[Model, Settings]]:
    z4 = cyclic_group(4)
    carry = Cocycle2.from_function(z4, lambda a, b: 1 if a + b >= 4 else 0)
    z2 = cyclic_group(2)
    g4 = product_group(z2, z2)
    bits = list(itertools.product((0, 1), repeat=2))
    asym = Cocycle2.from_function(g4, lambda a, b: bits[a][0] * bits[b][1])
    return [
        (Model("z4-carry", z4, carry, solve_graded_pentagon(z4, carry, 8, limit=1)[0]), Settings(exact=False)),
        (Model("z2z2-asym", g4, asym, solve_graded_pentagon(g4, asym, 4, limit=1)[0]), Settings()),
    ]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--no-derived", action="store_true")
    p.add_argument("--float-rank", action="store_true")
    a = p.parse_args()
    cfg = Config(derived=not a.no_derived, float_rank=a.float_rank)
    print(json.dumps({"config": asdict(cfg)}))
    rows = [(builtin_model(n), Settings(exact=not cfg.float_rank)) for n in BUILTIN_MODELS]
    if cfg.derived:
        rows += derived_models()
    for m, st in rows:
        print(json.dumps({
            "model": m.name,
            "c_regular_count": degeneracy(m),
            "eta_count": degeneracy(m, "eta"),
            "rank": degeneracy_by_rank(m, st),
        }))


if __name__ == "__main__":
    main()
