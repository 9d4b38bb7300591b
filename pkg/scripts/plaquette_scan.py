"""Scan (alpha, beta, Berezin sign) for the hexagon eigenstate check.

Shows which plaquette parameters pair with which tensors, with and
without the gauge rotation of the patch, and with the printed table rows.
"""

from __future__ import annotations

import argparse
import itertools
import json
from dataclasses import asdict, dataclass

from fermionic_tn.config import Settings
from fermionic_tn.ftc import build_hexagon, build_plaquette, ftc_model, plaquette_algebra
from fermionic_tn.scalars import Gaussian, I, scalar_close

UNITS = {"+1": Gaussian(1), "-1": Gaussian(-1), "+i": I, "-i": -I}


@dataclass
class Config:
    corrected: bool = True
    gauge: bool = False  # rotate the patch to each beta instead of using its own gauge


def count_ok(model, alpha, beta, sign, cfg: Config) -> int:
    Q = build_plaquette(alpha, beta, corrected=cfg.corrected)
    patch = build_hexagon(model, Settings(berezin_sign=sign), beta=beta if cfg.gauge else None)
    ok = 0
    for outer in patch.states:
        v = patch.vector(outer, "summed")
        w = Q.apply(v)
        ok += all(scalar_close(Gaussian(0) + w.get(k, 0), Gaussian(0) + v.get(k, 0)) for k in set(v) | set(w))
    return ok


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--printed", action="store_true", help="use the table rows as printed")
    p.add_argument("--gauge", action="store_true")
    a = p.parse_args()
    cfg = Config(corrected=not a.printed, gauge=a.gauge)
    print(json.dumps({"config": asdict(cfg)}))
    print(json.dumps({"algebra": plaquette_algebra(I, -I, corrected=cfg.corrected)}))
    for name, sign in itertools.product(("ftc+", "ftc-"), (-1, 1)):
        m = ftc_model(name[-1])
        for (an, al), (bn, be) in itertools.product(UNITS.items(), repeat=2):
            n = count_ok(m, al, be, sign, cfg)
            if n >= 48:
                print(json.dumps({"model": name, "berezin_sign": sign, "alpha": an, "beta": bn, "ok": n}))


if __name__ == "__main__":
    main()
