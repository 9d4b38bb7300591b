"""Axiom checks and the concatenation suite for a set of models, as JSON lines."""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from fermionic_tn.config import Settings
from fermionic_tn.groups import BUILTIN_MODELS, builtin_model
from fermionic_tn.lattice import concat_case_suite
from fermionic_tn.mpo import axiom_checks


@dataclass
class Config:
    models: list[str] = field(default_factory=lambda: ["ftc+", "ftc-", "z2-bosonic-tc", "z2-double-semion"])
    exact: bool = True
    normalized: bool = True
    berezin_sign: int = -1
    flip_y: bool = False


def run(cfg: Config) -> list[dict]:
    settings = Settings(exact=cfg.exact, normalized=cfg.normalized, berezin_sign=cfg.berezin_sign)
    out = []
    for name in cfg.models:
        m = builtin_model(name)
        t0 = time.perf_counter()
        checks = axiom_checks(m, settings)
        mm = m if cfg.exact else m.as_float()
        concat = concat_case_suite(*mm.unpack(), settings=settings, flip_y=cfg.flip_y)
        out.append({
            "model": name,
            "axioms_failed": [c.to_json() for c in checks if not c.passed],
            "axiom_checks": len(checks),
            "concat_failed": [r["case"] for r in concat if not r["pass"]],
            "seconds": round(time.perf_counter() - t0, 2),
        })
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--models", nargs="*", choices=BUILTIN_MODELS)
    p.add_argument("--float", action="store_true")
    p.add_argument("--unnormalized", action="store_true")
    p.add_argument("--berezin-sign", type=int, choices=(1, -1), default=-1)
    p.add_argument("--flip-y", action="store_true")
    a = p.parse_args()
    cfg = Config(exact=not a.float, normalized=not a.unnormalized, berezin_sign=a.berezin_sign, flip_y=a.flip_y)
    if a.models:
        cfg.models = a.models
    print(json.dumps({"config": asdict(cfg)}))
    for row in run(cfg):
        print(json.dumps(row))


if __name__ == "__main__":
    main()
