"""Command-line front end.

Every command prints one JSON object per line (``schema_version`` first)
and optionally writes the same lines to ``--json PATH``. Exit status: 0 on
success, 1 when a verification fails, 2 when the input cannot be used.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .config import Settings
from .groups import (
    BUILTIN_MODELS,
    Cocycle2,
    GroupError,
    Model,
    SearchSpaceTooLarge,
    builtin_model,
    cyclic_group,
    ftc_cocycles,
    load_model_json,
    product_group,
    symmetric_group_s3,
    trivial_group,
    validate_group,
    zero_cocycle2,
)
from .scalars import Gaussian, to_complex

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Gaussian):
        return [str(x.re), str(x.im)]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(args, records: list[dict]) -> None:
    lines = [json.dumps(_jsonable({"schema_version": SCHEMA_VERSION, **r}), sort_keys=False) for r in records]
    for line in lines:
        print(line)
    if args.json:
        Path(args.json).write_text("\n".join(lines) + "\n")


def settings_from(args) -> Settings:
    return Settings(
        exact=args.arith == "exact",
        tol=args.tol,
        normalized=args.proj_norm == "on",
        berezin_sign=1 if args.berezin_sign == "+" else -1,
    )


def load_model(ref: str) -> Model:
    if ref in BUILTIN_MODELS:
        return builtin_model(ref)
    path = Path(ref)
    if not path.exists():
        raise InputError(f"unknown model {ref!r}: not a built-in name ({', '.join(BUILTIN_MODELS)}) or a file")
    try:
        return load_model_json(path)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read model {ref}: {exc}") from exc


_GROUPS = {
    "trivial": trivial_group,
    "z2": lambda: cyclic_group(2),
    "z3": lambda: cyclic_group(3),
    "z4": lambda: cyclic_group(4),
    "z2xz2": lambda: product_group(cyclic_group(2), cyclic_group(2)),
    "s3": symmetric_group_s3,
}


def load_group(ref: str):
    if ref in _GROUPS:
        return _GROUPS[ref]()
    path = Path(ref)
    if not path.exists():
        raise InputError(f"unknown group {ref!r}")
    try:
        data = json.loads(path.read_text())
        return validate_group(data["table"] if isinstance(data, dict) else data, path.stem)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read group {ref}: {exc}") from exc


def load_s(ref: str, G) -> Cocycle2:
    if ref == "zero":
        return zero_cocycle2(G)
    if ref == "ftc":
        if G.order != 2:
            raise InputError("the ftc 2-cocycle is defined on Z2")
        return ftc_cocycles(G, 1)[0]
    path = Path(ref)
    if not path.exists():
        raise InputError(f"unknown s {ref!r}")
    try:
        raw = json.loads(path.read_text())
        raw = raw["s"] if isinstance(raw, dict) else raw
        if len(raw) != G.order or any(len(r) != G.order for r in raw):
            raise InputError("s table has the wrong shape")
        return Cocycle2(tuple(tuple(int(x) % 2 for x in row) for row in raw))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read s {ref}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    model = load_model(args.model)
    settings = settings_from(args)
    res = model.validate(settings.tolerance)
    rec = {"command": "verify", "model": model.name, "group_order": model.group.order,
           "cocycle2_violation": res["cocycle2"], "pentagon_violation": res["pentagon"]}
    if res["cocycle2"] is not None:
        rec["pass"] = False
        _emit(args, [rec])
        return EXIT_INPUT
    rec["pass"] = res["pentagon"] is None
    _emit(args, [rec])
    return EXIT_OK if rec["pass"] else EXIT_FAIL


def _axiom_records(model: Model, settings: Settings, flip_y: bool) -> list[dict]:
    from .lattice import concat_case_suite
    from .mpo import axiom_checks

    rows = [dict(c.to_json(), kind="axiom") for c in axiom_checks(model, settings)]
    m = model if settings.exact else model.as_float()
    for r in concat_case_suite(*m.unpack(), settings=settings, flip_y=flip_y):
        rows.append({**r, "kind": "concatenation", "case_kind": r["kind"]})
    return rows


def cmd_axioms(args) -> int:
    model = load_model(args.model)
    settings = settings_from(args)
    rows = _axiom_records(model, settings, args.flip_y)
    ok = all(r["pass"] for r in rows)
    failed = [r.get("case") or f"{r['axiom']}:{r['region']}:{r['group_elements']}" for r in rows if not r["pass"]]
    summary = {"command": "axioms", "model": model.name, "settings": settings.to_json(),
               "checks": len(rows), "failed": failed, "pass": ok}
    _emit(args, [summary] + ([] if args.summary_only else rows))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_degeneracy(args) -> int:
    from .groundstate import degeneracy, degeneracy_report

    model = load_model(args.model)
    settings = settings_from(args)
    rep = degeneracy_report(model, settings)
    rec = {"command": "degeneracy", "model": model.name, "degeneracy": rep["degeneracy"],
           "degeneracy_by_rank": rep["degeneracy_by_rank"], "degeneracy_eta": degeneracy(model, "eta"),
           "pass": rep["agree"]}
    classes = [{"kind": "class", **{k: v for k, v in r.items() if k != "state"}} for r in rep["classes"]]
    if not args.json and not args.quiet:
        _print_table(classes)
    _emit(args, [rec] + classes)
    return EXIT_OK if rep["agree"] else EXIT_FAIL


def _print_table(rows: list[dict]) -> None:
    cols = ["rep", "size", "commuting", "s_symmetric", "c_regular", "mprime_nonzero"]
    print("  ".join(f"{c:>14}" for c in cols), file=sys.stderr)
    for r in rows:
        print("  ".join(f"{str(r.get(c, '')):>14}" for c in cols), file=sys.stderr)


def cmd_solve_pentagon(args) -> int:
    from .groups import solve_graded_pentagon

    G = load_group(args.group)
    s = load_s(args.s, G)
    sols = solve_graded_pentagon(G, s, args.roots, limit=args.limit)
    recs = [{"command": "solve-pentagon", "group": args.group, "roots": args.roots, "solutions": len(sols)}]
    for w in sols:
        recs.append({"kind": "solution", "omega": w.values})
    _emit(args, recs)
    return EXIT_OK


def cmd_ftc_check(args) -> int:
    from .ftc import ftc_model, verify_plaquette_eigenstate
    from .groundstate import degeneracy, degeneracy_by_rank

    settings = settings_from(args)
    alpha = Gaussian(0, 1) if args.alpha == "+i" else Gaussian(0, -1)
    # the tensors paired with alpha carry omega(1,1,1) = conj(alpha)
    model = load_model(args.model) if args.model else ftc_model("-" if args.alpha == "+i" else "+")
    t0 = time.perf_counter()
    pent = model.validate(settings.tolerance)
    axioms = _axiom_records(model, settings, False)
    plaq = verify_plaquette_eigenstate(model, alpha=alpha if settings.exact else to_complex(alpha), settings=settings)
    count, rank = degeneracy(model), degeneracy_by_rank(model, settings)
    rec = {
        "command": "ftc-check",
        "model": model.name,
        "alpha": args.alpha,
        "pentagon_ok": pent["cocycle2"] is None and pent["pentagon"] is None,
        "axioms_ok": all(r["pass"] for r in axioms),
        "plaquette_ok": [r["eigenstate"] and r["loop_0_to_1"] and r["loop_1_to_0"] for r in plaq["rows"]],
        "plaquette_pass": plaq["pass"],
        "degeneracy": count,
        "degeneracy_by_rank": rank,
        "seconds": round(time.perf_counter() - t0, 3) if args.timing else None,
    }
    rec["pass"] = rec["pentagon_ok"] and rec["axioms_ok"] and plaq["pass"] and count == rank
    if not args.timing:
        del rec["seconds"]
    _emit(args, [rec])
    return EXIT_OK if rec["pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arith", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", type=float, default=None, help="comparison tolerance (default 0 exact, 1e-9 float)")
    common.add_argument("--proj-norm", choices=("on", "off"), default="on")
    common.add_argument("--berezin-sign", choices=("+", "-"), default="-")
    common.add_argument("--json", metavar="PATH", default=None, help="also write the report lines to PATH")

    p = argparse.ArgumentParser(prog="fermionic-tn", description="Fermionic twisted quantum double checks.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="2-cocycle and graded pentagon checks")
    v.add_argument("model")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("axioms", parents=[common], help="projector, representation, symmetry, injectivity, concatenation")
    a.add_argument("model")
    a.add_argument("--flip-y", action="store_true", help="negate the odd Y entries (mutation run)")
    a.add_argument("--summary-only", action="store_true")
    a.set_defaults(func=cmd_axioms)

    d = sub.add_parser("degeneracy", parents=[common], help="torus degeneracy by class counting and by rank")
    d.add_argument("model")
    d.add_argument("--quiet", action="store_true")
    d.set_defaults(func=cmd_degeneracy)

    s = sub.add_parser("solve-pentagon", parents=[common], help="enumerate normalized graded 3-cocycles")
    s.add_argument("group", help=f"{', '.join(_GROUPS)} or a JSON table file")
    s.add_argument("s", help="zero, ftc or a JSON s-table file")
    s.add_argument("--roots", type=int, required=True)
    s.add_argument("--limit", type=int, default=None, help="stop after this many solutions")
    s.set_defaults(func=cmd_solve_pentagon)

    f = sub.add_parser("ftc-check", parents=[common], help="fermionic toric code end to end")
    f.add_argument("--alpha", choices=("+i", "-i"), default="+i")
    f.add_argument("--model", default=None, help="override the tensors (default: the matching ftc model)")
    f.add_argument("--timing", action="store_true")
    f.set_defaults(func=cmd_ftc_check)
    return p


def _join_alpha(argv: list[str]) -> list[str]:
    # "-i" looks like an option to argparse
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--alpha":
            out.append("--alpha=" + next(it, ""))
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_alpha(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (InputError, GroupError, SearchSpaceTooLarge, FileNotFoundError, ValueError) as exc:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command, "error": str(exc)}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
