"""Command-line interface.

Exit codes: 0 success, 1 validation or axiom failure, 2 usage or document error.
The default tolerance can be overridden with the ``KADD_TOL`` environment
variable.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import axioms, gen, integral, kadd
from .documents import DocumentError, capacity_document, dumps, load_capacity, parse_vector
from .setfun import (
    DEFAULT_TOL,
    MobiusRepresentation,
    SetFunction,
    ValidationReport,
    additivity_order,
    is_belief,
    is_symmetric,
    mobius_transform,
    subset_elements,
    validate_capacity,
    validate_mobius_capacity,
    zeta_transform,
)

ENV_TOL = "KADD_TOL"
CLI_MAX_N = 20


class UsageError(Exception):
    pass


def _default_tol() -> float:
    raw = os.environ.get(ENV_TOL)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{ENV_TOL}={raw!r} is not a number") from None


def _load(path: str):
    obj = load_capacity(path)
    if obj.n > CLI_MAX_N:
        raise UsageError(f"{path}: n={obj.n} exceeds the CLI limit of {CLI_MAX_N}")
    return obj


def _as_setfunction(obj) -> SetFunction:
    return zeta_transform(obj) if isinstance(obj, MobiusRepresentation) else obj


def _as_mobius(obj) -> MobiusRepresentation:
    return obj if isinstance(obj, MobiusRepresentation) else mobius_transform(obj)


def _act(text: str, n: int | None = None) -> np.ndarray:
    f = parse_vector(text, "act")
    if n is not None and len(f) != n:
        raise UsageError(f"act has length {len(f)} but the capacity has n={n}")
    return f


def _report_dict(report: ValidationReport) -> dict:
    return {
        "valid": report.ok,
        "violations": [
            {
                "kind": v.kind,
                "subset": list(subset_elements(v.subset)),
                "element": v.element,
                "amount": v.amount,
            }
            for v in report.violations
        ],
    }


def _validate(obj, tol: float) -> ValidationReport:
    if isinstance(obj, MobiusRepresentation):
        return validate_mobius_capacity(obj, tol)
    return validate_capacity(obj, tol)


def cmd_transform(args, tol):
    obj = _load(args.file)
    target = args.to or ("capacity" if isinstance(obj, MobiusRepresentation) else "mobius")
    out = _as_mobius(obj) if target == "mobius" else _as_setfunction(obj)
    return capacity_document(out, args.format), 0


def cmd_validate(args, tol):
    report = _validate(_load(args.file), tol)
    return _report_dict(report), 0 if report.ok else 1


def cmd_classify(args, tol):
    obj = _load(args.file)
    sf = _as_setfunction(obj)
    report = validate_capacity(sf, tol)
    out = {"n": sf.n, "valid": report.ok}
    if not report.ok:
        out.update(_report_dict(report))
        return out, 1
    symmetric = is_symmetric(sf, tol)
    mob = _as_mobius(obj)
    out["symmetric"] = symmetric
    out["belief"] = is_belief(mob, tol)
    out["additivity_order"] = additivity_order(mob, tol)
    if symmetric:
        w = integral.capacity_to_owa(sf, tol)
        out["weights"] = [float(x) for x in w]
        out["weight_kadd_order"] = kadd.weight_kadd_order(w, tol)
    return out, 0


def _capacity_for_integral(obj, tol):
    sf = _as_setfunction(obj)
    report = validate_capacity(sf, tol)
    if not report.ok:
        raise UsageError(f"not a capacity: {report.summary()}")
    return sf


def cmd_choquet(args, tol):
    obj = _load(args.file)
    sf = _capacity_for_integral(obj, tol)
    f = _act(args.act, sf.n)
    return {
        "value": integral.choquet_sorted(sf, f),
        "value_mobius": integral.choquet_mobius(_as_mobius(obj), f),
    }, 0


def cmd_owa(args, tol):
    w = parse_vector(args.weights, "weights")
    f = _act(args.act, len(w))
    return {"value": integral.owa(w, f)}, 0


def cmd_gini(args, tol):
    f = _act(args.act)
    coeffs = integral.gini_coefficients(len(f), args.delta)
    w = coeffs / coeffs.sum()
    return {
        "value": integral.gini_functional(f, args.delta),
        "coefficients": [float(c) for c in coeffs],
        "coefficient_sum": float(coeffs.sum()),
        "weights": [float(x) for x in w],
        "scaled_owa": float(coeffs.sum()) * integral.owa(w, f),
        "capacity": capacity_document(integral.owa_to_capacity(w), args.format),
    }, 0


def cmd_decompose(args, tol):
    sf = _capacity_for_integral(_load(args.file), tol)
    try:
        a = integral.binomial_decomposition(sf, tol)
    except (integral.NotSymmetric, integral.DecompositionError) as exc:
        return {"error": str(exc)}, 1
    return {"k": len(a), "coefficients": [float(x) for x in a]}, 0


def cmd_residuals(args, tol):
    sf = _as_setfunction(_load(args.file))
    k = args.k if args.k is not None else 2
    if not 1 <= k <= sf.n:
        raise UsageError(f"--k must be in 1..{sf.n}")
    if k == 2 and args.k is None:
        rep = kadd.second_difference_residuals(sf, tol)
    else:
        rep = kadd.k_difference_residuals(sf, k, tol, threads=args.threads)
    witness = None
    if rep.witness is not None:
        witness = {"subset": list(subset_elements(rep.witness[0])), "block": list(subset_elements(rep.witness[1]))}
    return {
        "k": k,
        "max_residual": rep.max_residual,
        "at_most_k_additive": rep.ok(tol),
        "witness": witness,
        "constant_value": rep.constant_value,
    }, 0


def cmd_check_axioms(args, tol):
    sf = _capacity_for_integral(_load(args.file), tol)
    H = axioms.Functional.choquet(sf)
    ids = [a for item in args.axiom for a in item.split(",") if a.strip()]
    reports = []
    for ax in ids:
        try:
            rep = axioms.check_axiom(ax, H, args.trials, args.seed, args.k, tol, args.threads)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        reports.append(rep.to_dict())
    failed = any(r["verdict"] == "fail" for r in reports)
    return {"functional": "choquet", "n": sf.n, "reports": reports}, 1 if failed else 0


def cmd_gen(args, tol):
    if args.n > CLI_MAX_N:
        raise UsageError(f"--n exceeds the CLI limit of {CLI_MAX_N}")
    try:
        if args.kind == "weightvector":
            w = gen.random_weights(args.n, args.seed, args.k, args.floor)
            return {"n": args.n, "weights": [float(x) for x in w]}, 0
        cfg = gen.GenConfig(args.n, args.seed, args.kind, args.k, args.floor)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cap = gen.random_capacity(cfg)
    out = mobius_transform(cap) if args.repr == "mobius" else cap
    return capacity_document(out, args.format), 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="absolute tolerance (default 1e-9 or $KADD_TOL)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=("dense", "sparse"), default="dense")

    parser = argparse.ArgumentParser(prog="kadd", description="Capacities, Choquet integrals and k-additivity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", parents=[common], help="convert between capacity and Möbius form")
    p.add_argument("file")
    p.add_argument("--to", choices=("capacity", "mobius"))
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("validate", parents=[common], help="check capacity conditions")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", parents=[common], help="symmetry, belief, additivity order, weights")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("choquet", parents=[common], help="Choquet integral of an act")
    p.add_argument("file")
    p.add_argument("--act", required=True, help="comma-separated values or a JSON file")
    p.set_defaults(func=cmd_choquet)

    p = sub.add_parser("owa", parents=[common], help="OWA of an act")
    p.add_argument("--weights", required=True)
    p.add_argument("--act", required=True)
    p.set_defaults(func=cmd_owa)

    p = sub.add_parser("gini", parents=[common], help="Gini welfare value and its symmetric capacity")
    p.add_argument("--act", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=cmd_gini)

    p = sub.add_parser("decompose", parents=[common], help="binomial OWA coefficients")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("residuals", parents=[common], help="second or k-th difference residuals")
    p.add_argument("file")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_residuals)

    p = sub.add_parser("check-axioms", parents=[common], help="fuzz the Choquet integral against axioms")
    p.add_argument("file")
    p.add_argument("--axiom", action="append", required=True, help="e.g. A3, A7'k, A9k(3); repeatable")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_check_axioms)

    p = sub.add_parser("gen", parents=[common], help="generate a random capacity or weight vector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=gen.KINDS, default="general")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--floor", type=float, default=0.05)
    p.add_argument("--repr", choices=("capacity", "mobius"), default="capacity")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        out, code = args.func(args, tol)
    except (UsageError, DocumentError) as exc:
        print(f"kadd {args.command}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"kadd {args.command}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(out) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
