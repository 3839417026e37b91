"""Command-line front end.

Exit codes: 0 success, 1 mathematical mismatch, 2 input or validation error.
JSON goes to stdout (or --out); human-readable summaries go to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import theta
from .census import (
    census,
    enumerate_invariant_forms,
    syzygy_parity_report,
    trace_identity_report,
)
from .census import reduce as reduce_lattice
from .errors import EnumerationLimitError, ValidationError
from .intmat import det
from .lattices import (
    GaussianLattice,
    classify,
    direct_sum,
    e8_gram,
    gamma_2g,
    gaussify,
    load_lattice,
    symplectic_basis,
)

BUILTINS = ("gamma2g", "gauss_zn", "gauss_e8", "sum")


def _build_builtin(name: str, args) -> GaussianLattice:
    if name == "gamma2g":
        if args.g is None:
            raise ValidationError("--builtin gamma2g requires --g")
        return gamma_2g(args.g)
    if name == "gauss_zn":
        if args.n is None:
            raise ValidationError("--builtin gauss_zn requires --n")
        if args.n <= 0:
            raise ValidationError("--n must be positive")
        eye = [[1 if i == j else 0 for j in range(args.n)] for i in range(args.n)]
        return gaussify(eye, label=f"Zi^{args.n}")
    if name == "gauss_e8":
        return gaussify(e8_gram(), label="E8xZi")
    if name == "sum":
        if not args.of:
            raise ValidationError('--builtin sum requires --of "name:param,name:param"')
        parts = []
        for chunk in args.of.split(","):
            bits = chunk.strip().split(":")
            sub = argparse.Namespace(g=None, n=None, of=None)
            if len(bits) == 2:
                if bits[0] == "gamma2g":
                    sub.g = int(bits[1])
                elif bits[0] == "gauss_zn":
                    sub.n = int(bits[1])
                else:
                    raise ValidationError(f"unsupported summand: {chunk}")
            elif bits != ["gauss_e8"]:
                raise ValidationError(f"unsupported summand: {chunk}")
            parts.append(_build_builtin(bits[0], sub))
        if len(parts) < 2:
            raise ValidationError("--builtin sum needs at least two summands")
        acc = parts[0]
        for p in parts[1:]:
            acc = direct_sum(acc, p)
        return acc
    raise ValidationError(f"unknown builtin {name!r} (choose from {', '.join(BUILTINS)})")


def _check_config(args):
    if args.tol <= 0:
        raise ValidationError("--tol must be positive")
    if args.gauss_bound <= 0 or args.numeric_bound <= 0:
        raise ValidationError("enumeration bounds must be positive")
    if args.workers <= 0:
        raise ValidationError("--workers must be positive")


def _resolve_lattice(args) -> GaussianLattice:
    _check_config(args)
    if args.file and args.builtin:
        raise ValidationError("give either --builtin or --file, not both")
    if args.file:
        return load_lattice(args.file)
    if args.builtin:
        return _build_builtin(args.builtin, args)
    raise ValidationError("a lattice source is required (--builtin or --file)")


def _emit(args, payload: dict):
    text = json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_info(args) -> int:
    lattice = _resolve_lattice(args)
    cls = classify(lattice)
    d = det([list(r) for r in lattice.gram])
    line = (
        f"label={lattice.label} rank={lattice.rank} g={cls.g} "
        f"unimodular={str(cls.unimodular).lower()} even={str(cls.even).lower()} "
        f"det={d} seed={args.seed}"
    )
    sys.stdout.write(line + "\n")
    return 0


def cmd_census(args) -> int:
    lattice = _resolve_lattice(args)
    report = census(lattice, gauss_bound=args.gauss_bound, workers=args.workers)
    payload = report.to_json_dict()
    payload["seed"] = args.seed
    _emit(args, payload)
    print(
        f"census {lattice.label}: counts={list(report.counts)} "
        f"formula={report.formula_value} match={str(report.match).lower()}",
        file=sys.stderr,
    )
    return 0 if report.match else 1


def cmd_verify(args) -> int:
    lattice = _resolve_lattice(args)
    report = census(lattice, gauss_bound=args.gauss_bound, workers=args.workers)
    cls = classify(lattice)
    checks = []

    trace = trace_identity_report(lattice, gauss_bound=args.gauss_bound)
    checks.append({"name": "trace_identity", **trace})

    sp = syzygy_parity_report(report, cls.even)
    checks.append({"name": "syzygy_parity", **sp})

    t = reduce_lattice(lattice)
    forms = enumerate_invariant_forms(t)
    basis = symplectic_basis(lattice)
    pm = theta.period_matrix(lattice, basis, seed=args.seed)
    picked = [0]
    if len(forms) > 1:
        rng = random.Random(args.seed)
        picked += [rng.randrange(len(forms)) for _ in range(2)]
    iota_pass = True
    iota_details = []
    for idx in dict.fromkeys(picked):
        rep = theta.iota_ratio_report(lattice, t, forms[idx], seed=args.seed)
        iota_details.append({"form": idx, **rep})
        iota_pass = iota_pass and rep["pass"]
    checks.append({"name": "iota_ratio", "pass": iota_pass, "details": iota_details})

    coc = theta.cocycle_identity_report(lattice, forms[0], pm, seed=args.seed)
    checks.append({"name": "cocycle_identity", **coc})

    if args.numeric:
        num = theta.verify_census_numeric(
            lattice,
            report,
            tol=args.tol,
            numeric_bound=args.numeric_bound,
            seed=args.seed,
        )
        checks.append({"name": "numeric_theta", **num})

    all_pass = all(c["pass"] for c in checks)
    payload = {
        "label": lattice.label,
        "seed": args.seed,
        "census_match": report.match,
        "checks": checks,
        "all_pass": all_pass and report.match,
    }
    _emit(args, payload)
    for c in checks:
        print(f"verify {c['name']}: {'pass' if c['pass'] else 'FAIL'}", file=sys.stderr)
    return 0 if payload["all_pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gausslat",
        description="Gaussian lattices, invariant theta divisors, and vanishing thetanulls",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("info", cmd_info), ("census", cmd_census), ("verify", cmd_verify)):
        p = sub.add_parser(name)
        p.add_argument("--builtin", choices=BUILTINS)
        p.add_argument("--file")
        p.add_argument("--g", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--of", help='summands for --builtin sum, e.g. "gamma2g:4,gauss_zn:2"')
        p.add_argument("--out")
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--numeric", action="store_true")
        p.add_argument("--gauss-bound", dest="gauss_bound", type=int, default=20)
        p.add_argument("--numeric-bound", dest="numeric_bound", type=int, default=6)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, EnumerationLimitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
