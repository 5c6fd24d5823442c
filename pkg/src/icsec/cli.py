"""``icsec`` command-line front end.

Exit status: 0 success, 2 invalid input or invalid code, 3 budget exceeded,
4 infeasible instance or failed construction.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DEFAULT_BUDGET, BudgetExceeded, ConstructionError, IndexCodingError, ValidationError
from .gf import parse_field
from .icsi import instance_to_dict, load_instance, random_instance
from .indexcode import (
    IndexCode,
    code_to_dict,
    find_combination,
    is_valid,
    kappa_q,
    load_code,
    minrank_fitting,
    save_code,
)
from .security import block_security_profile, has_no_information, icsri_valid, kappa_star
from .strongsec import (
    RandomizedIndexCode,
    check_length_bounds,
    construct_a,
    decode_randomized,
    find_leak,
)

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, status: int, doc: dict):
        super().__init__(doc.get("error", ""))
        self.status = status
        self.doc = doc


def _one_based(idx) -> list[int]:
    return [int(j) + 1 for j in idx]


def _load_pair(args) -> RandomizedIndexCode:
    inst = load_instance(args.instance)
    cf = load_code(args.code)
    if cf.L.field != inst.field:
        raise ValidationError(f"code over {cf.L.field.spec}, instance over {inst.field.spec}")
    if cf.n != inst.n:
        raise ValidationError(f"code is for n = {cf.n} messages, instance has n = {inst.n}")
    return RandomizedIndexCode(inst, cf.eta, cf.L, cf.construction)


def _validity_doc(code: IndexCode, budget: int) -> dict:
    v = is_valid(code, budget=budget)
    return {"valid": v.valid, "failing_receivers": _one_based(v.failing)}


# --- subcommands -------------------------------------------------------------


def cmd_analyze(args) -> dict:
    rc = _load_pair(args)
    if rc.eta:
        raise ValidationError("analyze handles deterministic codes; use verify-strong for randomized ones")
    code = IndexCode(rc.inst, rc.L)
    doc = _validity_doc(code, args.budget)
    doc["report"] = block_security_profile(code.L, budget=args.budget, seed=args.seed or 0).to_dict()
    if not doc["valid"]:
        raise CliFailure(EXIT_VALIDATION, doc | {"error": "code is not a valid index code"})
    return doc


def cmd_construct(args) -> dict:
    inst = load_instance(args.instance)
    alphas = [int(a) for a in args.alphas.split(",")] if args.alphas else None
    code = construct_a(inst, args.mu, args.delta, alphas=alphas, budget=args.budget)
    if args.out_code:
        save_code(args.out_code, code.L, inst.n, code.eta, code.construction)
    return {
        "N": code.N,
        "kappa": code.construction["kappa"],
        "eta": code.eta,
        "mu": args.mu,
        "delta": args.delta,
        "code": code_to_dict(code.L, inst.n, code.eta, code.construction),
    }


def cmd_minrank(args) -> dict:
    inst = load_instance(args.instance)
    res = kappa_q(inst, args.budget)
    doc = {"kappa": res.kappa, "witness": res.L.tolist()}
    if args.fitting:
        doc["minrank_fitting"] = minrank_fitting(inst, args.budget)
    if args.out_code:
        save_code(args.out_code, res.L, inst.n)
    return doc


def _leakage(rc: RandomizedIndexCode, W: list[int], known: list[int]) -> dict:
    """Exact verdict for an adversary holding ``x[known]`` and hearing ``W``."""
    n = rc.n
    hidden = [j for j in range(n) if j not in known]
    LW = rc.L.col_sub(W)
    if not hidden:
        return {"verdict": "nothing hidden", "recovered": []}
    recovered = [j for j in hidden if find_combination(LW.T, known, j) is not None]
    if len(recovered) == len(hidden):
        verdict = "complete insecurity"
    elif has_no_information(LW, known, hidden):
        verdict = "secure"
    else:
        verdict = "partial leakage"
    return {"verdict": verdict, "recovered": _one_based(recovered)}


def _decode_all(rc: RandomizedIndexCode, y, x, delta: int, budget: int) -> list[dict]:
    out = []
    for i in range(rc.inst.m):
        side = rc.inst.side(i)
        want = int(x[rc.inst.demands[i]])
        try:
            got = decode_randomized(rc, i, y, x[side], delta, budget)
            out.append({"receiver": i + 1, "decoded": int(got), "ok": int(got) == want})
        except BudgetExceeded:
            raise
        except IndexCodingError as exc:
            out.append({"receiver": i + 1, "decoded": None, "ok": False, "error": type(exc).__name__})
    return out


def cmd_simulate(args) -> dict:
    if args.seed is None:
        raise ValidationError("simulate needs --seed")
    rc = _load_pair(args)
    n, N, q = rc.n, rc.N, rc.field.q
    mu = N if args.mu is None else args.mu
    t, delta = args.t or 0, args.delta or 0
    if not 0 <= mu <= N or not 0 <= t <= n or delta < 0:
        raise ValidationError(f"need 0 <= mu <= {N}, 0 <= t <= {n}, delta >= 0")
    rng = np.random.default_rng(args.seed)
    trials, successes = [], 0
    for k in range(args.trials):
        x = rng.integers(0, q, size=n)
        g = rng.integers(0, q, size=rc.eta)
        s = np.concatenate([x, g]) @ rc.L
        err = np.zeros(N, dtype=np.int64)
        pos = rng.choice(N, size=min(delta, N), replace=False)
        err[pos] = rng.integers(1, q, size=len(pos))
        y = rc.field.vadd(s, err)
        receivers = _decode_all(rc, y, x, delta, args.budget)
        successes += sum(r["ok"] for r in receivers)
        W = sorted(int(w) for w in rng.choice(N, size=mu, replace=False))
        known = sorted(int(j) for j in rng.choice(n, size=t, replace=False))
        trials.append({
            "trial": k + 1,
            "x": x.tolist(),
            "g": g.tolist(),
            "error": err.tolist(),
            "received": y.tolist(),
            "receivers": receivers,
            "adversary": {
                "known": _one_based(known),
                "eavesdropped": _one_based(W),
                "view": s[W].tolist(),
                **_leakage(rc, W, known),
            },
        })
    return {
        "seed": args.seed,
        "mu": mu,
        "t": t,
        "delta": delta,
        "trials": trials,
        "summary": {"decodes": args.trials * rc.inst.m, "successes": successes},
        "leakage_exact": True,
        "budgets": {"enumeration": args.budget},
    }


def cmd_verify_strong(args) -> dict:
    rc = _load_pair(args)
    mu = rc.N if args.mu is None else args.mu
    t, delta = args.t or 0, args.delta or 0
    report = check_length_bounds(rc, mu, t, delta, budget=args.budget)
    doc = report.to_dict()
    leak = None if report.strongly_secure else find_leak(rc, mu, t, args.budget)
    doc["leak"] = None if leak is None else {"eavesdropped": _one_based(leak[0]), "known": _one_based(leak[1])}
    doc["budgets"] = {"enumeration": args.budget}
    return doc


def cmd_icsri_check(args) -> dict:
    inst = load_instance(args.instance)
    if inst.restricted is None:
        inst = inst.with_restricted([() for _ in range(inst.m)])
    doc = {}
    if args.code:
        rc = _load_pair(args)
        if rc.eta:
            raise ValidationError("icsri-check handles deterministic codes")
        doc["icsri_valid"] = icsri_valid(IndexCode(inst, rc.L))
    kappa, L = kappa_star(inst, args.budget)
    doc["kappa_star"] = "Infinity" if math.isinf(kappa) else kappa
    doc["witness"] = None if L is None else L.tolist()
    if args.code and not doc["icsri_valid"]:
        raise CliFailure(EXIT_VALIDATION, doc | {"error": "code violates validity or restrictions"})
    if math.isinf(kappa) and not args.code:
        raise CliFailure(EXIT_INFEASIBLE, doc | {"error": "no linear code meets the restrictions"})
    return doc


def cmd_gen_instance(args) -> dict:
    if args.seed is None:
        raise ValidationError("gen-instance needs --seed")
    field = parse_field(args.field)
    rng = np.random.default_rng(args.seed)
    inst = random_instance(field, args.n, args.m or args.n, rng, args.p_side)
    return instance_to_dict(inst)


# --- plumbing ------------------------------------------------------------------


def _render_text(doc, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(f"{pad}  -")
                lines.extend(_render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val)}")
    return lines


def _emit(doc: dict, args) -> None:
    if args.format == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        text = "\n".join(_render_text(doc)) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="icsec", description="Linear index codes: construction and security analysis")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration budget")
    common.add_argument("--seed", type=int)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, instance=True, code=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if instance:
            sp.add_argument("--instance", required=True)
        if code:
            sp.add_argument("--code", required=code == "required")
        sp.set_defaults(func=func)
        return sp

    add("analyze", cmd_analyze, "validity and block-security report", code="required")
    sp = add("construct", cmd_construct, "coset code of optimal length")
    sp.add_argument("--mu", type=int, default=0)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--alphas", help="comma-separated distinct nonzero field elements")
    sp.add_argument("--out-code", help="write the code file here")
    sp = add("minrank", cmd_minrank, "optimal linear length by exhaustive search")
    sp.add_argument("--fitting", action="store_true", help="also compute the graph min-rank by fitting matrices")
    sp.add_argument("--out-code", help="write the witness code file here")
    sp = add("simulate", cmd_simulate, "seeded transmissions with errors and eavesdropping", code="required")
    sp.add_argument("--mu", type=int)
    sp.add_argument("--t", type=int, default=0)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10)
    sp = add("verify-strong", cmd_verify_strong, "exact strong-security and length-bound check", code="required")
    sp.add_argument("--mu", type=int)
    sp.add_argument("--t", type=int, default=0)
    sp.add_argument("--delta", type=int, default=0)
    add("icsri-check", cmd_icsri_check, "restricted-information validity and optimal length", code="optional")
    sp = add("gen-instance", cmd_gen_instance, "seeded random instance", instance=False)
    sp.add_argument("--field", default="gf(2)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--p-side", type=float, default=0.5)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
        status = EXIT_OK
    except CliFailure as exc:
        doc, status = exc.doc, exc.status
    except BudgetExceeded as exc:
        doc, status = {"error": str(exc), "kind": "budget"}, EXIT_BUDGET
    except ConstructionError as exc:
        doc, status = {"error": str(exc), "kind": type(exc).__name__}, EXIT_INFEASIBLE
    except (ValidationError, FileNotFoundError) as exc:
        doc, status = {"error": str(exc), "kind": type(exc).__name__}, EXIT_VALIDATION
    _emit(doc, args)
    if status:
        print(f"icsec: {doc.get('error', 'failed')}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
