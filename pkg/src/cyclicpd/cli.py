"""Command-line entry point: verify / reproduce / search / eval / sample.

Every run emits UTF-8 JSON. Numeric output uses shortest round-trip decimal
serialization, so re-running a command with the same flags and seed gives
identical output modulo the timestamp fields.
"""
from __future__ import annotations

import argparse
import datetime
import json
import sys
import time

import numpy as np

from . import __version__
from . import inequalities as ineq
from . import verify as verify_mod
from .errors import CyclicPDError, FixtureMismatch
from .pdcore import CyclicFamily, Tolerance, random_family
from .search import (
    SearchConfig,
    minimize_margin,
    probe_conjecture,
    shapiro_margin,
)
from .serialize import family_from_dict, family_to_dict


def _parse_range(text: str) -> list[int]:
    """'3..6' -> [3,4,5,6]; '5' -> [5]; '3,5,7' -> [3,5,7]."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty range {text!r}")
    return out


def _tol_from(args) -> Tolerance:
    return Tolerance(rel=args.tol_rel, abs=args.tol_abs)


def _manifest(command: str, config: dict, seed: int, started: float, results) -> dict:
    return {
        "command": command,
        "tool_version": __version__,
        "master_seed": seed,
        "config": config,
        "started": datetime.datetime.fromtimestamp(
            started, tz=datetime.timezone.utc
        ).isoformat(),
        "elapsed_ms": round((time.time() - started) * 1000.0, 3),
        "results": results,
    }


def _emit(doc: dict, out_path) -> None:
    text = json.dumps(doc, indent=2)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _add_tol_flags(sp):
    sp.add_argument("--tol-rel", type=float, default=1e-9)
    sp.add_argument("--tol-abs", type=float, default=1e-12)


def cmd_verify(args) -> int:
    try:
        dims = _parse_range(args.dims)
        p_values = _parse_range(args.p)
        tol = _tol_from(args)
        fields = ("real", "complex") if args.field == "both" else (args.field,)
    except (ValueError, CyclicPDError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    started = time.time()
    outcomes = verify_mod.run_suites(args.suite, dims, p_values, args.trials, args.seed, tol, fields)
    results = {name: oc.to_dict() for name, oc in outcomes.items()}
    config = {
        "suite": args.suite, "dims": dims, "p": p_values, "trials": args.trials,
        "field": args.field, "tol": {"rel": tol.rel, "abs": tol.abs},
    }
    _emit(_manifest("verify", config, args.seed, started, results), args.out)
    hard_failures = sum(
        outcomes[name].unconditional_failures
        for name in ("unconditional", "identities")
        if name in outcomes
    )
    for name, oc in outcomes.items():
        tag = "FAIL" if (name != "conditional" and oc.unconditional_failures) else "ok"
        print(
            f"suite {name}: {sum(r.trials for r in oc.records)} checks, "
            f"{oc.unconditional_failures if name != 'conditional' else len(oc.events)} "
            f"{'failures' if name != 'conditional' else 'counterexample events'} [{tag}]",
            file=sys.stderr,
        )
    return 1 if hard_failures else 0


def cmd_reproduce(args) -> int:
    results = []
    try:
        if args.case in ("shapiro4-eig", "all"):
            rep = ineq.reproduce_counterexample()
            eigs = rep.detail["eigs"]
            print("published eigenvalues: 2.6393 +/- 0.1871i")
            print(f"computed  eigenvalues: {eigs[0]:.6f}, {eigs[1]:.6f}")
            results.append(rep.to_dict())
        if args.case in ("shapiro4-trace", "all"):
            fam = ineq.counterexample_family()
            rep = ineq.check_shapiro_trace(fam)
            print(f"published trace: {ineq.FIXTURE_TRACE}  computed trace: {rep.lhs:.6f} (bound {rep.rhs})")
            if abs(rep.lhs - ineq.FIXTURE_TRACE) > ineq.FIXTURE_ATOL:
                raise FixtureMismatch(f"trace {rep.lhs:.6f} deviates from published value")
            a, b, c, d = ineq.counterexample_fixture()
            results.append(ineq.check_s4_decomposition(a, b, c, d).to_dict())
    except FixtureMismatch as exc:
        print(f"fixture mismatch: {exc}", file=sys.stderr)
        return 1
    if args.out:
        _emit({"command": "reproduce", "case": args.case, "results": results}, args.out)
    return 0


def cmd_search(args) -> int:
    try:
        cfg = SearchConfig(
            p=args.p,
            n=args.n if args.n is not None else 1,
            restarts=args.restarts,
            max_iters=args.max_iters,
            step_init=args.step_init,
            ridge=args.ridge,
            master_seed=args.seed,
        )
        tol = _tol_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    started = time.time()
    if args.n is None and args.p in (12, 23):
        sweep = probe_conjecture(args.p, cfg, tol=tol)
        results = {str(n): res.to_dict() for n, res in sweep.items()}
        for n, res in sweep.items():
            print(f"p={args.p} n={n}: best margin {res.best_margin:.12g} [{res.classification}]")
            if res.classification == "verified_counterexample":
                print(f"CONJECTURE-RELEVANT EVENT: verified negative margin at p={args.p}, n={n}")
    else:
        res = minimize_margin(cfg, tol)
        results = res.to_dict()
        print(f"p={cfg.p} n={cfg.n}: best margin {res.best_margin:.12g} [{res.classification}]")
    config = cfg.to_dict()
    _emit(_manifest("search", config, args.seed, started, results), args.out)
    return 0


def cmd_eval(args) -> int:
    try:
        with open(args.family, encoding="utf-8") as fh:
            doc = json.load(fh)
        families = [family_from_dict(d) for d in (doc if isinstance(doc, list) else [doc])]
    except (OSError, ValueError, KeyError, CyclicPDError) as exc:
        print(f"error: cannot load family: {exc}", file=sys.stderr)
        return 2
    out = []
    for fam in families:
        if args.expr == "Fp":
            out.append(ineq.cyclic_sum_trace(fam))
        elif args.expr == "margin":
            out.append(shapiro_margin(fam))
        elif args.expr == "nesbitt_eigs":
            spec = ineq.bidirectional_spectrum(fam)
            out.append({
                "forward_backward_eigs": [[z.real, z.imag] for z in spec.values],
                "min_real": spec.min_real,
            })
        elif args.expr == "bidirectional":
            rep = ineq.check_bidirectional(fam)
            out.append(rep.to_dict())
    print(json.dumps(out[0] if len(out) == 1 else out))
    return 0


def cmd_sample(args) -> int:
    if args.n < 1 or args.p < 1 or args.count < 1 or args.field not in ("real", "complex"):
        print("error: invalid sample parameters", file=sys.stderr)
        return 2
    rng = np.random.default_rng(np.random.SeedSequence(entropy=args.seed))
    fams = [family_to_dict(random_family(args.n, args.p, rng, args.field)) for _ in range(args.count)]
    _emit(fams[0] if args.count == 1 else fams, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclicpd", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("verify", help="run randomized theorem/identity suites")
    sp.add_argument("--suite", choices=["unconditional", "conditional", "identities", "all"], default="all")
    sp.add_argument("--dims", default="1..3")
    sp.add_argument("--p", default="3..6")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--field", choices=["real", "complex", "both"], default="both")
    sp.add_argument("--out")
    _add_tol_flags(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("reproduce", help="reproduce the published p=4 counterexample")
    sp.add_argument("--case", choices=["shapiro4-eig", "shapiro4-trace", "all"], default="all")
    sp.add_argument("--out")
    _add_tol_flags(sp)
    sp.set_defaults(fn=cmd_reproduce)

    sp = sub.add_parser("search", help="minimize the cyclic trace-sum margin")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--restarts", type=int, default=32)
    sp.add_argument("--max-iters", type=int, default=3000)
    sp.add_argument("--step-init", type=float, default=0.5)
    sp.add_argument("--ridge", type=float, default=1e-8)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    _add_tol_flags(sp)
    sp.set_defaults(fn=cmd_search)

    sp = sub.add_parser("eval", help="evaluate a quantity on a stored family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--expr", choices=["Fp", "margin", "nesbitt_eigs", "bidirectional"], required=True)
    _add_tol_flags(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("sample", help="sample random families to a JSON file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--field", choices=["real", "complex"], default="real")
    sp.add_argument("--out")
    _add_tol_flags(sp)
    sp.set_defaults(fn=cmd_sample)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
