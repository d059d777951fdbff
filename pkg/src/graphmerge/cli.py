"""Command-line interface: one executable, machine-readable output.

Subcommands wrap the library modules; JSON on stdout is the default and is
schema-stable per subcommand.  Exit codes: 0 success, 1 verification
failure, 2 usage error.  `--deterministic` drops the timestamp field so
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import time

from . import bounds as bounds_mod
from . import gf2
from .errors import ForcedOutcomeImpossible, GraphMergeError
from .gf2 import BitMat
from .ghzverify import (
    PureStateSource,
    VerifConfig,
    ghz_diagonal_state,
    predicted_reject_rate,
    run_protocol,
    tau_pure,
)
from .graphs import Graph, Partition, PauliCorrection, validate_f
from .merge import merge_full, verify_merge
from .resources import complete_correction, impossibility_demo
from .sim import Forced, Random


def _emit(args, payload: dict) -> None:
    if not args.deterministic:
        payload = {**payload, "timestamp": time.time()}
    if args.pretty:
        for key, value in payload.items():
            print(f"{key}: {value}")
    else:
        json.dump(payload, sys.stdout, default=str)
        print()


def _parse_honest(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def _cmd_pivot(args) -> int:
    with open(args.infile) as fh:
        gamma = BitMat.from_text(fh.read())
    pd = gf2.pivot_decompose(gamma)
    _emit(args, {
        "r": pd.r,
        "U": pd.U.to_text().strip().split("\n"),
        "V": pd.V.to_text().strip().split("\n"),
        "R": pd.R.to_text().strip().split("\n"),
        "reconstructed": pd.reconstruct() == gamma,
    })
    return 0


def _merge_once(g, p, policy, backend):
    result = merge_full(g, p, policy, backend=backend)
    verdict = verify_merge(result)
    ok = verdict is True if isinstance(verdict, bool) else verdict >= 1 - 1e-9
    return result, verdict, ok


def _cmd_merge(args) -> int:
    with open(args.graph) as fh:
        g = Graph.from_text(fh.read())
    p = Partition.from_honest(g, _parse_honest(args.honest))
    backend = "statevector" if args.oracle else "tableau"

    if args.enumerate:
        checked = failures = 0
        total_prob = 0.0
        for bits in itertools.product((0, 1), repeat=g.n):
            policy = Forced(bits)
            try:
                result, verdict, ok = _merge_once(g, p, policy, backend)
            except ForcedOutcomeImpossible:
                continue
            checked += 1
            total_prob += policy.probability
            if not ok:
                failures += 1
        _emit(args, {
            "branches": checked,
            "failures": failures,
            "probability_total": total_prob,
            "verified": failures == 0 and checked > 0,
        })
        return 0 if failures == 0 else 1

    result, verdict, ok = _merge_once(g, p, Random(args.seed), backend)
    out = result.outcome
    _emit(args, {
        "outcomes": {
            "a": out.a.to01(),
            "b": out.b.to01(),
            "c": out.c.to01(),
            "d": out.d.to01(),
        },
        "correction": {"x": out.correction.x.to01(), "z": out.correction.z.to01()},
        "verified": ok,
        "fidelity": verdict if isinstance(verdict, float) else (1.0 if verdict else 0.0),
    })
    return 0 if ok else 1


def _cmd_twirl_check(args) -> int:
    with open(args.graph) as fh:
        g = Graph.from_text(fh.read())
    p = Partition.from_honest(g, _parse_honest(args.honest))
    rng = Random(args.seed).rng
    checked = failures = 0
    from .merge import correction_from_outcomes, plan
    from .sim import X, Z, prepare_graph_state

    plan_ = plan(g, p)
    r, nm, nh = plan_.pivot.r, p.n_m, p.n_h
    ref = prepare_graph_state(g, "tableau")
    for _ in range(args.trials):
        # Sample from the reachable correction set via the outcome formulas.
        corr = correction_from_outcomes(
            plan_,
            gf2.BitVec(rng.integers(0, 2, nm - r)),
            gf2.BitVec(rng.integers(0, 2, r)),
            gf2.BitVec(rng.integers(0, 2, r)),
            gf2.BitVec(rng.integers(0, 2, nh - r)),
        )
        checked += 1
        if not validate_f(g, p, corr):
            failures += 1
            continue
        x_full = complete_correction(g, p, corr.x, corr.z)
        gz = g.adj @ x_full
        z_h = gf2.BitVec([gz[v] for v in p.h])
        state = prepare_graph_state(g, "tableau")
        for v in range(g.n):
            if x_full[v]:
                state.apply(X(v))
            if gz[v]:
                state.apply(Z(v))
        if z_h != corr.z or not state.same_state(ref):
            failures += 1
    _emit(args, {
        "checked": checked,
        "failures": failures,
        "identity_holds": failures == 0,
    })
    return 0 if failures == 0 else 1


def _cmd_verify_ghz(args) -> int:
    source = PureStateSource.diagonal(args.n, args.theta)
    cfg = VerifConfig(n=args.n, s=args.S, seed=args.seed, trials=args.trials,
                      source=source)
    stats, _ = run_protocol(cfg)
    tau = tau_pure(ghz_diagonal_state(args.n, args.theta))
    predicted = predicted_reject_rate(tau)
    v = max(stats.verification_rounds, 1)
    sigma = math.sqrt(max(predicted * (1 - predicted), 0.0) / v)
    _emit(args, {
        "n": args.n,
        "S": args.S,
        "theta": args.theta,
        "rounds": stats.rounds,
        "verification_rounds": stats.verification_rounds,
        "reject_rate": stats.reject_rate,
        "tau": tau,
        "predicted": predicted,
        "sigma": sigma,
        "rounds_per_output": stats.rounds_per_output,
    })
    ok = abs(stats.reject_rate - predicted) <= max(3 * sigma, 1e-9)
    return 0 if ok else 1


def _cmd_bounds(args) -> int:
    if args.family == "ghz":
        res = bounds_mod.ghz_epsilon(bounds_mod.GhzBoundInput(n=args.n, s=args.S))
    else:
        res = bounds_mod.graph_epsilon(
            bounds_mod.GraphBoundInput(j=args.J, lam=getattr(args, "lambda"),
                                       c=args.c, m=args.m, n=args.n),
            precise=args.precise,
        )
    _emit(args, res.as_dict())
    return 0


def _cmd_impossibility(args) -> int:
    out = impossibility_demo(args.trials, seed=args.seed)
    _emit(args, out)
    return 0


def _cmd_selftest(args) -> int:
    """Exhaustive merge soundness for every graph and partition up to n=4."""
    checked = failures = 0
    limit = args.max_n
    for n in range(1, limit + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for mask in range(2 ** len(pairs)):
            g = Graph(n, [pairs[k] for k in range(len(pairs)) if (mask >> k) & 1])
            for hmask in range(2**n):
                honest = [v for v in range(n) if (hmask >> v) & 1]
                p = Partition.from_honest(g, honest)
                for bits in itertools.product((0, 1), repeat=n):
                    try:
                        result, verdict, ok = _merge_once(g, p, Forced(bits), "tableau")
                    except ForcedOutcomeImpossible:
                        continue
                    checked += 1
                    if not ok or not validate_f(g, p, result.outcome.correction):
                        failures += 1
    _emit(args, {"checked": checked, "failures": failures, "passed": failures == 0})
    return 0 if failures == 0 else 1


def _add_common(parser: argparse.ArgumentParser, top: bool) -> None:
    # Common flags parse in either position; SUPPRESS keeps a subcommand
    # parse from clobbering a value given before the subcommand.
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=default(0),
                        help="PRNG seed (default 0)")
    parser.add_argument("--json", action="store_true", default=default(True),
                        help="JSON output (default)")
    parser.add_argument("--pretty", action="store_true", default=default(False),
                        help="human-readable output")
    parser.add_argument("--deterministic", action="store_true", default=default(False),
                        help="omit the timestamp field for byte-identical replays")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmerge",
        description="graph-state merging, validation and protocol statistics",
    )
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pivot", help="Gaussian pivot decomposition of a matrix file")
    sp.add_argument("--in", dest="infile", required=True)
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_pivot)

    sp = sub.add_parser("merge", help="merge two copies of a graph state")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--honest", required=True, help='comma list, e.g. "0,1"')
    sp.add_argument("--oracle", action="store_true",
                    help="use the dense state-vector backend")
    sp.add_argument("--enumerate", action="store_true",
                    help="check every measurement branch")
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_merge)

    sp = sub.add_parser("twirl-check", help="correction-completion identity check")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--honest", required=True)
    sp.add_argument("--trials", type=int, default=100)
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_twirl_check)

    sp = sub.add_parser("verify-ghz", help="GHZ verification round statistics")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--S", type=int, required=True)
    sp.add_argument("--theta", type=float, default=0.0)
    sp.add_argument("--trials", type=int, default=100_000)
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_verify_ghz)

    sp = sub.add_parser("bounds", help="closed-form security bounds")
    bsub = sp.add_subparsers(dest="family", required=True)
    bp = bsub.add_parser("ghz")
    bp.add_argument("--n", type=int, required=True)
    bp.add_argument("--S", type=int, required=True)
    _add_common(bp, top=False)
    bp.set_defaults(fn=_cmd_bounds)
    gp = bsub.add_parser("graph")
    gp.add_argument("--J", type=float, required=True)
    gp.add_argument("--lambda", type=float, required=True)
    gp.add_argument("--c", type=float, required=True)
    gp.add_argument("--m", type=float, required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--precise", action="store_true")
    _add_common(gp, top=False)
    gp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("impossibility-demo",
                        help="Bell-pair distinguisher advantage estimate")
    sp.add_argument("--trials", type=int, default=100_000)
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_impossibility)

    sp = sub.add_parser("selftest", help="exhaustive small-graph merge suite")
    sp.add_argument("--max-n", type=int, default=4)
    _add_common(sp, top=False)
    sp.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GraphMergeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
