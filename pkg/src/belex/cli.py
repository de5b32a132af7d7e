"""Command-line interface.

Exit codes: 0 success, 1 input error (single-line diagnostic on stderr),
2 internal-consistency failure (including verification claim failures).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import EngineError, InternalConsistencyError, InvalidRequestError
from .expectations import DEFAULT_EPS_BEL
from .network import load_network
from .oracle import CLAIM_IDS, OracleConfig, check_claims
from .planner import DEFAULT_RHO, ExplainSettings, plan_explanation
from .propagation import (
    History,
    history_to_json_dict,
    load_injection,
    load_scenario,
    run_scenario,
)
from .realizer import realize


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _print_history_text(history: History) -> None:
    for snap in history.snapshots:
        grounded = ", ".join(f"{n}={s}" for n, s in snap.grounded) or "(none)"
        print(f"t={snap.t}  grounded: {grounded}")
        for node_id, ns in snap.nodes.items():
            node = history.network.node(node_id)
            print(f"  {node_id}:")
            for k, state in enumerate(node.states):
                print(
                    f"    {state:<12} pi={ns.pi[k]:<10.6f} "
                    f"lambda={ns.lam[k]:<10.6f} bel={ns.bel[k]:<10.6f}"
                )


def _emit_history(history: History, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(history_to_json_dict(history), indent=2))
    else:
        _print_history_text(history)


def _load_history(args) -> History:
    if getattr(args, "inject", None):
        if getattr(args, "network", None) or getattr(args, "scenario", None):
            raise InvalidRequestError("--inject excludes --network/--scenario")
        return load_injection(_read(args.inject))
    if not getattr(args, "network", None):
        raise InvalidRequestError("either --network or --inject is required")
    network = load_network(_read(args.network))
    groundings = load_scenario(_read(args.scenario)) if args.scenario else []
    return run_scenario(network, groundings)


def cmd_run(args) -> int:
    _emit_history(_load_history(args), args.format)
    return 0


def cmd_inject(args) -> int:
    _emit_history(load_injection(_read(args.inject)), args.format)
    return 0


def cmd_explain(args) -> int:
    history = _load_history(args)
    node, sep, state = args.focal.partition("=")
    if not sep or not node or not state:
        raise InvalidRequestError(f"--focal must look like NODE=state, got {args.focal!r}")
    network = history.network
    state = network.resolve_state(node, state)
    f = network.state_index(node, state)
    plan = plan_explanation(
        history,
        node,
        f,
        args.from_t,
        args.to,
        args.support,
        ExplainSettings(rho=args.rho, eps_bel=args.eps_bel),
    )
    realized = realize(plan)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "plan": plan.to_json_dict(),
                    "text": realized.text,
                    "paragraphs": list(realized.paragraphs),
                    "slots": realized.slots,
                },
                indent=2,
            )
        )
    else:
        print(realized.text)
    return 0


def cmd_verify(args) -> int:
    if args.claims == "all":
        claims = CLAIM_IDS
    else:
        claims = tuple(c.strip() for c in args.claims.split(",") if c.strip())
        unknown = set(claims) - set(CLAIM_IDS)
        if unknown:
            raise InvalidRequestError(
                f"unknown claims {sorted(unknown)}; available: {', '.join(CLAIM_IDS)}"
            )
    report = check_claims(args.seed, args.trials, OracleConfig(claims=claims))
    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        print(report.summary_text())
    return 0 if report.passed else 2


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(args.persist), host=args.host, port=args.port)
    return 0


def _add_format(parser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="belex", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="load a network and scenario, print snapshots")
    p_run.add_argument("--network", required=True)
    p_run.add_argument("--scenario")
    _add_format(p_run)
    p_run.set_defaults(func=cmd_run)

    p_inject = sub.add_parser(
        "inject", help="load a snapshot-injection file, print snapshots"
    )
    p_inject.add_argument("--inject", required=True)
    _add_format(p_inject)
    p_inject.set_defaults(func=cmd_inject)

    p_explain = sub.add_parser(
        "explain", help="plan and realize an explanation for a belief change"
    )
    p_explain.add_argument("--network")
    p_explain.add_argument("--scenario")
    p_explain.add_argument("--inject")
    p_explain.add_argument("--focal", required=True, metavar="NODE=STATE")
    p_explain.add_argument("--from", dest="from_t", type=int, required=True)
    p_explain.add_argument("--to", type=int, required=True)
    p_explain.add_argument(
        "--support", choices=("causal", "evidential", "auto"), default="auto"
    )
    p_explain.add_argument("--rho", type=float, default=DEFAULT_RHO)
    p_explain.add_argument("--eps-bel", type=float, default=DEFAULT_EPS_BEL)
    _add_format(p_explain)
    p_explain.set_defaults(func=cmd_explain)

    p_verify = sub.add_parser("verify", help="run the randomized claim suite")
    p_verify.add_argument("--claims", default="all")
    p_verify.add_argument("--trials", type=int, default=10000)
    p_verify.add_argument("--seed", type=int, default=0)
    _add_format(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--persist", metavar="DIR")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        if exc.detail:
            print(json.dumps(exc.detail, default=str), file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
