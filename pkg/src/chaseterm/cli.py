"""Command-line surface.

Subcommands: analyze, chase, monitor, irrelevant, termcheck, fixture.
Exit codes: 0 success, 2 chase failed on an EGD clash, 3 chase aborted
(step limit or cycle monitor), 4 unusable input.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence, Tuple

from chaseterm.chase import ABORTED, FAILED, ChasePolicy, ChaseResult, chase
from chaseterm.dynamic import (
    THIS_INSTANCE, data_dependent_guarantee, irrelevant_constraints,
)
from chaseterm.fixtures import rotation_family
from chaseterm.model import Constraint, Instance, ModelError, check_arities
from chaseterm.monitor import build_monitor, monitored_chase
from chaseterm.reports import (
    analysis_report, chase_report, export_dot, guarantee_report,
    monitor_report, to_json,
)
from chaseterm.static import analyze
from chaseterm.syntax import (
    ConstraintDocument, parse_constraints, parse_instance, print_constraints,
    print_instance,
)

EXIT_OK = 0
EXIT_FAILED = 2
EXIT_ABORTED = 3
EXIT_INPUT = 4

_CHECK_KEYS = {
    "wa": "weakly_acyclic",
    "safe": "safe",
    "strat": "stratified",
    "sr": "safely_restricted",
    "ir": "inductively_restricted",
}

# evidence fields of the report, per single-check selection
_CHECK_EVIDENCE = {
    "wa": ("dependency_graph", "dependency_cycle"),
    "safe": ("propagation_graph", "propagation_cycle"),
    "strat": ("chase_graph", "stratification_failures"),
    "sr": ("restriction_system", "restriction_failures"),
    "ir": ("parts", "part_failures"),
}


class CliError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; route everything to exit code 4 instead
    def error(self, message):
        raise CliError(message)


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _load(args) -> Tuple[Tuple[Constraint, ...], Optional[Instance]]:
    doc = parse_constraints(_read(args.constraints))
    I = None
    if getattr(args, "instance", None) is not None:
        I = parse_instance(_read(args.instance), getattr(args, "as_query", False))
        # instance and rules must agree on arities
        check_arities([f for c in doc.constraints
                       for f in tuple(c.body) + tuple(c.head)]
                      + sorted(I.facts, key=repr))
    return doc.constraints, I


def _write_dot(directory: str, name: str, graph) -> None:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, name + ".dot")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(export_dot(graph))
    print(f"wrote {path}")


def _chase_exit(res: ChaseResult) -> int:
    if res.outcome == FAILED:
        return EXIT_FAILED
    if res.outcome == ABORTED:
        return EXIT_ABORTED
    return EXIT_OK


def _print_chase_text(res: ChaseResult) -> None:
    print(f"outcome: {res.outcome} after {len(res.steps)} steps")
    if res.outcome == FAILED:
        a, b = res.clash
        print(f"constants clashed: {a.name} = {b.name} at step {res.failed_step}")
    elif res.outcome == ABORTED:
        detail = f"k={res.abort_k}" if res.abort_k is not None else "step limit"
        print(f"aborted: {res.abort_reason} ({detail})")
    if res.final is not None:
        print(f"final instance ({len(res.final.facts)} facts):")
        for line in print_instance(res.final).splitlines():
            print(f"  {line}")


def cmd_analyze(args) -> int:
    sigma, _ = _load(args)
    report = analyze(sigma)
    payload = analysis_report(report)
    if args.check != "all":
        key = _CHECK_KEYS[args.check]
        keep = ("constraints", key) + _CHECK_EVIDENCE[args.check]
        payload = {k: v for k, v in payload.items() if k in keep}
        payload["check"] = args.check
        payload["verdict"] = getattr(report, key)
    if args.dot:
        _write_dot(args.dot, "dependency", report.dependency_graph)
        _write_dot(args.dot, "propagation", report.propagation_graph)
        _write_dot(args.dot, "chase_graph", report.chase_graph)
        _write_dot(args.dot, "restriction_system", report.restriction_system)
    if args.json:
        sys.stdout.write(to_json(payload))
        return EXIT_OK
    if args.check != "all":
        print(f"{args.check}: {'yes' if payload['verdict'] else 'no'}")
        return EXIT_OK
    for flag, key in (("weakly acyclic", "weakly_acyclic"), ("safe", "safe"),
                      ("stratified", "stratified"),
                      ("safely restricted", "safely_restricted"),
                      ("inductively restricted", "inductively_restricted")):
        print(f"{flag}: {'yes' if getattr(report, key) else 'no'}")
    print(f"terminating on all instances: {'yes' if report.terminating else 'no'}")
    return EXIT_OK


def cmd_chase(args) -> int:
    sigma, I = _load(args)
    policy = ChasePolicy(order=args.order, seed=args.seed,
                         max_steps=args.max_steps)
    res = chase(I, sigma, policy)
    if args.json:
        sys.stdout.write(to_json(chase_report(res)))
    else:
        _print_chase_text(res)
    return _chase_exit(res)


def cmd_monitor(args) -> int:
    sigma, I = _load(args)
    res = monitored_chase(I, sigma, args.k,
                          ChasePolicy(order=args.order, seed=args.seed))
    graph = build_monitor(I, res.steps, sigma)
    payload = {"chase": chase_report(res, include_trace=False),
               "monitor": monitor_report(graph, args.k)}
    if args.dot:
        _write_dot(args.dot, "monitor", graph)
    if args.json:
        sys.stdout.write(to_json(payload))
    else:
        _print_chase_text(res)
        m = payload["monitor"]
        print(f"monitor: {len(m['nodes'])} nodes, {len(m['edges'])} edges, "
              f"{args.k}-cyclic: {'yes' if m['k_cyclic'] else 'no'}")
    return _chase_exit(res)


def cmd_irrelevant(args) -> int:
    sigma, I = _load(args)
    irrelevant, relevant, graph = irrelevant_constraints(I, sigma)
    if args.json:
        payload = {
            "irrelevant": [c.id for c in irrelevant],
            "relevant": [c.id for c in relevant],
            "chase_graph": {"nodes": sorted(c.id for c in graph.constraints),
                            "edges": [[a, b] for a, b in graph.edges]},
        }
        sys.stdout.write(to_json(payload))
        return EXIT_OK
    print(f"irrelevant: {', '.join(c.id for c in irrelevant) or '(none)'}")
    print(f"relevant:   {', '.join(c.id for c in relevant) or '(none)'}")
    return EXIT_OK


def cmd_termcheck(args) -> int:
    sigma, I = _load(args)
    report = analyze(sigma)
    if report.terminating:
        rungs = [name for name, key in
                 (("weak acyclicity", "weakly_acyclic"), ("safety", "safe"),
                  ("stratification", "stratified"),
                  ("safe restriction", "safely_restricted"),
                  ("inductive restriction", "inductively_restricted"))
                 if getattr(report, key)]
        payload = {"level": "AllInstances", "by": rungs,
                   "relevant": [c.id for c in sigma], "irrelevant": []}
        if args.json:
            sys.stdout.write(to_json(payload))
        else:
            print(f"guarantee: AllInstances (via {', '.join(rungs)})")
        return EXIT_OK
    guarantee = data_dependent_guarantee(I, sigma)
    if guarantee.level == THIS_INSTANCE:
        if args.json:
            sys.stdout.write(to_json(guarantee_report(guarantee)))
        else:
            print("guarantee: ThisInstance")
            print(f"relevant:   {', '.join(c.id for c in guarantee.relevant)}")
            print(f"irrelevant: {', '.join(c.id for c in guarantee.irrelevant) or '(none)'}")
        return EXIT_OK
    # no static guarantee even after pruning: run under the cycle monitor
    res = monitored_chase(I, sigma, args.k,
                          ChasePolicy(order=args.order, seed=args.seed))
    if args.json:
        payload = {"level": "None",
                   "relevant": [c.id for c in guarantee.relevant],
                   "irrelevant": [c.id for c in guarantee.irrelevant],
                   "monitored_chase": chase_report(res, include_trace=False)}
        sys.stdout.write(to_json(payload))
    else:
        print("guarantee: None; ran the chase under the cycle monitor")
        _print_chase_text(res)
    return _chase_exit(res)


def cmd_fixture(args) -> int:
    if args.family != "appendix-g":
        raise CliError(f"unknown fixture family {args.family!r}")
    I, sigma = rotation_family(args.k)
    os.makedirs(args.out, exist_ok=True)
    rules = os.path.join(args.out, f"rotation_{args.k}.rules")
    inst = os.path.join(args.out, f"rotation_{args.k}.inst")
    with open(rules, "w", encoding="utf-8") as fh:
        fh.write(print_constraints(ConstraintDocument(sigma)))
    with open(inst, "w", encoding="utf-8") as fh:
        fh.write(print_instance(I))
    print(f"wrote {rules}")
    print(f"wrote {inst}")
    return EXIT_OK


def _build_parser() -> _ArgumentParser:
    top = _ArgumentParser(prog="chaseterm",
                          description="chase and chase-termination toolbox")
    sub = top.add_subparsers(dest="command", required=True)

    def common_instance_flags(p):
        p.add_argument("instance", help="instance file")
        p.add_argument("--as-query", action="store_true", dest="as_query",
                       help="read uppercase identifiers as labeled nulls")

    p = sub.add_parser("analyze", help="run the static termination ladder")
    p.add_argument("constraints", help="rules file")
    p.add_argument("--check", choices=sorted(_CHECK_KEYS) + ["all"],
                   default="all")
    p.add_argument("--dot", metavar="DIR", help="write graph DOT files here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("chase", help="run the chase")
    p.add_argument("constraints")
    common_instance_flags(p)
    p.add_argument("--max-steps", type=int, default=10000, dest="max_steps")
    p.add_argument("--order", choices=["det", "rand"], default="det")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chase)

    p = sub.add_parser("monitor", help="chase under the k-cycle monitor")
    p.add_argument("constraints")
    common_instance_flags(p)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--order", choices=["det", "rand"], default="det")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dot", metavar="DIR")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("irrelevant",
                       help="split rules by reachability from the instance")
    p.add_argument("constraints")
    common_instance_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_irrelevant)

    p = sub.add_parser("termcheck",
                       help="ladder, then pruning, then monitored chase")
    p.add_argument("constraints")
    common_instance_flags(p)
    p.add_argument("-k", type=int, default=5)
    p.add_argument("--order", choices=["det", "rand"], default="det")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_termcheck)

    p = sub.add_parser("fixture", help="emit a generated fixture family")
    p.add_argument("family", help="family name (appendix-g)")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_fixture)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
