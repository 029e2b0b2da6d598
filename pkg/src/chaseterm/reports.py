"""Machine-readable renderings: DOT for graphs, JSON-ready dicts for reports.

Everything here is deterministic: nodes and edges are emitted in a fixed
order and to_json sorts keys, so identical inputs give byte-identical
output. Negative verdicts are re-validated against their witnesses before
being rendered; a report that cannot back up a "no" with a checkable cycle
or firing witness raises instead of printing.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Sequence, Tuple

from chaseterm.chase import ChaseResult, ChaseStepRecord
from chaseterm.dynamic import ChaseGraph, TerminationGuarantee
from chaseterm.firing import PRECEDES, PRECEDES_P, verify_witness
from chaseterm.model import Constraint, Position, fact_key, position_key
from chaseterm.monitor import MonitorGraph, edge_key, is_k_cyclic
from chaseterm.static import (
    AnalysisReport, PositionGraph, RestrictionSystem, dependency_graph,
    propagation_graph,
)
from chaseterm.syntax import _print_atom, _print_term, print_constraint


class ReportIntegrityError(RuntimeError):
    """A negative verdict arrived without a witness that re-checks."""


def position_str(p: Position) -> str:
    return f"{p.relation}^{p.index}"


def _positions(ps) -> List[str]:
    return [position_str(p) for p in sorted(ps, key=position_key)]


def _facts(facts) -> List[str]:
    return [_print_atom(a) for a in sorted(facts, key=fact_key)]


def _assignment(pairs) -> Dict[str, str]:
    return {name: _print_term(v) for name, v in pairs}


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------

def _dot(lines: List[str]) -> str:
    if not lines:
        return "digraph g { }\n"
    return "digraph g {\n" + "".join(f"  {ln}\n" for ln in lines) + "}\n"


def _monitor_node_str(node) -> str:
    return f"{node.null.name}@{{{','.join(_positions(node.created_at))}}}"


def export_dot(g) -> str:
    """Render any of the package's graphs as a DOT digraph. Special edges
    (fresh-null creators) carry a dashed style and a special=true comment."""
    if isinstance(g, PositionGraph):
        lines = [f'"{position_str(p)}";' for p in g.nodes]
        lines += [f'"{position_str(s)}" -> "{position_str(t)}";'
                  for s, t in g.regular]
        lines += [f'"{position_str(s)}" -> "{position_str(t)}"'
                  ' [style=dashed]; /* special=true */'
                  for s, t in g.special]
        return _dot(lines)
    if isinstance(g, (ChaseGraph, RestrictionSystem)):
        ids = sorted(c.id for c in g.constraints)
        if isinstance(g, RestrictionSystem):
            lines = [f'"{i}"; /* f = {{{", ".join(_positions(g.f[i]))}}} */'
                     for i in ids]
        else:
            lines = [f'"{i}";' for i in ids]
        lines += [f'"{a}" -> "{b}";' for a, b in g.edges]
        return _dot(lines)
    if isinstance(g, MonitorGraph):
        def node_key(n):
            return (n.null.creation_index, n.null.name)
        lines = [f'"{_monitor_node_str(n)}";'
                 for n in sorted(g.nodes, key=node_key)]
        for e in sorted(g.edges, key=edge_key):
            label = f"{e.constraint_id} | {','.join(_positions(e.body_positions))}"
            lines.append(f'"{_monitor_node_str(e.source)}" -> '
                         f'"{_monitor_node_str(e.target)}" [label="{label}"];')
        return _dot(lines)
    raise TypeError(f"no DOT form for {type(g).__name__}")


# ---------------------------------------------------------------------------
# Witness re-validation
# ---------------------------------------------------------------------------

def _check_cycle(g: PositionGraph, cyc) -> None:
    if cyc is None or len(cyc) < 2 or cyc[0] != cyc[-1]:
        raise ReportIntegrityError(f"not a closed cycle: {cyc!r}")
    steps = list(zip(cyc, cyc[1:]))
    edges, special = set(g.edges), set(g.special)
    if not all(e in edges for e in steps):
        raise ReportIntegrityError(f"cycle uses absent edges: {cyc!r}")
    if not any(e in special for e in steps):
        raise ReportIntegrityError(f"cycle has no special edge: {cyc!r}")


def _check_component_failures(failures, constraints: Sequence[Constraint],
                              build_graph) -> None:
    by_id = {c.id: c for c in constraints}
    for ids, cyc in failures:
        comp = [by_id[i] for i in ids]
        _check_cycle(build_graph(comp), cyc)


def _check_graph_witnesses(constraints, witnesses, mode: str,
                           f: Optional[Dict[str, frozenset]] = None) -> None:
    by_id = {c.id: c for c in constraints}
    for (aid, bid), w in witnesses.items():
        guard = f[aid] if f is not None else frozenset()
        if not verify_witness(by_id[aid], by_id[bid], w, guard, mode):
            raise ReportIntegrityError(f"stale firing witness for ({aid}, {bid})")


# ---------------------------------------------------------------------------
# JSON-ready dicts
# ---------------------------------------------------------------------------

def _position_graph_dict(g: PositionGraph) -> dict:
    return {
        "nodes": [position_str(p) for p in g.nodes],
        "regular": [[position_str(s), position_str(t)] for s, t in g.regular],
        "special": [[position_str(s), position_str(t)] for s, t in g.special],
    }


def _witness_dict(w) -> dict:
    return {
        "alpha": w.alpha_id,
        "beta": w.beta_id,
        "instance": _facts(w.instance.facts),
        "alpha_assignment": _assignment(w.assignment_a),
        "beta_assignment": _assignment(w.assignment_b),
        "successor": _facts(w.successor.facts),
    }


def _constraint_graph_dict(constraints, edges, witnesses) -> dict:
    return {
        "nodes": sorted(c.id for c in constraints),
        "edges": [[a, b] for a, b in edges],
        "witnesses": {f"{a}->{b}": _witness_dict(w)
                      for (a, b), w in sorted(witnesses.items())},
    }


def _failures(failures) -> list:
    return [{"component": list(ids), "cycle": [position_str(p) for p in cyc]}
            for ids, cyc in failures]


def _cycle(cyc) -> Optional[list]:
    return None if cyc is None else [position_str(p) for p in cyc]


def analysis_report(r: AnalysisReport) -> dict:
    """Validates every negative verdict's witness, then renders the bundle."""
    if not r.weakly_acyclic:
        _check_cycle(r.dependency_graph, r.dependency_cycle)
    if not r.safe:
        _check_cycle(r.propagation_graph, r.propagation_cycle)
    _check_component_failures(r.stratification_failures, r.constraints,
                              dependency_graph)
    _check_component_failures(r.restriction_failures, r.constraints,
                              propagation_graph)
    _check_component_failures(r.part_failures, r.constraints,
                              propagation_graph)
    _check_graph_witnesses(r.constraints, r.chase_graph.witnesses, PRECEDES)
    _check_graph_witnesses(r.constraints, r.restriction_system.witnesses,
                           PRECEDES_P, r.restriction_system.f)
    s = r.restriction_system
    return {
        "constraints": [print_constraint(c) for c in r.constraints],
        "weakly_acyclic": r.weakly_acyclic,
        "dependency_graph": _position_graph_dict(r.dependency_graph),
        "dependency_cycle": _cycle(r.dependency_cycle),
        "safe": r.safe,
        "propagation_graph": _position_graph_dict(r.propagation_graph),
        "propagation_cycle": _cycle(r.propagation_cycle),
        "stratified": r.stratified,
        "chase_graph": _constraint_graph_dict(
            r.chase_graph.constraints, r.chase_graph.edges,
            r.chase_graph.witnesses),
        "stratification_failures": _failures(r.stratification_failures),
        "safely_restricted": r.safely_restricted,
        "restriction_system": {
            **_constraint_graph_dict(s.constraints, s.edges, s.witnesses),
            "f": {c.id: _positions(s.f[c.id]) for c in s.constraints},
        },
        "restriction_failures": _failures(r.restriction_failures),
        "inductively_restricted": r.inductively_restricted,
        "parts": [[c.id for c in piece] for piece in r.parts],
        "part_failures": _failures(r.part_failures),
        "terminating": r.terminating,
    }


def guarantee_report(g: TerminationGuarantee) -> dict:
    graph = None
    if g.chase_graph is not None:
        _check_graph_witnesses(g.chase_graph.constraints,
                               g.chase_graph.witnesses, PRECEDES)
        graph = _constraint_graph_dict(g.chase_graph.constraints,
                                       g.chase_graph.edges,
                                       g.chase_graph.witnesses)
    return {
        "level": g.level,
        "relevant": [c.id for c in g.relevant],
        "irrelevant": [c.id for c in g.irrelevant],
        "chase_graph": graph,
        "parts": [[c.id for c in piece] for piece in g.parts],
    }


def _step_dict(rec: ChaseStepRecord) -> dict:
    return {
        "index": rec.index,
        "constraint": rec.constraint_id,
        "assignment": _assignment(rec.assignment),
        "added": _facts(rec.added_facts),
        "merged": (None if rec.merged_pair is None
                   else [_print_term(v) for v in rec.merged_pair]),
    }


def chase_report(res: ChaseResult, include_trace: bool = True) -> dict:
    out = {
        "outcome": res.outcome,
        "steps": len(res.steps),
        "final": None if res.final is None else _facts(res.final.facts),
        "failed_step": res.failed_step,
        "clash": (None if res.clash is None
                  else [_print_term(v) for v in res.clash]),
        "abort_reason": res.abort_reason,
        "abort_k": res.abort_k,
    }
    if include_trace:
        out["trace"] = [_step_dict(rec) for rec in res.steps]
    return out


def monitor_report(g: MonitorGraph, k: Optional[int] = None) -> dict:
    def node_key(n):
        return (n.null.creation_index, n.null.name)
    out = {
        "nodes": [{"null": f"?{n.null.name}",
                   "created_at": _positions(n.created_at)}
                  for n in sorted(g.nodes, key=node_key)],
        "edges": [{"source": _monitor_node_str(e.source),
                   "target": _monitor_node_str(e.target),
                   "constraint": e.constraint_id,
                   "body_positions": _positions(e.body_positions)}
                  for e in sorted(g.edges, key=edge_key)],
    }
    if k is not None:
        cyclic, chain = is_k_cyclic(g, k)
        out["k"] = k
        out["k_cyclic"] = cyclic
        out["chain"] = (None if chain is None else
                        [{"source": _monitor_node_str(e.source),
                          "target": _monitor_node_str(e.target)}
                         for e in chain])
    return out


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
